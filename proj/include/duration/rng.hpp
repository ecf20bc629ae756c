// Copyright 2026 The duration-solver Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DURATION_RNG_HPP_
#define DURATION_RNG_HPP_

#include <cstdint>
#include <limits>

namespace duration {

// SplitMix64 (Steele, Lea & Flood, 2014).  Each Monte Carlo trial draws from
// its own substream keyed by (seed, trial index), so results do not depend
// on how trials are scheduled across threads.
//
// The output sequence is part of the reproducibility contract: changing the
// mixing constants or the substream derivation must bump kRngVersion.
inline constexpr const char* kRngAlgorithm = "splitmix64-substream";
inline constexpr int kRngVersion = 1;

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  // Substream for one trial.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += kGolden;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

// Exactly uniform integer on {0, ..., bound - 1} (Lemire's multiply-shift
// with rejection).  bound >= 1.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound);

}  // namespace duration

#endif  // DURATION_RNG_HPP_
