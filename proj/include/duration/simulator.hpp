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

#ifndef DURATION_SIMULATOR_HPP_
#define DURATION_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "duration/exact_solver.hpp"
#include "duration/rng.hpp"

namespace duration {

// Relative ranks y_1..y_n with 1 <= y_k <= k.
class RankSequence {
 public:
  // Throws std::domain_error if some y_k is outside 1..k.
  explicit RankSequence(std::vector<int> ranks);

  int n() const { return static_cast<int>(ranks_.size()); }
  // 1-based.
  int operator[](int k) const { return ranks_[static_cast<std::size_t>(k - 1)]; }
  std::span<const int> ranks() const { return ranks_; }

 private:
  std::vector<int> ranks_;
};

struct TrialOutcome {
  std::optional<CandidateState> stop;  // empty if the policy never stopped
  std::optional<int> end_time;         // first time the held item is no
                                       // longer a candidate, n+1 if never
  int duration = 0;                    // end_time - stop time, 0 if no stop
  double normalized_payoff = 0.0;      // duration / n
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

// Draws y_k uniformly on {1..k}, independently.  n >= 1.
RankSequence generate_rank_sequence(int n, SplitMix64& rng);

// y_k = #{i <= k : perm[i] <= perm[k]}.  perm must be a permutation of 1..n.
RankSequence permutation_to_ranks(std::span<const int> perm);

// End of candidacy for an item held from time i with relative rank `rank`
// (1 or 2), read off the later relative ranks.  A rank-2 hold ends at the
// next candidate arrival; a rank-1 hold survives one new best and ends at the
// next candidate arrival after it.  Returns n + 1 if it never ends.
int candidacy_end(std::span<const int> ranks, int i, int rank);

TrialOutcome realized_outcome(const RankSequence& seq,
                              const PolicyThresholds& policy);

// Same outcome computed from the underlying permutation: the end time is the
// first moment the held item's rank among the items seen so far exceeds 2.
TrialOutcome outcome_from_permutation(std::span<const int> perm,
                                      const PolicyThresholds& policy);

// Mean and standard error of the normalized payoff over `trials` independent
// rank sequences.  Bit-identical for fixed (horizon, policy, trials, seed)
// whatever `threads` is; threads = 0 reads DURATION_SOLVER_THREADS or falls
// back to the hardware concurrency.
McEstimate monte_carlo(const Horizon& horizon, const PolicyThresholds& policy,
                       std::int64_t trials, std::uint64_t seed, int threads = 0);

inline constexpr int kMaxExhaustiveHorizon = 10;

// Exact policy value by enumerating all n! rank sequences.  n <= 10, else
// std::length_error.
double exhaustive_policy_value(const Horizon& horizon,
                               const PolicyThresholds& policy);

}  // namespace duration

#endif  // DURATION_SIMULATOR_HPP_
