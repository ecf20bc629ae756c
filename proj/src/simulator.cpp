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

#include "duration/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace duration {

namespace {

__extension__ typedef unsigned __int128 u128;

// Trials are reduced in fixed-size blocks, in block order, so the estimate
// does not depend on the thread count.
constexpr std::int64_t kBlockSize = 4096;

struct BlockSums {
  std::uint64_t duration = 0;
  std::uint64_t duration_sq = 0;
};

// First (time, rank) at which the policy stops, scanning 1..n.
std::optional<CandidateState> FirstStop(std::span<const int> ranks,
                                        const PolicyThresholds& policy) {
  const int n = static_cast<int>(ranks.size());
  for (int k = 1; k <= n; ++k) {
    const int r = ranks[static_cast<std::size_t>(k - 1)];
    if (policy.stops(k, r)) return CandidateState{k, r};
  }
  return std::nullopt;
}

TrialOutcome MakeOutcome(std::optional<CandidateState> stop,
                         std::optional<int> end_time, int n) {
  TrialOutcome out;
  out.stop = stop;
  out.end_time = end_time;
  if (stop) {
    out.duration = *end_time - stop->time;
    out.normalized_payoff =
        static_cast<double>(out.duration) / static_cast<double>(n);
  }
  return out;
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DURATION_SOLVER_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void FillRanks(std::span<int> ranks, SplitMix64& rng) {
  for (std::size_t k = 1; k <= ranks.size(); ++k) {
    ranks[k - 1] = 1 + static_cast<int>(uniform_below(rng, k));
  }
}

}  // namespace

RankSequence::RankSequence(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  for (std::size_t k = 1; k <= ranks_.size(); ++k) {
    const int r = ranks_[k - 1];
    if (r < 1 || static_cast<std::size_t>(r) > k) {
      throw std::domain_error("RankSequence: y_" + std::to_string(k) + " = " +
                              std::to_string(r) + " outside 1.." +
                              std::to_string(k));
    }
  }
}

RankSequence generate_rank_sequence(int n, SplitMix64& rng) {
  if (n < 1) throw std::domain_error("generate_rank_sequence: need n >= 1");
  std::vector<int> ranks(static_cast<std::size_t>(n));
  FillRanks(ranks, rng);
  return RankSequence(std::move(ranks));
}

RankSequence permutation_to_ranks(std::span<const int> perm) {
  const std::size_t n = perm.size();
  std::vector<bool> seen(n + 1, false);
  for (int v : perm) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)]) {
      throw std::domain_error("permutation_to_ranks: not a permutation of 1..n");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  std::vector<int> ranks(n);
  for (std::size_t k = 0; k < n; ++k) {
    ranks[k] = static_cast<int>(std::count_if(
        perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k) + 1,
        [&](int v) { return v <= perm[k]; }));
  }
  return RankSequence(std::move(ranks));
}

int candidacy_end(std::span<const int> ranks, int i, int rank) {
  const int n = static_cast<int>(ranks.size());
  if (i < 1 || i > n || rank < 1 || rank > kCandidateRanks) {
    throw std::domain_error("candidacy_end: invalid held state");
  }
  auto y = [&](int k) { return ranks[static_cast<std::size_t>(k - 1)]; };
  int k = i + 1;
  if (rank == 1) {
    // Still relatively best until a new best arrives.
    while (k <= n && y(k) != 1) ++k;
    ++k;
  }
  while (k <= n && y(k) > kCandidateRanks) ++k;
  return std::min(k, n + 1);
}

TrialOutcome realized_outcome(const RankSequence& seq,
                              const PolicyThresholds& policy) {
  const auto stop = FirstStop(seq.ranks(), policy);
  std::optional<int> end;
  if (stop) end = candidacy_end(seq.ranks(), stop->time, stop->rank);
  return MakeOutcome(stop, end, seq.n());
}

TrialOutcome outcome_from_permutation(std::span<const int> perm,
                                      const PolicyThresholds& policy) {
  const RankSequence seq = permutation_to_ranks(perm);
  const int n = seq.n();
  const auto stop = FirstStop(seq.ranks(), policy);
  std::optional<int> end;
  if (stop) {
    const int held = perm[static_cast<std::size_t>(stop->time - 1)];
    int rank_now = stop->rank;
    int k = stop->time + 1;
    for (; k <= n; ++k) {
      if (perm[static_cast<std::size_t>(k - 1)] < held) ++rank_now;
      if (rank_now > kCandidateRanks) break;
    }
    end = k;
  }
  return MakeOutcome(stop, end, n);
}

McEstimate monte_carlo(const Horizon& horizon, const PolicyThresholds& policy,
                       std::int64_t trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw std::domain_error("monte_carlo: need trials >= 1");
  validate(policy, horizon);
  const int n = horizon.n();
  const std::int64_t blocks = (trials + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> sums(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next_block{0};

  auto worker = [&] {
    std::vector<int> ranks(static_cast<std::size_t>(n));
    for (std::int64_t b = next_block++; b < blocks; b = next_block++) {
      BlockSums block;
      const std::int64_t first = b * kBlockSize;
      const std::int64_t last = std::min(trials, first + kBlockSize);
      for (std::int64_t t = first; t < last; ++t) {
        SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(t));
        FillRanks(ranks, rng);
        const auto stop = FirstStop(ranks, policy);
        if (!stop) continue;
        const auto d = static_cast<std::uint64_t>(
            candidacy_end(ranks, stop->time, stop->rank) - stop->time);
        block.duration += d;
        block.duration_sq += d * d;
      }
      sums[static_cast<std::size_t>(b)] = block;
    }
  };

  const int workers = static_cast<int>(
      std::min<std::int64_t>(ResolveThreads(threads), blocks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  // Integer totals are exact, so the reduction order cannot matter.
  u128 total = 0;
  u128 total_sq = 0;
  for (const BlockSums& block : sums) {
    total += block.duration;
    total_sq += block.duration_sq;
  }
  const auto count = static_cast<u128>(trials);
  const long double nd = n;
  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.mean = static_cast<double>(static_cast<long double>(total) /
                                 static_cast<long double>(trials) / nd);
  if (trials > 1) {
    // Sample variance of the duration, numerator kept exact.
    const u128 numerator = total_sq * count - total * total;
    const long double var =
        static_cast<long double>(numerator) /
        (static_cast<long double>(trials) * static_cast<long double>(trials - 1));
    est.std_error = static_cast<double>(
        std::sqrt(var) / nd / std::sqrt(static_cast<long double>(trials)));
  }
  return est;
}

double exhaustive_policy_value(const Horizon& horizon,
                               const PolicyThresholds& policy) {
  const int n = horizon.n();
  if (n > kMaxExhaustiveHorizon) {
    throw std::length_error("exhaustive_policy_value: n = " + std::to_string(n) +
                            " exceeds " + std::to_string(kMaxExhaustiveHorizon));
  }
  validate(policy, horizon);

  // Every rank sequence has probability 1/n!, so summing integer durations
  // gives the expectation exactly up to the final division.
  std::vector<int> ranks(static_cast<std::size_t>(n), 1);
  std::uint64_t total = 0;
  std::uint64_t count = 0;
  while (true) {
    if (const auto stop = FirstStop(ranks, policy)) {
      total += static_cast<std::uint64_t>(
          candidacy_end(ranks, stop->time, stop->rank) - stop->time);
    }
    ++count;
    // Mixed-radix increment over y_k in 1..k.
    int k = n;
    while (k >= 2 && ranks[static_cast<std::size_t>(k - 1)] == k) {
      ranks[static_cast<std::size_t>(k - 1)] = 1;
      --k;
    }
    if (k < 2) break;
    ++ranks[static_cast<std::size_t>(k - 1)];
  }
  return static_cast<double>(total) / static_cast<double>(count) /
         static_cast<double>(n);
}

}  // namespace duration
