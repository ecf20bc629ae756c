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

#ifndef DURATION_EXACT_SOLVER_HPP_
#define DURATION_EXACT_SOLVER_HPP_

#include <array>
#include <vector>

namespace duration {

// Relative ranks that count as candidates: the relatively best (1) and the
// relatively second best (2).
inline constexpr int kCandidateRanks = 2;

// Number of items N observed in sequence.  N >= 2.
class Horizon {
 public:
  explicit Horizon(int n);
  int n() const { return n_; }

 private:
  int n_;
};

// A (time, relative rank) state of the embedded candidate chain.
struct CandidateState {
  int time = 1;
  int rank = 1;

  friend bool operator==(const CandidateState&, const CandidateState&) = default;
};

// Stop at a relatively best item at time k iff k > k1, and at a relatively
// second-best item iff k > k2.
struct PolicyThresholds {
  int k1 = 0;
  int k2 = 0;

  bool stops(int time, int rank) const {
    return (rank == 1 && time > k1) || (rank == 2 && time > k2);
  }
  friend bool operator==(const PolicyThresholds&, const PolicyThresholds&) = default;
};

// Throws std::domain_error unless 0 <= k1 <= k2 <= n.
void validate(const PolicyThresholds& policy, const Horizon& horizon);

// Law of the time T_i at which an item held from time i (with relative rank
// `rank` at that moment) stops being a candidate.  Support is i+1..n+1; the
// mass at n+1 is the probability it is still a candidate after the last item.
class DurationPmf {
 public:
  DurationPmf(int start, int rank, int n, std::vector<double> mass);

  int start() const { return start_; }
  int rank() const { return rank_; }
  int n() const { return n_; }
  int first_end_time() const { return start_ + 1; }
  int last_end_time() const { return n_ + 1; }

  // P{T_i = end_time}; 0 outside the support.
  double at(int end_time) const;
  double survival() const { return mass_.back(); }
  double total() const;
  // E[T_i - i].
  double mean_duration() const;

  const std::vector<double>& masses() const { return mass_; }

 private:
  int start_;
  int rank_;
  int n_;
  std::vector<double> mass_;  // mass_[j] = P{T_i = start + 1 + j}
};

DurationPmf duration_pmf(int i, int rank, const Horizon& horizon);

// phi(k, r) = E[(T_k - k) / N | Y_k = r]; zero for r > 2.
double payoff(int k, int rank, const Horizon& horizon);

// Same quantity summed directly over duration_pmf.  Independent check on
// payoff(); throws if the state (k, rank) is impossible (rank > k).
double payoff_from_pmf(int k, int rank, const Horizon& horizon);

// phi(k, 1) and phi(k, 2) for every k in O(N).
struct PayoffTable {
  std::vector<double> best;    // best[k - 1] = phi(k, 1)
  std::vector<double> second;  // second[k - 1] = phi(k, 2)
};
PayoffTable payoff_table(const Horizon& horizon);

// One-step law of the embedded candidate chain: probability that, from a
// candidate at time k, the next candidate arrives at time s with a given
// rank (each rank in 1..min(a, s) carries this same mass).  a = number of
// candidate ranks.  Throws if s <= k or the times are out of range.
double transition_prob(int k, int s, const Horizon& horizon,
                       int a = kCandidateRanks);

// Probability that no candidate follows time k.
double absorption_prob(int k, const Horizon& horizon, int a = kCandidateRanks);

// T phi(k): expected payoff when stopping at the next candidate after time k.
// Closed form in harmonic differences; independent of the rank held at k.
double mean_operator(int k, const Horizon& horizon);

// The same by direct summation over transition_prob and payoff.  k >= 2.
double mean_operator_direct(int k, const Horizon& horizon);

// Backward induction output.
class SolveResult {
 public:
  SolveResult(PolicyThresholds thresholds,
              std::vector<std::array<double, 2>> state_values,
              std::vector<double> continuation);

  const PolicyThresholds& thresholds() const { return thresholds_; }
  // v_N, the optimal expected duration divided by N.
  double value() const { return continuation_.front(); }
  int n() const { return static_cast<int>(state_values_.size()); }

  // w_N(k, r): value of being at time k with relative rank r (r = 1, 2).
  double state_value(int k, int rank) const;
  // w~_N(k): value at time k before Y_k is revealed; k in 1..n+1 with
  // continuation(n+1) = 0.
  double continuation(int k) const;

 private:
  PolicyThresholds thresholds_;
  std::vector<std::array<double, 2>> state_values_;
  std::vector<double> continuation_;
};

// Backward induction over (time, relative rank).  Thresholds are
// k_r = max{k : phi(k, r) < w~(k + 1)} (0 if none), so ties stop.  When
// k1 = 0 the rule stops at time 1 surely and k2 is reported as 0.
SolveResult solve(const Horizon& horizon);

// Exact expected normalized duration of an arbitrary threshold policy.
double policy_value(const PolicyThresholds& policy, const Horizon& horizon);

// Value after time k1 of the policy that stops on the first relatively best
// item in (k1, k2] and on any candidate after k2.  At the optimal
// thresholds this is v_N.  Requires 1 <= k1 < k2 <= n.
double closed_form_value(int k1, int k2, const Horizon& horizon);

}  // namespace duration

#endif  // DURATION_EXACT_SOLVER_HPP_
