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

#include "duration/exact_solver.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "duration/special_functions.hpp"

namespace duration {

namespace {

[[noreturn]] void Fail(const std::string& what) { throw std::domain_error(what); }

void CheckTime(const char* op, int k, const Horizon& horizon) {
  if (k < 1 || k > horizon.n()) {
    Fail(std::string(op) + ": time " + std::to_string(k) + " outside 1.." +
         std::to_string(horizon.n()));
  }
}

}  // namespace

Horizon::Horizon(int n) : n_(n) {
  if (n < 2) Fail("Horizon: need n >= 2, got " + std::to_string(n));
}

void validate(const PolicyThresholds& policy, const Horizon& horizon) {
  if (policy.k1 < 0 || policy.k1 > policy.k2 || policy.k2 > horizon.n()) {
    Fail("PolicyThresholds: need 0 <= k1 <= k2 <= n, got (" +
         std::to_string(policy.k1) + ", " + std::to_string(policy.k2) +
         ") with n=" + std::to_string(horizon.n()));
  }
}

// ---------------------------------------------------------------------------
// Duration distribution

DurationPmf::DurationPmf(int start, int rank, int n, std::vector<double> mass)
    : start_(start), rank_(rank), n_(n), mass_(std::move(mass)) {
  if (mass_.size() != static_cast<std::size_t>(n - start + 1)) {
    Fail("DurationPmf: support size mismatch");
  }
}

double DurationPmf::at(int end_time) const {
  if (end_time < first_end_time() || end_time > last_end_time()) return 0.0;
  return mass_[static_cast<std::size_t>(end_time - first_end_time())];
}

double DurationPmf::total() const {
  double sum = 0.0;
  for (auto it = mass_.rbegin(); it != mass_.rend(); ++it) sum += *it;
  return sum;
}

double DurationPmf::mean_duration() const {
  double sum = 0.0;
  for (int t = last_end_time(); t >= first_end_time(); --t) {
    sum += static_cast<double>(t - start_) * at(t);
  }
  return sum;
}

DurationPmf duration_pmf(int i, int rank, const Horizon& horizon) {
  const int n = horizon.n();
  CheckTime("duration_pmf", i, horizon);
  if (rank < 1 || rank > kCandidateRanks || rank > i) {
    Fail("duration_pmf: invalid rank " + std::to_string(rank) + " at time " +
         std::to_string(i));
  }
  const double id = i;
  const double nd = n;
  std::vector<double> mass;
  mass.reserve(static_cast<std::size_t>(n - i + 1));
  for (int k = i + 1; k <= n; ++k) {
    const double kd = k;
    const double falling = (kd - 2.0) * (kd - 1.0) * kd;
    if (rank == 2) {
      mass.push_back(2.0 * (id - 1.0) * id / falling);
    } else {
      // Needs an intermediate new best before the end, so k = i + 1 is 0.
      mass.push_back(k == i + 1 ? 0.0 : 2.0 * id * (kd - id - 1.0) / falling);
    }
  }
  const double survive = rank == 2
                             ? id * (id - 1.0) / (nd * (nd - 1.0))
                             : (2.0 * nd * id - id * id - id) / (nd * (nd - 1.0));
  mass.push_back(survive);
  return DurationPmf(i, rank, n, std::move(mass));
}

// ---------------------------------------------------------------------------
// Stopping payoff

double payoff(int k, int rank, const Horizon& horizon) {
  CheckTime("payoff", k, horizon);
  if (rank < 1) Fail("payoff: rank must be >= 1");
  const double kd = k;
  const double nd = horizon.n();
  switch (rank) {
    case 1:
      return kd / (nd * nd) *
             (1.0 + kd - nd + 2.0 * nd * harmonic_diff(k, horizon.n()));
    case 2:
      return kd * (nd - kd + 1.0) / (nd * nd);
    default:
      return 0.0;
  }
}

double payoff_from_pmf(int k, int rank, const Horizon& horizon) {
  CheckTime("payoff_from_pmf", k, horizon);
  if (rank < 1) Fail("payoff_from_pmf: rank must be >= 1");
  if (rank > kCandidateRanks) return 0.0;
  return duration_pmf(k, rank, horizon).mean_duration() /
         static_cast<double>(horizon.n());
}

PayoffTable payoff_table(const Horizon& horizon) {
  const int n = horizon.n();
  const double nd = n;
  PayoffTable table;
  table.best.resize(static_cast<std::size_t>(n));
  table.second.resize(static_cast<std::size_t>(n));
  double harmonic = 0.0;  // psi(n) - psi(k), accumulated smallest term first
  for (int k = n; k >= 1; --k) {
    if (k < n) harmonic += 1.0 / static_cast<double>(k);
    const double kd = k;
    const auto idx = static_cast<std::size_t>(k - 1);
    table.best[idx] = kd / (nd * nd) * (1.0 + kd - nd + 2.0 * nd * harmonic);
    table.second[idx] = kd * (nd - kd + 1.0) / (nd * nd);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Embedded candidate chain

double transition_prob(int k, int s, const Horizon& horizon, int a) {
  if (a < 1) Fail("transition_prob: candidate set size must be >= 1");
  CheckTime("transition_prob", k, horizon);
  CheckTime("transition_prob", s, horizon);
  if (s <= k) {
    Fail("transition_prob: need k < s, got k=" + std::to_string(k) +
         " s=" + std::to_string(s));
  }
  if (k < a) return s == k + 1 ? 1.0 / static_cast<double>(s) : 0.0;
  // (k)_a / (s)_{a+1}
  double ratio = 1.0 / static_cast<double>(s - a);
  for (int j = 0; j < a; ++j) {
    ratio *= static_cast<double>(k - j) / static_cast<double>(s - j);
  }
  return ratio;
}

double absorption_prob(int k, const Horizon& horizon, int a) {
  CheckTime("absorption_prob", k, horizon);
  double sum = 0.0;
  for (int s = horizon.n(); s > k; --s) {
    // Only ranks 1..min(a, s) exist at time s.
    sum += static_cast<double>(std::min(a, s)) * transition_prob(k, s, horizon, a);
  }
  return 1.0 - sum;
}

double mean_operator(int k, const Horizon& horizon) {
  CheckTime("mean_operator", k, horizon);
  const double kd = k;
  const double nd = horizon.n();
  return 2.0 * kd / (nd * nd) *
         (nd * harmonic_diff(k, horizon.n()) - (nd - kd));
}

double mean_operator_direct(int k, const Horizon& horizon) {
  CheckTime("mean_operator_direct", k, horizon);
  if (k < kCandidateRanks) Fail("mean_operator_direct: need k >= 2");
  const PayoffTable table = payoff_table(horizon);
  double sum = 0.0;
  for (int j = horizon.n(); j > k; --j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    sum += transition_prob(k, j, horizon) * (table.best[idx] + table.second[idx]);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Backward induction

SolveResult::SolveResult(PolicyThresholds thresholds,
                         std::vector<std::array<double, 2>> state_values,
                         std::vector<double> continuation)
    : thresholds_(thresholds),
      state_values_(std::move(state_values)),
      continuation_(std::move(continuation)) {}

double SolveResult::state_value(int k, int rank) const {
  if (k < 1 || k > n() || rank < 1 || rank > 2) {
    Fail("SolveResult::state_value: state out of range");
  }
  return state_values_[static_cast<std::size_t>(k - 1)]
                      [static_cast<std::size_t>(rank - 1)];
}

double SolveResult::continuation(int k) const {
  if (k < 1 || k > n() + 1) Fail("SolveResult::continuation: time out of range");
  return continuation_[static_cast<std::size_t>(k - 1)];
}

SolveResult solve(const Horizon& horizon) {
  const int n = horizon.n();
  const PayoffTable phi = payoff_table(horizon);
  std::vector<std::array<double, 2>> w(static_cast<std::size_t>(n));
  std::vector<double> cont(static_cast<std::size_t>(n) + 1, 0.0);
  PolicyThresholds thresholds;

  for (int k = n; k >= 1; --k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const double next = cont[idx + 1];
    // Ties stop.
    const double best = phi.best[idx];
    if (best < next) thresholds.k1 = std::max(thresholds.k1, k);
    w[idx][0] = std::max(best, next);

    // w~(k) = w~(k+1) + (1/k) * sum over ranks of the gain from stopping.
    // The gains are nonnegative, so the flat head stays exactly flat.
    double gain = w[idx][0] - next;
    if (k >= 2) {
      const double second = phi.second[idx];
      if (second < next) thresholds.k2 = std::max(thresholds.k2, k);
      w[idx][1] = std::max(second, next);
      gain += w[idx][1] - next;
    } else {
      w[idx][1] = next;
    }
    cont[idx] = next + gain / static_cast<double>(k);
  }
  // Stopping at time 1 is certain when k1 = 0, so no rank-2 state is ever
  // reached; report the smallest equivalent pair.
  if (thresholds.k1 == 0) thresholds.k2 = 0;
  return SolveResult(thresholds, std::move(w), std::move(cont));
}

double policy_value(const PolicyThresholds& policy, const Horizon& horizon) {
  validate(policy, horizon);
  const int n = horizon.n();
  const PayoffTable phi = payoff_table(horizon);
  double next = 0.0;
  for (int k = n; k >= 1; --k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    double total = policy.stops(k, 1) ? phi.best[idx] : next;
    if (k >= 2) {
      total += policy.stops(k, 2) ? phi.second[idx] : next;
      total += static_cast<double>(k - 2) * next;
    }
    next = total / static_cast<double>(k);
  }
  return next;
}

double closed_form_value(int k1, int k2, const Horizon& horizon) {
  const int n = horizon.n();
  if (k1 < 1 || k1 >= k2 || k2 > n) {
    Fail("closed_form_value: need 1 <= k1 < k2 <= n, got (" +
         std::to_string(k1) + ", " + std::to_string(k2) + ")");
  }
  const double k = k1;
  const double s = k2;
  const double nd = n;
  const double h_ks = harmonic_diff(k1, k2);
  const double h_kn = harmonic_diff(k1, n);
  const double h_sn = harmonic_diff(k2, n);
  // sum_{j=k}^{s-1} 1/j^2
  const double squares = 1.0 / (k * k) - 1.0 / (s * s) - trigamma_diff(k1, k2);

  // Stops on the first relatively best item in (k1, k2] ...
  const double before =
      k / (nd * nd) *
      ((s - k) + (2.0 - nd) * h_ks + nd * h_ks * (h_kn + h_sn) - nd * squares);
  // ... otherwise on whichever candidate comes first after k2.
  const double after = k / s * mean_operator(k2, horizon);
  return before + after;
}

}  // namespace duration
