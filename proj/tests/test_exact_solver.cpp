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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "duration/exact_solver.hpp"
#include "oracles.hpp"

using namespace duration;
using oracle::Rational;
using oracle::ToDouble;

namespace {

// Partial-sum form of the two-threshold value, built from the pmf-based
// payoff and the directly summed mean operator only.
double PartialSumValue(int k1, int k2, const Horizon& h) {
  double sum = 0.0;
  for (int j = k2; j > k1; --j) {
    sum += static_cast<double>(k1) / (static_cast<double>(j) * (j - 1)) *
           payoff_from_pmf(j, 1, h);
  }
  return sum + static_cast<double>(k1) / k2 * mean_operator_direct(k2, h);
}

}  // namespace

TEST_CASE("Horizon rejects n < 2") {
  CHECK_THROWS_AS(Horizon(1), std::domain_error);
  CHECK_THROWS_AS(Horizon(0), std::domain_error);
  CHECK(Horizon(2).n() == 2);
}

// ---------------------------------------------------------------------------
TEST_SUITE("duration_pmf") {
  TEST_CASE("second-best hold, n = 3") {
    const auto pmf = duration_pmf(2, 2, Horizon(3));
    const auto law = oracle::EnumeratedDurationLaw(3, 2, 2);
    CHECK(law.at(3) == Rational(2, 3));
    CHECK(law.at(4) == Rational(1, 3));
    CHECK(pmf.at(3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(pmf.at(4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(pmf.survival() == pmf.at(4));
  }

  TEST_CASE("hold at the last item survives") {
    for (int n : {2, 5, 40}) {
      const auto pmf = duration_pmf(n, 1, Horizon(n));
      CHECK(pmf.masses().size() == 1);
      CHECK(pmf.survival() == doctest::Approx(1.0).epsilon(1e-15));
    }
  }

  TEST_CASE("best hold, n = 4") {
    const auto pmf = duration_pmf(2, 1, Horizon(4));
    const auto law = oracle::EnumeratedDurationLaw(4, 2, 1);
    CHECK(pmf.at(3) == 0.0);
    CHECK(law.count(3) == 0);
    CHECK(law.at(4) == Rational(1, 6));
    CHECK(law.at(5) == Rational(5, 6));
    CHECK(pmf.at(4) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(pmf.at(5) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  }

  TEST_CASE("matches permutation enumeration for every state, n <= 8") {
    for (int n = 2; n <= 8; ++n) {
      for (int i = 1; i <= n; ++i) {
        for (int r = 1; r <= std::min(i, 2); ++r) {
          const auto pmf = duration_pmf(i, r, Horizon(n));
          const auto law = oracle::EnumeratedDurationLaw(n, i, r);
          for (int k = i + 1; k <= n + 1; ++k) {
            const double expected = law.count(k) ? ToDouble(law.at(k)) : 0.0;
            CHECK(std::abs(pmf.at(k) - expected) <= 1e-15);
          }
        }
      }
    }
  }

  TEST_CASE("rank-1 mass at i + 1 is zero and total mass is one") {
    for (int n = 2; n <= 200; n += 7) {
      for (int i = 1; i <= n; ++i) {
        const auto best = duration_pmf(i, 1, Horizon(n));
        CHECK((best.at(i + 1) == 0.0 || i == n));
        CHECK(std::abs(best.total() - 1.0) <= 1e-12);
        if (i >= 2) CHECK(std::abs(duration_pmf(i, 2, Horizon(n)).total() - 1.0) <= 1e-12);
      }
    }
  }

  TEST_CASE("invalid states") {
    const Horizon h(5);
    CHECK_THROWS_AS(duration_pmf(1, 2, h), std::domain_error);
    CHECK_THROWS_AS(duration_pmf(3, 3, h), std::domain_error);
    CHECK_THROWS_AS(duration_pmf(6, 1, h), std::domain_error);
    CHECK_THROWS_AS(duration_pmf(0, 1, h), std::domain_error);
  }
}

// ---------------------------------------------------------------------------
TEST_SUITE("payoff") {
  TEST_CASE("examples") {
    for (int n : {2, 3, 10, 1000}) {
      CHECK(payoff(n, 2, Horizon(n)) == doctest::Approx(1.0 / n).epsilon(1e-15));
      CHECK(payoff_from_pmf(n, 1, Horizon(n)) == doctest::Approx(1.0 / n).epsilon(1e-15));
    }
    CHECK(payoff(4, 2, Horizon(10)) == doctest::Approx(0.28).epsilon(1e-15));
    CHECK(payoff_from_pmf(4, 2, Horizon(10)) == doctest::Approx(0.28).epsilon(1e-15));

    // 29/50 from exact rational summation of the pmf.
    CHECK(std::abs(payoff(3, 1, Horizon(5)) - 0.58) <= 1e-14);
    CHECK(std::abs(payoff(3, 1, Horizon(5)) - payoff_from_pmf(3, 1, Horizon(5))) <= 1e-14);
    CHECK(std::abs(payoff(1, 1, Horizon(10)) - payoff_from_pmf(1, 1, Horizon(10))) <= 1e-12);
  }

  TEST_CASE("non-candidate ranks pay nothing") {
    CHECK(payoff(5, 3, Horizon(10)) == 0.0);
    CHECK(payoff_from_pmf(5, 7, Horizon(10)) == 0.0);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(payoff(0, 1, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(payoff(6, 1, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(payoff(2, 0, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(payoff_from_pmf(1, 2, Horizon(5)), std::domain_error);
  }

  TEST_CASE("closed form agrees with pmf expectation") {
    for (int n = 2; n <= 120; ++n) {
      const Horizon h(n);
      for (int k = 1; k <= n; ++k) {
        CHECK(std::abs(payoff(k, 1, h) - payoff_from_pmf(k, 1, h)) <= 1e-12);
        if (k >= 2) CHECK(std::abs(payoff(k, 2, h) - payoff_from_pmf(k, 2, h)) <= 1e-12);
      }
    }
  }

  TEST_CASE("table matches pointwise evaluation") {
    const Horizon h(777);
    const PayoffTable t = payoff_table(h);
    for (int k = 1; k <= h.n(); ++k) {
      CHECK(std::abs(t.best[k - 1] - payoff(k, 1, h)) <= 1e-14);
      CHECK(t.second[k - 1] == payoff(k, 2, h));
    }
  }

  TEST_CASE("best dominates second best and has decreasing increments") {
    for (int n : {2, 3, 10, 57, 500}) {
      const PayoffTable t = payoff_table(Horizon(n));
      for (int k = 1; k <= n; ++k) CHECK(t.best[k - 1] >= t.second[k - 1] - 1e-15);
      for (int k = 1; k + 2 <= n; ++k) {
        const double d0 = t.best[k] - t.best[k - 1];
        const double d1 = t.best[k + 1] - t.best[k];
        CHECK(d1 < d0 + 1e-15);
      }
    }
  }

  TEST_CASE("values lie in [0, 1]") {
    for (int n : {2, 9, 300}) {
      const PayoffTable t = payoff_table(Horizon(n));
      for (int k = 0; k < n; ++k) {
        CHECK(t.best[k] >= 0.0);
        CHECK(t.best[k] <= 1.0);
        CHECK(t.second[k] >= 0.0);
        CHECK(t.second[k] <= 1.0);
      }
    }
  }
}

// ---------------------------------------------------------------------------
TEST_SUITE("embedded chain") {
  TEST_CASE("examples") {
    CHECK(transition_prob(2, 3, Horizon(3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(transition_prob(2, 3, Horizon(50)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (int n : {3, 10, 1000}) {
      CHECK(transition_prob(n - 1, n, Horizon(n)) ==
            doctest::Approx(1.0 / n).epsilon(1e-14));
    }
    CHECK(absorption_prob(2, Horizon(3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(transition_prob(1, 2, Horizon(5)) == 0.5);
    CHECK(transition_prob(1, 3, Horizon(5)) == 0.0);
  }

  TEST_CASE("matches enumeration of relative ranks") {
    for (int k = 1; k <= 6; ++k) {
      for (int s = k + 1; s <= 9; ++s) {
        const double p = transition_prob(k, s, Horizon(9));
        for (int r = 1; r <= 2; ++r) {
          CHECK(std::abs(p - ToDouble(oracle::EnumeratedTransition(k, s, r))) <= 1e-15);
        }
      }
    }
  }

  TEST_CASE("absorption equals survival of a second-best hold") {
    for (int n : {3, 10, 99}) {
      for (int k = 2; k <= n; ++k) {
        CHECK(std::abs(absorption_prob(k, Horizon(n)) -
                       duration_pmf(k, 2, Horizon(n)).survival()) <= 1e-13);
      }
    }
  }

  TEST_CASE("rows normalize for candidate sets of size 1, 2, 3") {
    for (int a = 1; a <= 3; ++a) {
      for (int n : {4, 17, 200}) {
        const Horizon h(n);
        for (int k = 1; k <= n; ++k) {
          double row = absorption_prob(k, h, a);
          for (int s = k + 1; s <= n; ++s) row += std::min(a, s) * transition_prob(k, s, h, a);
          CHECK(std::abs(row - 1.0) <= 1e-12);
          CHECK(absorption_prob(k, h, a) >= -1e-15);
        }
      }
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(transition_prob(3, 3, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(transition_prob(4, 3, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(transition_prob(2, 6, Horizon(5)), std::domain_error);
  }
}

// ---------------------------------------------------------------------------
TEST_SUITE("mean_operator") {
  TEST_CASE("vanishes at the horizon") {
    for (int n : {2, 10, 1000}) {
      CHECK(mean_operator(n, Horizon(n)) == 0.0);
      CHECK(mean_operator_direct(n, Horizon(n)) == 0.0);
    }
  }

  TEST_CASE("closed form equals direct sum") {
    CHECK(std::abs(mean_operator(2, Horizon(10)) - mean_operator_direct(2, Horizon(10))) <= 1e-12);
    CHECK(std::abs(mean_operator(2, Horizon(5)) - mean_operator_direct(2, Horizon(5))) <= 1e-12);
    CHECK(std::abs(mean_operator(3, Horizon(100)) - mean_operator_direct(3, Horizon(100))) <= 1e-12);
    for (int n = 2; n <= 80; ++n) {
      for (int k = 2; k <= n; ++k) {
        CHECK(std::abs(mean_operator(k, Horizon(n)) - mean_operator_direct(k, Horizon(n))) <= 1e-12);
      }
    }
  }

  TEST_CASE("rank-2 indifference brackets the N = 1000 threshold") {
    const Horizon h(1000);
    CHECK(mean_operator(417, h) > payoff(417, 2, h));
    CHECK(mean_operator(418, h) <= payoff(418, 2, h));
  }

  TEST_CASE("is the continuation value once every candidate is accepted") {
    for (int n : {10, 100, 1000}) {
      const Horizon h(n);
      const SolveResult res = solve(h);
      for (int k = std::max(2, res.thresholds().k2); k <= n; ++k) {
        CHECK(std::abs(res.continuation(k + 1) - mean_operator(k, h)) <= 1e-12);
      }
    }
  }

  TEST_CASE("direct sum needs k >= 2") {
    CHECK_THROWS_AS(mean_operator_direct(1, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(mean_operator(0, Horizon(5)), std::domain_error);
  }
}

// ---------------------------------------------------------------------------
TEST_SUITE("solve") {
  TEST_CASE("reference decision points") {
    struct Row {
      int n, k1, k2;
      double v;
    };
    for (const Row& row : {Row{10, 1, 4, 0.527526}, Row{100, 12, 41, 0.415064},
                           Row{1000, 120, 417, 0.404944}}) {
      const SolveResult res = solve(Horizon(row.n));
      CHECK(res.thresholds() == PolicyThresholds{row.k1, row.k2});
      CHECK(std::abs(res.value() - row.v) <= 5e-7);
    }
  }

  TEST_CASE("small horizons against brute force over permutations") {
    // Exact values from enumerating all permutations; stopping on the first
    // item is optimal throughout.
    const Rational expected[] = {Rational(1), Rational(8, 9), Rational(19, 24),
                                 Rational(107, 150), Rational(13, 20),
                                 Rational(293, 490)};
    for (int n = 2; n <= 7; ++n) {
      const SolveResult res = solve(Horizon(n));
      CHECK(res.thresholds() == PolicyThresholds{0, 0});
      CHECK(std::abs(res.value() - ToDouble(expected[n - 2])) <= 1e-15);
    }
  }

  TEST_CASE("table structure") {
    for (int n : {2, 3, 10, 57, 300, 2000}) {
      const Horizon h(n);
      const SolveResult res = solve(h);
      const auto [k1, k2] = res.thresholds();
      CHECK(0 <= k1);
      CHECK(k1 <= k2);
      CHECK(k2 <= n);
      CHECK(res.value() == res.continuation(1));
      CHECK(res.value() >= 0.0);
      CHECK(res.value() <= 1.0);
      CHECK(res.continuation(n + 1) == 0.0);
      for (int k = 1; k <= n; ++k) {
        CHECK(res.continuation(k + 1) <= res.continuation(k));
        // The threshold rule reproduces the DP's stop/continue decisions on
        // every reachable state.
        const double next = res.continuation(k + 1);
        CHECK(res.thresholds().stops(k, 1) == (payoff(k, 1, h) >= next));
        if (k >= 2 && k1 > 0) {
          CHECK(res.thresholds().stops(k, 2) == (payoff(k, 2, h) >= next));
        }
        CHECK(res.state_value(k, 1) == std::max(payoff(k, 1, h), next));
      }
      for (int k = 1; k <= k1 + 1; ++k) {
        CHECK(res.continuation(k) == res.value());
      }
    }
  }

  TEST_CASE("state lookups are range checked") {
    const SolveResult res = solve(Horizon(5));
    CHECK_THROWS_AS(res.state_value(6, 1), std::domain_error);
    CHECK_THROWS_AS(res.state_value(1, 3), std::domain_error);
    CHECK_THROWS_AS(res.continuation(7), std::domain_error);
  }
}

// ---------------------------------------------------------------------------
TEST_SUITE("policy_value") {
  TEST_CASE("hand-enumerated small policies") {
    const Horizon h3(3);
    // (3, 3) never stops.
    CHECK(policy_value({3, 3}, h3) == 0.0);
    // (2, 2) stops at time 3 iff Y_3 <= 2: (2/3) * (1/3).
    CHECK(std::abs(policy_value({2, 2}, h3) - 2.0 / 9.0) <= 1e-15);
    for (int n : {2, 5, 40}) {
      CHECK(std::abs(policy_value({0, 0}, Horizon(n)) - payoff(1, 1, Horizon(n))) <= 1e-15);
    }
  }

  TEST_CASE("optimal thresholds attain the DP value") {
    for (int n : {2, 10, 100, 1000}) {
      const Horizon h(n);
      const SolveResult res = solve(h);
      CHECK(std::abs(policy_value(res.thresholds(), h) - res.value()) <= 1e-12);
    }
    CHECK(std::abs(policy_value({1, 4}, Horizon(10)) - 0.527526) <= 5e-7);
  }

  TEST_CASE("no threshold pair beats the DP") {
    for (int n = 2; n <= 40; ++n) {
      const Horizon h(n);
      const double best = solve(h).value();
      for (int k1 = 0; k1 <= n; ++k1) {
        for (int k2 = k1; k2 <= n; ++k2) {
          CHECK(policy_value({k1, k2}, h) <= best + 1e-12);
        }
      }
    }
  }

  TEST_CASE("invalid policies") {
    CHECK_THROWS_AS(policy_value({0, 6}, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(policy_value({3, 2}, Horizon(5)), std::domain_error);
    CHECK_THROWS_AS(policy_value({-1, 2}, Horizon(5)), std::domain_error);
  }
}

// ---------------------------------------------------------------------------
TEST_SUITE("closed_form_value") {
  TEST_CASE("reference values at the optimal thresholds") {
    CHECK(std::abs(closed_form_value(1, 4, Horizon(10)) - 0.527526) <= 5e-7);
    CHECK(std::abs(closed_form_value(24, 83, Horizon(200)) - 0.409431) <= 5e-7);
  }

  TEST_CASE("equals the DP continuation at k1*") {
    for (int n : {10, 50, 100, 500, 1000, 5000}) {
      const Horizon h(n);
      const SolveResult res = solve(h);
      const auto [k1, k2] = res.thresholds();
      CHECK(std::abs(closed_form_value(k1, k2, h) - res.continuation(k1)) <= 1e-10);
    }
  }

  TEST_CASE("equals the partial-sum expression on random pairs") {
    std::mt19937 gen(2024);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = std::uniform_int_distribution<int>(3, 200)(gen);
      const int k2 = std::uniform_int_distribution<int>(2, n)(gen);
      const int k1 = std::uniform_int_distribution<int>(1, k2 - 1)(gen);
      const Horizon h(n);
      CHECK(std::abs(closed_form_value(k1, k2, h) - PartialSumValue(k1, k2, h)) <= 1e-10);
    }
  }

  TEST_CASE("argument checks") {
    CHECK_THROWS_AS(closed_form_value(4, 4, Horizon(10)), std::domain_error);
    CHECK_THROWS_AS(closed_form_value(0, 4, Horizon(10)), std::domain_error);
    CHECK_THROWS_AS(closed_form_value(2, 11, Horizon(10)), std::domain_error);
  }
}
