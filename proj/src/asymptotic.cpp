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

#include "duration/asymptotic.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "duration/special_functions.hpp"

namespace duration {

namespace {

void CheckUnitInterval(const char* op, double x) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(op) + ": x must lie in (0, 1]");
  }
}

// Antiderivative of (1/t^2) * phi_limit(t, 1) = 1 - 2 log(t)/t - 1/t.
double BestPayoffAntiderivative(double t) {
  const double lt = std::log(t);
  return t - lt * lt - lt;
}

}  // namespace

double phi_limit(double x, int rank) {
  CheckUnitInterval("phi_limit", x);
  switch (rank) {
    case 1:
      return x * x - 2.0 * x * std::log(x) - x;
    case 2:
      return x * (1.0 - x);
    default:
      throw std::domain_error("phi_limit: rank must be 1 or 2");
  }
}

double mean_operator_limit(double x) {
  CheckUnitInterval("mean_operator_limit", x);
  return 2.0 * (x * x - x - x * std::log(x));
}

double solve_b() {
  // 2(x^2 - x - x log x) = x(1 - x)  <=>  (3/2)x e^{-(3/2)x} = (3/2)e^{-3/2}
  return -2.0 / 3.0 * lambert_w0(-1.5 * std::exp(-1.5));
}

double limit_value_function(double x, double b) {
  CheckUnitInterval("limit_value_function", b);
  if (!(x > 0.0 && x <= b)) {
    throw std::domain_error("limit_value_function: need 0 < x <= b");
  }
  return x * (BestPayoffAntiderivative(b) - BestPayoffAntiderivative(x)) +
         x / b * mean_operator_limit(b);
}

double solve_a(double b) {
  constexpr double kMargin = 1e-4;
  const double lo = kMargin;
  const double hi = b - kMargin;
  if (!(hi > lo)) throw NumericFailure("solve_a: empty bracket");
  auto gap = [b](double x) { return limit_value_function(x, b) - phi_limit(x, 1); };
  const double f_lo = gap(lo);
  const double f_hi = gap(hi);
  if (!(f_lo * f_hi < 0.0)) {
    throw NumericFailure("solve_a: no sign change on [1e-4, b - 1e-4]");
  }
  std::uintmax_t max_iter = 200;
  const auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-13; };
  const auto [left, right] =
      boost::math::tools::toms748_solve(gap, lo, hi, f_lo, f_hi, tol, max_iter);
  if (max_iter >= 200) throw NumericFailure("solve_a: root finder did not converge");
  return 0.5 * (left + right);
}

double asymptotic_value() {
  const double b = solve_b();
  return limit_value_function(solve_a(b), b);
}

AsymptoticSolution solve_asymptotic() {
  AsymptoticSolution sol;
  sol.b = solve_b();
  sol.a = solve_a(sol.b);
  sol.value = limit_value_function(sol.a, sol.b);
  sol.residual_a = std::abs(sol.value - phi_limit(sol.a, 1));
  sol.residual_b = std::abs(mean_operator_limit(sol.b) - phi_limit(sol.b, 2));
  return sol;
}

}  // namespace duration
