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

#ifndef DURATION_ASYMPTOTIC_HPP_
#define DURATION_ASYMPTOTIC_HPP_

#include <stdexcept>

namespace duration {

// Raised when a root bracket or iteration fails.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Limits as N -> infinity with k/N -> x.  All take x in (0, 1] and throw
// std::domain_error for x <= 0.

// lim phi([Nx], r):  x^2 - 2x log x - x  for r = 1,  x(1 - x)  for r = 2.
double phi_limit(double x, int rank);

// lim T phi([Nx]) = 2(x^2 - x - x log x).
double mean_operator_limit(double x);

// Limit of k2*/N: the root of mean_operator_limit(x) = phi_limit(x, 2),
// b = -(2/3) W0(-(3/2) e^{-3/2}).
double solve_b();

// Limit value at x of stopping on the first relatively best item in (x, b]
// and on any candidate after b:
//   int_x^b (x / t^2) phi_limit(t, 1) dt + (x / b) mean_operator_limit(b).
// Requires 0 < x <= b <= 1.
double limit_value_function(double x, double b);

// Limit of k1*/N: the crossing of limit_value_function(., b) and
// phi_limit(., 1) on (0, b).  Throws NumericFailure without a sign change.
double solve_a(double b);

// Limit of v_N, equal to limit_value_function(a, b).
double asymptotic_value();

struct AsymptoticSolution {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double residual_a = 0.0;  // |limit_value_function(a, b) - phi_limit(a, 1)|
  double residual_b = 0.0;  // |mean_operator_limit(b) - phi_limit(b, 2)|
};

AsymptoticSolution solve_asymptotic();

}  // namespace duration

#endif  // DURATION_ASYMPTOTIC_HPP_
