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

#include "duration/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace duration {

double harmonic_diff(std::int64_t k, std::int64_t n) {
  if (k < 1 || k > n) {
    throw std::domain_error("harmonic_diff: need 1 <= k <= n, got k=" +
                            std::to_string(k) + " n=" + std::to_string(n));
  }
  double sum = 0.0;
  for (std::int64_t j = n - 1; j >= k; --j) sum += 1.0 / static_cast<double>(j);
  return sum;
}

double trigamma_diff(std::int64_t k, std::int64_t s) {
  if (k < 1 || k > s) {
    throw std::domain_error("trigamma_diff: need 1 <= k <= s, got k=" +
                            std::to_string(k) + " s=" + std::to_string(s));
  }
  double sum = 0.0;
  for (std::int64_t j = s; j > k; --j) {
    const double jd = static_cast<double>(j);
    sum += 1.0 / (jd * jd);
  }
  return -sum;
}

namespace {

// Starting point for Halley.  Near the branch point the Taylor expansion in
// p = sqrt(2(e z + 1)) is used; the plain log guess stalls there.
double LambertW0InitialGuess(double z) {
  if (std::abs(z) < 0.3) return z;
  if (z < 0.0) {
    const double p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  }
  const double w = std::log1p(z);
  // log(1+z) overshoots for large z; one log-log correction brings it in.
  return z > 3.0 ? w - std::log(w) : w;
}

}  // namespace

double lambert_w0(double z) {
  constexpr double kBranchPoint = -1.0 / std::numbers::e;
  if (!std::isfinite(z) || z < kBranchPoint) {
    throw std::domain_error("lambert_w0: argument must be finite and >= -1/e");
  }
  if (z == 0.0) return 0.0;
  if (z == kBranchPoint) return -1.0;

  constexpr int kMaxIterations = 50;
  double w = LambertW0InitialGuess(z);
  if (z > 1e100) {
    // w * exp(w) can overflow here; iterate on w + log(w) = log(z) instead.
    const double log_z = std::log(z);
    for (int it = 0; it < kMaxIterations; ++it) {
      const double step = (w + std::log(w) - log_z) / (1.0 + 1.0 / w);
      w -= step;
      if (std::abs(step) <= 1e-16 * w) break;
    }
    return w;
  }
  for (int it = 0; it < kMaxIterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (std::abs(f) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (w < -1.0) w = -1.0;
    if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

}  // namespace duration
