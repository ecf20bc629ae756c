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

#ifndef DURATION_SPECIAL_FUNCTIONS_HPP_
#define DURATION_SPECIAL_FUNCTIONS_HPP_

#include <cstdint>

namespace duration {

// Digamma and trigamma only ever appear here as differences at integer
// arguments, so both are evaluated as finite sums, smallest terms first.

// psi(n) - psi(k) = sum_{j=k}^{n-1} 1/j.  Exactly 0 when k == n.
// Throws std::domain_error unless 1 <= k <= n.
double harmonic_diff(std::int64_t k, std::int64_t n);

// psi_1(s+1) - psi_1(k+1) = -sum_{j=k+1}^{s} 1/j^2.  Always <= 0.
// Throws std::domain_error unless 1 <= k <= s.
double trigamma_diff(std::int64_t k, std::int64_t s);

// Principal branch W_0 of the Lambert W function, the inverse of w*exp(w)
// on w >= -1.  Halley iteration; throws std::domain_error for z < -1/e or
// non-finite z.
double lambert_w0(double z);

}  // namespace duration

#endif  // DURATION_SPECIAL_FUNCTIONS_HPP_
