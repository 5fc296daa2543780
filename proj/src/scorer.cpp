// Copyright 2026 The chernoff Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except in compliance
// with the License. You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under the License.

#include <algorithm>
#include <cmath>

#include "chernoff/airy.hpp"
#include "chernoff/quadrature.hpp"

namespace chernoff::airy {

namespace {

// Exponent of the integrand modulus, t Re z - t^3/3.
double log_modulus(double t, double re_z) { return t * re_z - t * t * t / 3.0; }

Complex scorer_integral(Complex z, double s) {
  const double re = z.real();
  const double peak_t = re > 0.0 ? std::sqrt(re) : 0.0;
  const double top = std::max(log_modulus(s, re), peak_t > s ? log_modulus(peak_t, re) : log_modulus(s, re));
  // the integrand is negligible once it falls e^{-45} below its maximum
  double end = std::max(s, peak_t) + 1.0;
  while (log_modulus(end, re) > top - 45.0) end += 0.5;

  quad::QuadratureSpec spec;
  spec.frequency = z.imag();
  spec.rel_tol = 1e-14;
  spec.abs_tol = std::max(1e-14, 1e-15 * std::exp(std::min(top, 700.0)));
  auto f = [z](double t) { return std::exp(t * z - t * t * t / 3.0); };
  Complex total = 0.0;
  if (peak_t > s && peak_t < end) {
    total += quad::require_ok(quad::integrate_interval(f, s, peak_t, spec), "scorer_hi").value;
    total += quad::require_ok(quad::integrate_interval(f, peak_t, end, spec), "scorer_hi").value;
  } else {
    total += quad::require_ok(quad::integrate_interval(f, s, end, spec), "scorer_hi").value;
  }
  return total / kPi;
}

}  // namespace

Complex scorer_hi(Complex z) { return scorer_integral(z, 0.0); }

Complex incomplete_hi(Complex z, double s) {
  if (!std::isfinite(s)) throw DomainError("incomplete_hi: s must be finite");
  return scorer_integral(z, s);
}

}  // namespace chernoff::airy
