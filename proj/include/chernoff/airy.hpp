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

// Airy functions Ai, Bi and their derivatives at complex arguments, Scorer's
// Hi and its incomplete variant.
//
// Evaluation is split into regimes that depend only on z:
//   |z| <= kSeriesRadius               Maclaurin series for all four values
//   |z| >= kAsymptoticRadius           Poincare expansion of Ai (with the
//                                      three-term connection relation when
//                                      |ph z| > 2pi/3)
//   otherwise                          Taylor continuation of the Airy ODE
//                                      along the ray through z, started from
//                                      whichever end keeps Ai dominant
// Bi and Bi' are always assembled from Ai at the rotated points
// z*exp(+-2pi i/3) outside the series disc.

#pragma once

#include <utility>

#include "chernoff/types.hpp"

namespace chernoff::airy {

inline constexpr double kSeriesRadius = 3.0;
inline constexpr double kAsymptoticRadius = 9.0;

enum class RegimeTag { maclaurin_series, taylor_continuation, asymptotic_expansion, rotated_connection };

struct EvalRegime {
  RegimeTag tag;
  double switch_radius;
};

struct AiryBundle {
  Complex ai;
  Complex aip;
  Complex bi;
  Complex bip;
  /// Bounds the error of each component and of the Wronskian ai*bip - aip*bi.
  double abs_err_estimate = 0.0;
};

/// Ai and Ai' only; cheaper than airy_all when Bi is not needed.
struct AiPair {
  Complex ai;
  Complex aip;
  double abs_err_estimate = 0.0;
};

EvalRegime regime_of(Complex z);

AiPair airy_ai_pair(Complex z);
AiryBundle airy_all(Complex z);

inline Complex airy_ai(Complex z) { return airy_ai_pair(z).ai; }

/// log Ai(z) as a complex number; the imaginary part is a phase, not
/// necessarily the principal one. Never overflows for |z| <= 1e4.
Complex log_ai(Complex z);

/// log(Ai(z + a) / Ai(z)), computed without the cancellation of two large
/// logarithms when both points are in the asymptotic regime.
Complex log_ai_ratio(Complex z, Complex a);

struct LogModulusPhase {
  double log_modulus;
  double phase;
};

LogModulusPhase airy_ai_log_scaled(Complex z);

/// Hi(z) = (1/pi) * int_0^inf exp(t z - t^3/3) dt.
Complex scorer_hi(Complex z);

/// (1/pi) * int_s^inf exp(t z - t^3/3) dt.
Complex incomplete_hi(Complex z, double s);

/// Ai(2^{-1/3} lambda - 4^{1/3} x) / Ai(2^{-1/3} lambda), the bounded
/// solution of u''/2 = (lambda - 2x) u on x <= 0 with u(0) = 1.
double u_lambda(double lambda, double x);

/// Ai(0) and -Ai'(0) computed from the internal Gamma approximation.
double ai_at_zero();
double minus_aip_at_zero();

}  // namespace chernoff::airy
