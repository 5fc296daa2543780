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

// Adaptive Gauss-Kronrod (7/15) panel quadrature over finite intervals, the
// real line and the half line, with tail truncation driven by a caller
// supplied bound. Panel sums go through kernels::weighted_sum and the final
// reduction is pairwise in panel order, so results are bit-reproducible.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chernoff/types.hpp"

namespace chernoff::quad {

using Integrand = std::function<Complex(double)>;
/// U -> upper bound on |integral over the discarded tail(s) beyond U|.
using TailBound = std::function<double(double)>;

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 1 << 14;
  /// Fixed truncation; when empty it is found from the tail bound.
  std::optional<double> truncation_halfwidth;
  /// Integrand frequency; panels are capped at pi / (4 max(1, |frequency|)).
  double frequency = 0.0;
  /// Bracket for the automatic truncation search.
  double truncation_min = 5.0;
  double truncation_max = 200.0;
  int initial_panels = 4;

  /// Throws DomainError unless tolerances >= 1e-14 and budget in [1, 2^20].
  void validate() const;
};

enum class Status { ok, budget_exceeded };

struct QuadratureResult {
  Complex value;
  double err_estimate = 0.0;
  long evaluations = 0;
  double truncation_used = 0.0;
  Status status = Status::ok;

  bool ok() const { return status == Status::ok; }
};

/// Throws NumericalError when the result did not converge.
const QuadratureResult& require_ok(const QuadratureResult& r, const char* what);

QuadratureResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec);

/// Integral over (-inf, inf) truncated to [-U, U] with decay(U) <= abs_tol/2.
QuadratureResult integrate_real_line(const Integrand& f, const TailBound& decay, const QuadratureSpec& spec);

/// Integral over [0, inf) truncated to [0, U].
QuadratureResult integrate_semi_infinite(const Integrand& f, const TailBound& decay, const QuadratureSpec& spec);

/// Smallest U in [lo, hi] (to bisection accuracy) with decay(U) <= target;
/// returns hi if even decay(hi) exceeds the target.
double solve_truncation(const TailBound& decay, double target, double lo, double hi);

/// Tail bound for the Airy-ratio integrands along the imaginary axis.
///   shift == 0: |1/Ai(iu)^2|, rate 2 sqrt(2)/3;
///   shift  > 0: integrands of the form int_0^shift w(y) Ai(iu+y) dy / Ai(iu)^2
///               with |w| <= scale, rate sqrt(2)/3 (one 1/Ai factor survives).
/// The bound covers both tails u > U and u < -U and is valid for U >= 4.
TailBound airy_ratio_tail_bound(double shift, double scale = 1.0);

/// |1/Ai(iu)| envelope tail (both sides), for the phi transform.
TailBound reciprocal_ai_tail_bound(double scale = 1.0);

/// Pointwise envelope whose integral over |u| > U is airy_ratio_tail_bound.
double airy_ratio_envelope(double shift, double u, double scale = 1.0);

/// Composite Gauss-Legendre with `nodes_per_unit` nodes on each unit-length
/// (or shorter) piece of [a, b]. Used for compact inner integrals of entire
/// integrands, where adaptivity would only add noise.
Complex integrate_fixed(const std::function<Complex(double)>& f, double a, double b, int nodes_per_unit = 32);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n), cached per n.
const GaussRule& gauss_legendre(int n);

}  // namespace chernoff::quad
