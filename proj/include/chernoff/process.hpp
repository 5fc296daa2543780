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

// Brownian motion with parabolic drift: hitting and survival probabilities
// for the barrier at 0, the density h_x of the first passage of the
// driftless-transform process, phi, psi, and the densities of the location
// and value of the maximum (one- and two-sided).
//
// Notation: Q^{(s,x)} is the law of W(t) - t^2 started at level x <= 0 at
// time s. f(s,x) and g(s,x) carry the factor e^{-2sx - 2s^3/3}; the
// probabilities themselves are hitting_prob and survival_prob.

#pragma once

#include <string>
#include <vector>

#include "chernoff/types.hpp"

namespace chernoff::process {

struct StartState {
  double s = 0.0;
  double x = 0.0;
};

/// A quadrature-backed scalar with its error bound. imag is the residual
/// imaginary part where the defining integral is complex.
struct Estimate {
  double value = 0.0;
  double err_estimate = 0.0;
  double imag = 0.0;
};

struct Accuracy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  /// Added to ln(1/tol) when choosing the outer time truncation.
  double time_margin = 5.0;
  /// Upper limit of the level integral defining psi.
  double psi_truncation = 8.0;
  /// Finite-difference step for k(s, x - a).
  double fd_step = 1e-4;
  /// Nodes per unit length of the inner level integrals of g and p.
  int inner_nodes = 32;
  /// Panel budget of every adaptive integral; exhausting it is a NumericalError.
  int max_subdivisions = 1 << 14;

  void validate() const;
};

Estimate h_density(double x, double t, const Accuracy& acc = {});

Estimate hitting_prob(StartState state, const Accuracy& acc = {});
/// e^{2sx} g(s, x) = e^{-2s^3/3} Q^{(s,x)}{never hit}; the scaled form avoids overflow.
Estimate g_scaled(StartState state, const Accuracy& acc = {});
Estimate g_fun(StartState state, const Accuracy& acc = {});
Estimate survival_prob(StartState state, const Accuracy& acc = {});
/// f(s, x) = e^{-2sx - 2s^3/3} hitting_prob(s, x).
Estimate f_fun(StartState state, const Accuracy& acc = {});

/// g(0, -x) for many x >= 0 from one sweep of the outer integral.
std::vector<double> g0_profile(const std::vector<double>& xs, const Accuracy& acc = {});

Estimate phi(double t, const Accuracy& acc = {});
/// k(s, 0) = e^{2s^3/3} phi(s), the density of the one-sided maximum at 0.
Estimate k_boundary(double s, const Accuracy& acc = {});
Estimate chernoff_density(double t, const Accuracy& acc = {});
Estimate psi(double t, const Accuracy& acc = {});

Estimate joint_density_one_sided(double t, double a, StartState state, const Accuracy& acc = {});
Estimate max_density_one_sided(double a, StartState state, const Accuracy& acc = {});
Estimate joint_density_two_sided(double t, double a, const Accuracy& acc = {});
/// Density of the two-sided maximum, 2 g(0,-a) int_0^inf h_{-a}(t) phi(t) dt.
Estimate max_density_two_sided(double a, const Accuracy& acc = {});

double bm_first_passage_density(double z, double u);

/// (1/2pi) int [int_0^inf e^{-2^{1/3}s(iu+y)} Ai(iu+y) dy] / Ai(iu)^2 du.
Estimate p_function(double s, const Accuracy& acc = {});

/// int_0^inf e^{-lambda u} h_x(u) du by quadrature of h_density.
Estimate laplace_of_h(double lambda, double x, const Accuracy& acc = {});

enum class TableKind { argmax, max, joint, joint_marginal, first_passage };

std::string to_string(TableKind kind);

struct DensityTable {
  TableKind kind = TableKind::argmax;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> err_estimates;
  /// Points whose evaluation threw; their values are NaN.
  std::vector<std::size_t> failed;
  Accuracy accuracy;
  /// first_passage: start state; joint: fixed level a in x.
  StartState state;
  int threads = 1;

  double trapezoid_mass() const;
};

/// argmax: f_Z; max: two-sided max density; joint: two-sided joint density
/// of (argmax, max) in t at level a = state.x > 0; joint_marginal: its
/// integral over a, psi(|t|) phi(|t|); first_passage: h-based density of
/// the hitting time from state under the drift.
DensityTable tabulate(TableKind kind, const std::vector<double>& grid, const Accuracy& acc = {},
                      StartState state = {}, int threads = 1);

}  // namespace chernoff::process
