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

// Named, tolerance-tagged numerical checks of the identities the library
// relies on. Every check is deterministic.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chernoff/mcsim.hpp"
#include "chernoff/process.hpp"
#include "chernoff/types.hpp"

namespace chernoff::verify {

struct CheckReport {
  std::string name;
  Complex target;
  Complex computed;
  double abs_err = 0.0;
  double tol = 0.0;
  bool passed = false;
  long runtime_ms = 0;
  /// Free-form extra data (e.g. observed convergence order).
  std::string note;
};

/// Builds a report with passed = (abs_err <= tol).
CheckReport make_report(std::string name, Complex target, Complex computed, double abs_err, double tol);

struct AppendixDOptions {
  double abs_tol = 1e-12;
  /// Overrides the automatic truncation of the u-integral.
  std::optional<double> truncation;
  double tol = 1e-8;
};

CheckReport check_appendix_d(const AppendixDOptions& opt = {});

std::vector<CheckReport> check_airy_wronskian(int points = 1000, double tol = 1e-11);
std::vector<CheckReport> check_airy_connection(int points = 1000, double tol = 1e-12);
std::vector<CheckReport> check_airy_ode_order();
/// d/du of e^{-i pi/6} Ai(e^{-i pi/6} u) / (i Ai(iu)) against 1/(2 pi Ai(iu)^2).
std::vector<CheckReport> check_airy_square_derivative(double tol = 1e-8);
std::vector<CheckReport> check_regime_continuity(double tol = 1e-10);

/// Default grid: s in {-1.5,-0.5,0,0.5,1.5} x x in {-3,-2,-1,-0.5,-0.1}.
std::vector<std::pair<double, double>> default_master_grid();
std::vector<CheckReport> check_master_relation(const std::vector<std::pair<double, double>>& grid,
                                               double rel_tol = 1e-6, const process::Accuracy& acc = {});

std::vector<CheckReport> check_pde_residuals(process::StartState point = {0.3, -1.0},
                                             const std::vector<double>& steps = {0.02, 0.01, 0.005},
                                             const process::Accuracy& acc = {});

std::vector<CheckReport> check_psi_phi(const std::vector<double>& ts = {0.0, 0.5, 1.0}, double tol = 1e-5,
                                       const process::Accuracy& acc = {});

std::vector<CheckReport> check_laplace_roundtrip(const std::vector<double>& lambdas = {0.5, 1.0, 2.0},
                                                 const std::vector<double>& xs = {-0.5, -1.0}, double tol = 1e-8,
                                                 const process::Accuracy& acc = {});

std::vector<CheckReport> check_appendix_c(const std::vector<double>& ss = {-1.0, 0.0, 1.0, 2.0},
                                          double rel_tol = 1e-6, const process::Accuracy& acc = {});

/// f_Z on [-3, 3]: worst |f(t) - f(-t)| and the trapezoid mass.
std::vector<CheckReport> check_chernoff_density(double step = 0.01, double sym_tol = 1e-12, double mass_tol = 1e-5,
                                                const process::Accuracy& acc = {}, int threads = 1);

struct MomentOptions {
  double t_limit = 4.0;
  double a_limit = 6.0;
  double rel_tol = 1e-4;
  process::Accuracy accuracy;
};

/// E tau^2 against E M / 3, plus E tau = 0 and E M > 0.
std::vector<CheckReport> check_moment_relation(const MomentOptions& opt = {});

struct McOptions {
  mcsim::McConfig config{1000000, 5e-4, 4.0, 1, true, 1};
  double ks_allowance = 0.003;
};

/// CDF of f_Z on [-4, 4]: Simpson cell masses, cubic Hermite in between.
class ChernoffCdf {
 public:
  explicit ChernoffCdf(double step = 0.01, const process::Accuracy& acc = {}, int threads = 1);
  double operator()(double t) const;

 private:
  double step_;
  std::vector<double> grid_, density_, cdf_;
};

/// KS of the simulated argmax against the f_Z CDF, hitting probability at
/// (0, -1) against quadrature, and the pure-BM passage histogram at z = 1.
/// The CDF is built on demand when none is given.
std::vector<CheckReport> check_monte_carlo(const McOptions& opt = {}, const ChernoffCdf* cdf = nullptr);

struct Profile {
  std::vector<std::string> suites;  // any of all, airy, identities, pde, mc
  /// Multiplies every tolerance after the fact (strict = 0.01).
  double tol_scale = 1.0;
  McOptions mc;
  process::Accuracy accuracy;
  int threads = 1;
};

Profile default_profile();
Profile strict_profile();

/// Runs the selected suites in declaration order; throws DomainError
/// ("no checks selected") on an empty suite list.
std::vector<CheckReport> run_all(const Profile& profile);

bool all_passed(const std::vector<CheckReport>& reports);

/// One JSON object per line. Runtimes are left out unless asked for, so the
/// output of a fixed configuration is byte-identical across runs.
std::string to_jsonl(const std::vector<CheckReport>& reports, bool with_runtime = false);
std::string summary(const std::vector<CheckReport>& reports, bool with_runtime = false);

}  // namespace chernoff::verify
