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

// Monte Carlo oracle for W(t) - t^2.
//
// Paths are generated by dyadic Brownian-bridge refinement of a coarse grid
// of at most 64 steps down to a finest step <= dt. A sub-interval is refined
// only while the probability that the bridge can exceed the current
// reference level (running maximum or barrier) is above kPruneProbability,
// so the results equal those of a full fixed-grid simulation except on an
// event of probability below ~1e-7 per path.
//
// Every Gaussian and uniform is drawn from Philox4x32-10 with a counter
// made of (grid index, path index, stream tag), so results depend only on
// (seed, configuration), never on the thread count.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "chernoff/process.hpp"

namespace chernoff::mcsim {

inline constexpr double kPruneProbability = 1e-9;

struct McConfig {
  long n_paths = 100000;
  double dt = 1e-3;
  double t_max = 4.0;
  std::uint64_t seed = 1;
  bool bridge_correction = true;
  int threads = 1;

  void validate() const;
};

struct PathFunctionals {
  double max = 0.0;
  double argmax = 0.0;
  std::optional<double> hit_time;
};

/// Grid actually used: n = m 2^levels steps of length step <= dt, m <= 64.
struct GridPlan {
  int coarse_steps = 1;
  int levels = 0;
  double step = 0.0;
};
GridPlan plan_grid(double horizon, double dt);

/// Two-sided process on [-t_max, t_max] started at 0.
std::vector<PathFunctionals> simulate_two_sided(const McConfig& cfg);

/// One-sided process x + W(u) - (u^2 - s^2), u in [s, s + t_max]; argmax is
/// an absolute time, hit_time the first time the level reaches 0.
std::vector<PathFunctionals> simulate_one_sided(process::StartState state, const McConfig& cfg);

struct Proportion {
  double p = 0.0;
  double std_error = 0.0;
  long hits = 0;
  long n = 0;
  /// Upper bound on the probability of a hit after the horizon.
  double horizon_bound = 0.0;
};

Proportion estimate_hitting_prob(process::StartState state, const McConfig& cfg);

struct Histogram {
  double lo = 0.0;
  double width = 0.1;
  std::vector<long> counts;
  /// Samples above the last bin, including paths that never hit.
  long overflow = 0;
  long n = 0;
};

/// First passage of driftless BM from z > 0 to 0 over (0, t_max], binned.
Histogram simulate_pure_bm_passage(double z, const McConfig& cfg, double bin_width = 0.1);

/// Kolmogorov-Smirnov distance between samples and a continuous CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson test of counts (plus overflow) against cell probabilities
/// (plus the remaining mass).
ChiSquare chi_square(const Histogram& h, const std::vector<double>& cell_probabilities);

/// Regularised upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Mean and standard error of the mean.
struct SampleMean {
  double mean = 0.0;
  double std_error = 0.0;
};
SampleMean sample_mean(const std::vector<double>& v);

}  // namespace chernoff::mcsim
