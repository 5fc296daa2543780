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
#include <limits>
#include <thread>

#include "chernoff/process.hpp"
#include "internal/process_detail.hpp"

namespace chernoff::process {

namespace {

// phi(t) for t >= 5 is below 1e-40; the time integrals against phi stop there.
constexpr double kPhiHorizon = 5.0;

Estimate scaled(Estimate e, double w) {
  e.value *= w;
  e.err_estimate *= std::abs(w);
  e.imag *= w;
  return e;
}

Estimate product(const Estimate& a, const Estimate& b) {
  return {a.value * b.value, std::abs(a.value) * b.err_estimate + std::abs(b.value) * a.err_estimate, 0.0};
}

}  // namespace

Estimate joint_density_one_sided(double t, double a, StartState state, const Accuracy& acc) {
  if (!(t > state.s)) throw DomainError("joint_density_one_sided: t must exceed s");
  if (!(a > state.x)) throw DomainError("joint_density_one_sided: a must exceed x");
  if (state.x > 0.0) throw DomainError("joint_density_one_sided: x must be <= 0");
  const double s = state.s;
  const double w = std::exp(2.0 * s * s * s / 3.0 + 2.0 * s * (state.x - a));
  return scaled(product(h_density(state.x - a, t - s, acc), phi(t, acc)), w);
}

Estimate max_density_one_sided(double a, StartState state, const Accuracy& acc) {
  if (!(a > state.x)) throw DomainError("max_density_one_sided: a must exceed x");
  if (state.x > 0.0) throw DomainError("max_density_one_sided: x must be <= 0");
  acc.validate();
  const double y = state.x - a;
  const double h = acc.fd_step;
  if (y + h > 0.0) {
    throw NumericalError("max_density_one_sided: finite-difference step crosses the barrier (x - a + h > 0)");
  }
  auto hit = [&](double level) { return hitting_prob({state.s, level}, acc); };
  const Estimate p1 = hit(y + h), m1 = hit(y - h), p2 = hit(y + 0.5 * h), m2 = hit(y - 0.5 * h);
  const double coarse = (p1.value - m1.value) / (2.0 * h);
  const double fine = (p2.value - m2.value) / h;
  Estimate e;
  e.value = (4.0 * fine - coarse) / 3.0;
  const double noise = (4.0 * (p2.err_estimate + m2.err_estimate) / h + (p1.err_estimate + m1.err_estimate) / (2.0 * h)) / 3.0;
  e.err_estimate = std::abs(e.value - fine) + noise;
  return e;
}

Estimate joint_density_two_sided(double t, double a, const Accuracy& acc) {
  if (!(a > 0.0)) throw DomainError("joint_density_two_sided: a must be positive");
  const double at = std::abs(t);
  if (at == 0.0) return {};
  const Estimate h = h_density(-a, at, acc);
  const Estimate g = g_fun({0.0, -a}, acc);
  return product(product(h, g), phi(at, acc));
}

Estimate max_density_two_sided(double a, const Accuracy& acc) {
  if (!(a > 0.0)) throw DomainError("max_density_two_sided: a must be positive");
  acc.validate();
  auto integrand = [&](double t, Accuracy& inner, double* err) {
    const Estimate p = product(h_density(-a, t, inner), phi(t, inner));
    *err = p.err_estimate;
    return p.value;
  };
  const Estimate time = detail::integrate_time(integrand, a * a / 80.0, kPhiHorizon, 0.25 * acc.abs_tol, acc);
  const Estimate g = g_fun({0.0, -a}, acc);
  Estimate e = scaled(product(time, g), 2.0);
  e.err_estimate += std::exp(-40.0);
  return e;
}

std::string to_string(TableKind kind) {
  switch (kind) {
    case TableKind::argmax:
      return "argmax";
    case TableKind::max:
      return "max";
    case TableKind::joint:
      return "joint";
    case TableKind::joint_marginal:
      return "joint_marginal";
    case TableKind::first_passage:
      return "first_passage";
  }
  return "unknown";
}

double DensityTable::trapezoid_mass() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) m += 0.5 * (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]);
  return m;
}

namespace {

Estimate table_point(TableKind kind, double v, const Accuracy& acc, StartState state) {
  switch (kind) {
    case TableKind::argmax:
      return chernoff_density(v, acc);
    case TableKind::max:
      return v > 0.0 ? max_density_two_sided(v, acc) : Estimate{};
    case TableKind::joint:
      return joint_density_two_sided(v, state.x, acc);
    case TableKind::joint_marginal: {
      const double at = std::abs(v);
      return product(psi(at, acc), phi(at, acc));
    }
    case TableKind::first_passage: {
      if (!(v > state.s) || state.x == 0.0) return {};
      const double s = state.s;
      const double w = std::exp(2.0 * s * state.x - (2.0 / 3.0) * (v * v * v - s * s * s));
      return scaled(h_density(state.x, v - s, acc), w);
    }
  }
  return {};
}

}  // namespace

DensityTable tabulate(TableKind kind, const std::vector<double>& grid, const Accuracy& acc, StartState state,
                      int threads) {
  acc.validate();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i])) throw DomainError("tabulate: grid must be strictly increasing");
  }
  if (kind == TableKind::first_passage && state.x > 0.0) throw DomainError("tabulate: x must be <= 0");
  if (kind == TableKind::joint && !(state.x > 0.0)) throw DomainError("tabulate: joint needs a level a > 0");
  DensityTable table;
  table.kind = kind;
  table.grid = grid;
  table.accuracy = acc;
  table.state = state;
  table.threads = std::max(1, threads);
  const std::size_t n = grid.size();
  table.values.assign(n, 0.0);
  table.err_estimates.assign(n, 0.0);
  std::vector<char> failed(n, 0);

  // strided assignment; each point is self-contained so order does not matter
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      try {
        const Estimate e = table_point(kind, grid[i], acc, state);
        table.values[i] = e.value;
        table.err_estimates[i] = e.err_estimate;
      } catch (const std::exception&) {
        table.values[i] = std::numeric_limits<double>::quiet_NaN();
        table.err_estimates[i] = std::numeric_limits<double>::infinity();
        failed[i] = 1;
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(table.threads, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) table.failed.push_back(i);
  }
  return table;
}

}  // namespace chernoff::process
