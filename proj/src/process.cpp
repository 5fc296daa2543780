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

#include "chernoff/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "chernoff/airy.hpp"
#include "chernoff/quadrature.hpp"
#include "internal/process_detail.hpp"

namespace chernoff::process {

namespace detail {

const double kBeta = std::cbrt(2.0);        // 2^{1/3}
const double kInvBeta = std::cbrt(0.5);     // 2^{-1/3}
const double kFourThird = std::cbrt(4.0);   // 4^{1/3}

double clamp_tol(double tol) { return std::max(tol, 1e-14); }

Estimate bromwich(const std::function<Complex(Complex)>& log_transform, double time, const Contour& c,
                  bool full_line, const Accuracy& acc) {
  const double sa = std::sin(c.alpha);
  const double ca = std::cos(c.alpha);
  auto point = [&](double u) { return Complex(c.sigma0 + c.mu * (1.0 - std::cosh(u)) * sa, c.mu * ca * std::sinh(u)); };
  auto log_integrand = [&](double u) {
    const Complex z = point(u);
    return z * time + log_transform(z);
  };
  const Complex log0 = log_integrand(0.0);
  const double top = log0.real();
  const double drop = std::log(1.0 / acc.rel_tol) + 12.0;
  double cut = 0.5;
  while (cut < 12.0 && log_integrand(cut).real() > top - drop) cut += 0.5;

  const double scale = std::exp(top);
  // the 1/(2 pi) or 1/pi prefactor is applied after the quadrature
  const double norm = full_line ? 1.0 / (2.0 * kPi) : 1.0 / kPi;
  quad::QuadratureSpec spec;
  spec.max_subdivisions = acc.max_subdivisions;
  // the integrand is normalised to modulus ~mu at u = 0; its evaluation noise
  // grows with the size of the logarithms that cancel inside log_transform
  const double noise = 4e-16 * std::max(std::abs(log0), c.log_scale);
  spec.rel_tol = std::max(acc.rel_tol, noise);
  const double noise_floor = std::max(1e-13, noise) * c.mu;
  spec.abs_tol = std::max(noise_floor, scale > 0.0 ? acc.abs_tol / (scale * norm) : 1.0);
  if (!std::isfinite(spec.abs_tol)) spec.abs_tol = 1.0;
  auto f = [&](double u) {
    const Complex dz(-c.mu * sa * std::sinh(u), c.mu * ca * std::cosh(u));
    return std::exp(log_integrand(u) - top) * dz;
  };
  const auto r = quad::require_ok(quad::integrate_interval(f, full_line ? -cut : 0.0, cut, spec), "bromwich inversion");
  Estimate e;
  const double tail = std::exp(-drop) * c.mu * std::cosh(cut);
  e.err_estimate = scale * norm * (r.err_estimate + tail);
  if (full_line) {
    // (1/2 pi i) int e^{zt} F(z) z'(u) du
    e.value = scale * norm * r.value.imag();
    e.imag = -scale * norm * r.value.real();
  } else {
    e.value = scale * norm * r.value.imag();
  }
  return e;
}

Estimate integrate_time(const std::function<double(double, Accuracy&, double*)>& f, double lo, double hi,
                        double abs_tol, const Accuracy& acc) {
  Estimate total;
  if (!(hi > lo)) return total;
  std::vector<double> edges{lo};
  while (edges.back() * 2.0 < hi) edges.push_back(edges.back() * 2.0);
  edges.push_back(hi);
  const std::size_t n = edges.size() - 1;
  double inner_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    quad::QuadratureSpec spec;
    spec.max_subdivisions = acc.max_subdivisions;
    spec.abs_tol = clamp_tol(abs_tol / static_cast<double>(n));
    spec.rel_tol = std::max(acc.rel_tol, 1e-13);
    spec.initial_panels = 1;
    Accuracy inner = acc;
    double panel_inner_err = 0.0;
    auto g = [&](double t) {
      double e = 0.0;
      const double v = f(t, inner, &e);
      panel_inner_err = std::max(panel_inner_err, e);
      return Complex(v);
    };
    const auto r = quad::require_ok(quad::integrate_interval(g, edges[i], edges[i + 1], spec), "time integral");
    total.value += r.value.real();
    total.err_estimate += r.err_estimate;
    inner_err += panel_inner_err * (edges[i + 1] - edges[i]);
  }
  total.err_estimate += inner_err;
  return total;
}

}  // namespace detail

using detail::kBeta;
using detail::kFourThird;
using detail::kInvBeta;

void Accuracy::validate() const {
  if (!(abs_tol >= 1e-14) || !(rel_tol >= 1e-14)) throw DomainError("accuracy: tolerances must be >= 1e-14");
  if (!(time_margin >= 0.0)) throw DomainError("accuracy: time_margin must be >= 0");
  if (!(psi_truncation > 0.0)) throw DomainError("accuracy: psi_truncation must be positive");
  if (!(fd_step > 0.0) || fd_step > 0.1) throw DomainError("accuracy: fd_step must lie in (0, 0.1]");
  if (inner_nodes < 4 || inner_nodes > 256) throw DomainError("accuracy: inner_nodes must lie in [4, 256]");
  if (max_subdivisions < 1 || max_subdivisions > (1 << 20))
    throw DomainError("accuracy: max_subdivisions must lie in [1, 2^20]");
}

Estimate h_density(double x, double t, const Accuracy& acc) {
  if (!(x < 0.0)) throw DomainError("h_density: x must be negative");
  if (!(t > 0.0)) throw DomainError("h_density: t must be positive");
  acc.validate();
  // below e^{-745} the density underflows; report it as an exact zero
  if (x * x / (2.0 * t) > 740.0) return {};
  const double shift = -kFourThird * x;
  const double saddle = x * x / (2.0 * t * t);
  detail::Contour c;
  c.sigma0 = saddle - 2.0;
  c.mu = std::max(1.0, -x / std::pow(t, 1.5));
  c.alpha = 0.6;
  auto log_ratio = [shift](Complex z) { return airy::log_ai_ratio(kInvBeta * z, shift); };
  return detail::bromwich(log_ratio, t, c, false, acc);
}

Estimate phi(double t, const Accuracy& acc) {
  acc.validate();
  detail::Contour c;
  c.sigma0 = t > 0.0 ? 2.0 * t * t : -2.0;
  c.mu = std::max(1.0, 2.0 * std::sqrt(std::abs(t)));
  c.alpha = 0.6;
  auto log_recip = [](Complex z) { return -airy::log_ai(kInvBeta * z); };
  Estimate e = detail::bromwich(log_recip, -t, c, true, acc);
  const double factor = 2.0 / kFourThird;
  e.value *= factor;
  e.imag *= factor;
  e.err_estimate *= factor;
  return e;
}

Estimate k_boundary(double s, const Accuracy& acc) {
  Estimate e = phi(s, acc);
  const double w = std::exp(2.0 * s * s * s / 3.0);
  e.value *= w;
  e.imag *= w;
  e.err_estimate *= w;
  return e;
}

Estimate chernoff_density(double t, const Accuracy& acc) {
  const Estimate a = phi(t, acc);
  const Estimate b = t == 0.0 ? a : phi(-t, acc);
  Estimate e;
  e.value = 0.5 * a.value * b.value;
  e.err_estimate = 0.5 * (std::abs(a.value) * b.err_estimate + std::abs(b.value) * a.err_estimate);
  return e;
}

double bm_first_passage_density(double z, double u) {
  if (!(z > 0.0) || !(u > 0.0)) throw DomainError("bm_first_passage_density: z and u must be positive");
  return z * std::exp(-z * z / (2.0 * u)) / std::sqrt(2.0 * kPi * u * u * u);
}

namespace {

// Smallest tau with (2/3)((s+tau)^3 - s^3) >= target.
double cubic_horizon(double s, double target) {
  auto phase = [s](double tau) { return (2.0 / 3.0) * (std::pow(s + tau, 3) - s * s * s); };
  double hi = 1.0;
  while (phase(hi) < target) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phase(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

// Below x^2/80 the density h_x is smaller than e^{-40} times its mass.
double time_floor(double x) { return x * x / 80.0; }

}  // namespace

Estimate hitting_prob(StartState state, const Accuracy& acc) {
  const double s = state.s;
  const double x = state.x;
  if (x > 0.0) throw DomainError("hitting_prob: x must be <= 0");
  acc.validate();
  if (x == 0.0) return {1.0, 0.0, 0.0};
  const double log_lead = 2.0 * s * x;
  const double horizon = cubic_horizon(s, std::log(1.0 / acc.abs_tol) + acc.time_margin + log_lead);
  const double lo = time_floor(x);
  // h errors are scaled so that their integrated effect stays inside abs_tol
  const double h_tol = detail::clamp_tol(acc.abs_tol * std::exp(-log_lead) / (4.0 * horizon));
  auto integrand = [&](double tau, Accuracy& inner, double* err) {
    inner.abs_tol = h_tol;
    const double w = std::exp(log_lead - (2.0 / 3.0) * (std::pow(s + tau, 3) - s * s * s));
    const Estimate h = h_density(x, tau, inner);
    *err = w * h.err_estimate;
    return w * h.value;
  };
  Estimate e = detail::integrate_time(integrand, lo, horizon, 0.5 * acc.abs_tol, acc);
  e.err_estimate += std::exp(log_lead - 40.0) + acc.abs_tol * 1e-3;
  return e;
}

Estimate f_fun(StartState state, const Accuracy& acc) {
  Estimate e = hitting_prob(state, acc);
  const double w = std::exp(-2.0 * state.s * state.x - 2.0 * std::pow(state.s, 3) / 3.0);
  e.value *= w;
  e.err_estimate *= w;
  return e;
}

Estimate laplace_of_h(double lambda, double x, const Accuracy& acc) {
  if (!(lambda >= 0.0)) throw DomainError("laplace_of_h: lambda must be >= 0");
  if (!(x < 0.0)) throw DomainError("laplace_of_h: x must be negative");
  acc.validate();
  // h_x decays like e^{-2.94 u} beyond its peak (first zero of Ai)
  const double horizon = std::max(4.0 * x * x, (std::log(1.0 / acc.abs_tol) + 8.0) / (lambda + 2.9));
  auto integrand = [&](double u, Accuracy& inner, double* err) {
    inner.abs_tol = detail::clamp_tol(acc.abs_tol / (4.0 * horizon));
    const double w = std::exp(-lambda * u);
    const Estimate h = h_density(x, u, inner);
    *err = w * h.err_estimate;
    return w * h.value;
  };
  Estimate e = detail::integrate_time(integrand, time_floor(x), horizon, 0.5 * acc.abs_tol, acc);
  e.err_estimate += std::exp(-40.0) + acc.abs_tol * 1e-3;
  return e;
}

}  // namespace chernoff::process
