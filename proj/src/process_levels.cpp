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

// Quantities built from level integrals of Ai along horizontal lines:
// g, p, the g(0, .) profile and psi.

#include <algorithm>
#include <cmath>
#include <vector>

#include "chernoff/airy.hpp"
#include "chernoff/process.hpp"
#include "chernoff/quadrature.hpp"
#include "internal/process_detail.hpp"

namespace chernoff::process {

using detail::kBeta;
using detail::kFourThird;

namespace {

// Taylor coefficients of Ai about p, from exact Ai(p), Ai'(p) and the ODE
// w'' = z w, kept until the terms are negligible on a disc of radius r.
std::vector<Complex> taylor_coefficients(Complex p, double r) {
  const auto pair = airy::airy_ai_pair(p);
  std::vector<Complex> c{pair.ai, pair.aip};
  const double ref = std::abs(pair.ai) + std::abs(pair.aip) * r;
  const int min_terms = static_cast<int>(2.0 * std::sqrt(std::abs(p)) * r) + 6;
  double rk = r;
  for (int k = 0; k < 160; ++k) {
    const Complex prev = k == 0 ? Complex(0.0) : c[static_cast<std::size_t>(k - 1)];
    c.push_back((p * c[static_cast<std::size_t>(k)] + prev) / static_cast<double>((k + 2) * (k + 1)));
    rk *= r;
    const int n = k + 2;
    if (n >= min_terms && std::abs(c[static_cast<std::size_t>(n)]) * rk * r < 1e-18 * ref &&
        std::abs(c[static_cast<std::size_t>(n - 1)]) * rk < 1e-18 * ref) {
      break;
    }
  }
  return c;
}

// int_lo^hi e^{-c y} Ai(w0 + y) dy with a Gauss-Legendre rule whose node
// count is proportional to the length (nodes_per_unit per unit).
Complex airy_piece(Complex w0, double c, double lo, double hi, int nodes_per_unit) {
  const double len = hi - lo;
  const int n = std::clamp(static_cast<int>(std::ceil(nodes_per_unit * len - 1e-9)), 8, nodes_per_unit);
  const auto& rule = quad::gauss_legendre(n);
  const double mid = 0.5 * (lo + hi);
  const double r = 0.5 * len;
  const auto coef = taylor_coefficients(w0 + mid, r);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double d = r * rule.nodes[j];
    Complex v = coef.back();
    for (std::size_t k = coef.size() - 1; k-- > 0;) v = v * d + coef[k];
    sum += rule.weights[j] * std::exp(-c * (mid + d)) * v;
  }
  return sum * r;
}

// Cumulative int_0^{b_k} e^{-c y} Ai(w0 + y) dy for ascending b_k > 0.
std::vector<Complex> airy_line_integrals(Complex w0, double c, const std::vector<double>& breaks, int nodes_per_unit) {
  std::vector<Complex> out;
  out.reserve(breaks.size());
  Complex acc = 0.0;
  double prev = 0.0;
  for (double b : breaks) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(b - prev - 1e-12)));
    const double step = (b - prev) / pieces;
    for (int i = 0; i < pieces; ++i) {
      acc += airy_piece(w0, c, prev + i * step, i + 1 == pieces ? b : prev + (i + 1) * step, nodes_per_unit);
    }
    out.push_back(acc);
    prev = b;
  }
  return out;
}

// (1/pi) Re int_0^inf e^{-beta s iu} inner(u) / Ai(iu)^2 du.
Estimate level_outer(const std::function<Complex(double)>& inner, double s, const quad::TailBound& decay,
                     double abs_tol, const Accuracy& acc) {
  quad::QuadratureSpec spec;
  spec.max_subdivisions = acc.max_subdivisions;
  spec.abs_tol = detail::clamp_tol(kPi * abs_tol);
  spec.rel_tol = acc.rel_tol;
  spec.frequency = kBeta * std::abs(s);
  auto f = [&](double u) {
    const Complex log_ai = airy::log_ai(Complex(0.0, u));
    return std::exp(Complex(0.0, -kBeta * s * u) - 2.0 * log_ai) * inner(u);
  };
  const auto r = quad::require_ok(quad::integrate_semi_infinite(f, decay, spec), "level integral");
  Estimate e;
  e.value = r.value.real() / kPi;
  e.err_estimate = r.err_estimate / kPi;
  return e;
}

double lead_weight(double s, double len) { return std::max(1.0, std::exp(-kBeta * s * len)); }

}  // namespace

Estimate g_scaled(StartState state, const Accuracy& acc) {
  const double s = state.s;
  const double x = state.x;
  if (x > 0.0) throw DomainError("g: x must be <= 0");
  acc.validate();
  if (x == 0.0) return {};
  const double len = -kFourThird * x;
  const std::vector<double> breaks{len};
  auto inner = [&](double u) {
    return airy_line_integrals(Complex(0.0, u), kBeta * s, breaks, acc.inner_nodes).front();
  };
  // the survival probability is e^{2 s^3 / 3} times this value
  const double target = acc.abs_tol * std::exp(-2.0 * s * s * s / 3.0);
  return level_outer(inner, s, quad::airy_ratio_tail_bound(len, lead_weight(s, len)), target, acc);
}

Estimate g_fun(StartState state, const Accuracy& acc) {
  Estimate e = g_scaled(state, acc);
  const double w = std::exp(-2.0 * state.s * state.x);
  e.value *= w;
  e.err_estimate *= w;
  return e;
}

Estimate survival_prob(StartState state, const Accuracy& acc) {
  Estimate e = g_scaled(state, acc);
  const double w = std::exp(2.0 * std::pow(state.s, 3) / 3.0);
  e.value *= w;
  e.err_estimate *= w;
  return e;
}

Estimate p_function(double s, const Accuracy& acc) {
  acc.validate();
  const double c = kBeta * s;
  // extend the level integral piece by piece until further pieces are negligible
  auto inner = [&](double u) {
    const Complex w0(0.0, u);
    Complex sum = 0.0;
    int quiet = 0;
    for (int k = 0; k < 60 && quiet < 2; ++k) {
      const Complex piece = airy_piece(w0, c, k, k + 1, acc.inner_nodes);
      sum += piece;
      quiet = std::abs(piece) < 1e-17 * std::abs(sum) ? quiet + 1 : 0;
    }
    return sum;
  };
  // for large u, |Ai(iu + y)| decays in y at least like e^{-y sqrt(u/2)}
  auto decay = [c](double big_u) {
    const double rate = std::sqrt(std::max(big_u, 1.0) / 2.0) + c;
    const double shift = rate > 0.1 ? 1.0 / rate : 1e3;
    return quad::airy_ratio_tail_bound(shift)(big_u);
  };
  return level_outer(inner, s, decay, acc.abs_tol * std::exp(-2.0 * s * s * s / 3.0), acc);
}

std::vector<double> g0_profile(const std::vector<double>& xs, const Accuracy& acc) {
  acc.validate();
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0.0)) throw DomainError("g0_profile: levels must be >= 0");
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> breaks;
  for (std::size_t i : order) {
    const double b = kFourThird * xs[i];
    if (b > 0.0 && (breaks.empty() || b > breaks.back())) breaks.push_back(b);
  }
  std::vector<double> out(xs.size(), 0.0);
  if (breaks.empty()) return out;

  const double big_u = quad::solve_truncation(quad::airy_ratio_tail_bound(breaks.back()), 0.25 * acc.abs_tol, 5.0, 200.0);
  const auto& rule = quad::gauss_legendre(32);
  std::vector<Complex> sums(breaks.size(), 0.0);
  const int pieces = static_cast<int>(std::ceil(big_u));
  for (int p = 0; p < pieces; ++p) {
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double u = p + 0.5 + 0.5 * rule.nodes[j];
      const Complex w0(0.0, u);
      const Complex scale = 0.5 * rule.weights[j] * std::exp(-2.0 * airy::log_ai(w0));
      const auto line = airy_line_integrals(w0, 0.0, breaks, acc.inner_nodes);
      for (std::size_t k = 0; k < breaks.size(); ++k) sums[k] += scale * line[k];
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double b = kFourThird * xs[i];
    if (b == 0.0) continue;
    const auto k = static_cast<std::size_t>(std::lower_bound(breaks.begin(), breaks.end(), b) - breaks.begin());
    out[i] = sums[k].real() / kPi;
  }
  return out;
}

Estimate psi(double t, const Accuracy& acc) {
  if (!(t >= 0.0)) throw DomainError("psi: t must be >= 0");
  acc.validate();
  if (t == 0.0) {
    // limit t -> 0+: -(1/2) d/dx g(0, x) at x = 0-, one-sided fourth-order
    // differences at steps d and 2d; their gap is the reported error
    const double d = 0.005;
    const auto g = g0_profile({d, 2 * d, 3 * d, 4 * d, 6 * d, 8 * d}, acc);
    const double fine = (48.0 * g[0] - 36.0 * g[1] + 16.0 * g[2] - 3.0 * g[3]) / (12.0 * d);
    const double coarse = (48.0 * g[1] - 36.0 * g[3] + 16.0 * g[4] - 3.0 * g[5]) / (24.0 * d);
    return {0.5 * fine, 0.5 * std::abs(fine - coarse) + 1e-10, 0.0};
  }
  // level grid graded towards 0 where h_{-x}(t) concentrates for small t
  std::vector<double> edges{0.0};
  for (double e = std::min(1e-3, 0.01 * std::sqrt(t)); e < 1.0; e *= 2.0) edges.push_back(e);
  for (double e = 1.0; e <= acc.psi_truncation + 1e-12; e += 0.5) edges.push_back(e);
  if (edges.back() < acc.psi_truncation) edges.push_back(acc.psi_truncation);
  const auto& rule = quad::gauss_legendre(20);
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]);
    const double r = 0.5 * (edges[i + 1] - edges[i]);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      nodes.push_back(c + r * rule.nodes[j]);
      weights.push_back(r * rule.weights[j]);
    }
  }
  const auto g = g0_profile(nodes, acc);
  Estimate e;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Estimate h = h_density(-nodes[i], t, acc);
    e.value += weights[i] * h.value * g[i];
    e.err_estimate += weights[i] * h.err_estimate;
  }
  // discarded levels beyond the truncation: g <= 1 and h decays in x
  e.err_estimate += h_density(-acc.psi_truncation, t, acc).value;
  return e;
}

}  // namespace chernoff::process
