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

#include "chernoff/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <string>

#include "chernoff/kernels.hpp"

namespace chernoff::quad {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kTiny = 2.2250738585072014e-308;

// Kronrod abscissae (positive half, descending) and weights; every odd
// index is also a 7-point Gauss node.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Node layout for one panel: 0..6 left nodes, 7 centre, 8..14 right nodes.
struct PanelWeights {
  std::array<double, 15> kronrod{};
  std::array<double, 15> gauss{};
  std::array<double, 15> offset{};
  PanelWeights() {
    for (int j = 0; j < 7; ++j) {
      offset[j] = -kXgk[j];
      offset[14 - j] = kXgk[j];
      kronrod[j] = kronrod[14 - j] = kWgk[j];
      if (j % 2 == 1) gauss[j] = gauss[14 - j] = kWg[j / 2];
    }
    offset[7] = 0.0;
    kronrod[7] = kWgk[7];
    gauss[7] = kWg[3];
  }
};

const PanelWeights& panel_weights() {
  static const PanelWeights w;
  return w;
}

struct Panel {
  double a;
  double b;
  Complex value;
  double err;
  bool at_roundoff;
};

Panel eval_panel(const Integrand& f, double a, double b) {
  const auto& pw = panel_weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 15> re{}, im{}, absf{};
  for (int j = 0; j < 15; ++j) {
    const Complex v = f(c + h * pw.offset[j]);
    re[j] = v.real();
    im[j] = v.imag();
    absf[j] = std::abs(v);
  }
  const auto k = kernels::weighted_sum(pw.kronrod, re, im);
  const auto g = kernels::weighted_sum(pw.gauss, re, im);
  const std::array<double, 15> zeros{};
  const double resabs = kernels::weighted_sum(pw.kronrod, absf, zeros).re * std::abs(h);
  const Complex mean(0.5 * k.re, 0.5 * k.im);
  std::array<double, 15> dev{};
  for (int j = 0; j < 15; ++j) dev[j] = std::abs(Complex(re[j], im[j]) - mean);
  const double resasc = kernels::weighted_sum(pw.kronrod, dev, zeros).re * std::abs(h);

  Panel p{a, b, Complex(k.re, k.im) * h, 0.0, false};
  double err = std::abs(Complex(k.re - g.re, k.im - g.im) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > kTiny / (50.0 * kEps) && 50.0 * kEps * resabs >= err) {
    err = 50.0 * kEps * resabs;
    p.at_roundoff = true;
  }
  p.err = err;
  return p;
}

Complex pairwise_sum(const std::vector<Panel>& panels, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return panels[lo].value;
  if (hi - lo == 2) return panels[lo].value + panels[lo + 1].value;
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(panels, lo, mid) + pairwise_sum(panels, mid, hi);
}

QuadratureResult adapt(const Integrand& f, double a, double b, const QuadratureSpec& spec, double target_abs,
                       double rel_tol) {
  QuadratureResult r;
  if (a == b) return r;
  const double width = b - a;
  double cap = std::abs(width);
  if (spec.frequency != 0.0) cap = std::min(cap, kPi / (4.0 * std::max(1.0, std::abs(spec.frequency))));
  const int n0 = std::max(spec.initial_panels, static_cast<int>(std::ceil(std::abs(width) / cap - 1e-12)));
  if (n0 > spec.max_subdivisions) {
    throw DomainError("quadrature: frequency cap needs more panels than max_subdivisions");
  }

  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(std::min(spec.max_subdivisions, 1 << 16)));
  for (int i = 0; i < n0; ++i) {
    const double pa = a + width * i / n0;
    const double pb = (i + 1 == n0) ? b : a + width * (i + 1) / n0;
    panels.push_back(eval_panel(f, pa, pb));
  }
  auto worse = [&panels](std::size_t x, std::size_t y) {
    if (panels[x].err != panels[y].err) return panels[x].err < panels[y].err;
    return panels[x].a > panels[y].a;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
  Complex total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    heap.push(i);
    total += panels[i].value;
    total_err += panels[i].err;
  }

  while (total_err > std::max(target_abs, rel_tol * std::abs(total))) {
    if (static_cast<int>(panels.size()) >= spec.max_subdivisions) {
      r.status = Status::budget_exceeded;
      break;
    }
    const std::size_t i = heap.top();
    // the worst panel is already limited by rounding; splitting cannot help
    if (panels[i].at_roundoff) break;
    heap.pop();
    const Panel old = panels[i];
    const double mid = 0.5 * (old.a + old.b);
    if (!(mid > std::min(old.a, old.b) && mid < std::max(old.a, old.b))) {
      // panel cannot be split further in binary64
      r.status = Status::budget_exceeded;
      break;
    }
    panels[i] = eval_panel(f, old.a, mid);
    panels.push_back(eval_panel(f, mid, old.b));
    total += panels[i].value + panels.back().value - old.value;
    total_err += panels[i].err + panels.back().err - old.err;
    heap.push(i);
    heap.push(panels.size() - 1);
  }

  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  if (width < 0) std::reverse(panels.begin(), panels.end());
  r.value = pairwise_sum(panels, 0, panels.size());
  double err = 0.0;
  for (const auto& p : panels) err += p.err;
  r.err_estimate = err;
  r.evaluations = static_cast<long>(panels.size()) * 15;
  return r;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol >= 1e-14) || !(rel_tol >= 1e-14)) throw DomainError("quadrature: tolerances must be >= 1e-14");
  if (max_subdivisions < 1 || max_subdivisions > (1 << 20)) {
    throw DomainError("quadrature: max_subdivisions must lie in [1, 2^20]");
  }
  if (truncation_halfwidth && !(*truncation_halfwidth > 0.0)) {
    throw DomainError("quadrature: truncation_halfwidth must be positive");
  }
}

const QuadratureResult& require_ok(const QuadratureResult& r, const char* what) {
  if (!r.ok()) {
    throw NumericalError(std::string(what) + ": quadrature budget exceeded (err estimate " +
                         std::to_string(r.err_estimate) + ")");
  }
  return r;
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  QuadratureResult r = adapt(f, a, b, spec, spec.abs_tol, spec.rel_tol);
  r.truncation_used = 0.0;
  return r;
}

double solve_truncation(const TailBound& decay, double target, double lo, double hi) {
  if (decay(lo) <= target) return lo;
  if (decay(hi) > target) return hi;
  for (int i = 0; i < 100 && hi - lo > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (decay(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace {

QuadratureResult truncated(const Integrand& f, const TailBound& decay, const QuadratureSpec& spec, bool two_sided) {
  spec.validate();
  const double u = spec.truncation_halfwidth
                       ? *spec.truncation_halfwidth
                       : solve_truncation(decay, 0.5 * spec.abs_tol, spec.truncation_min, spec.truncation_max);
  const double tail = decay(u);
  // discretisation budget is what remains after the tail
  const double target = std::max(spec.abs_tol - tail, 0.5 * spec.abs_tol);
  QuadratureResult r = adapt(f, two_sided ? -u : 0.0, u, spec, target, spec.rel_tol);
  r.err_estimate += tail;
  r.truncation_used = u;
  return r;
}

}  // namespace

QuadratureResult integrate_real_line(const Integrand& f, const TailBound& decay, const QuadratureSpec& spec) {
  return truncated(f, decay, spec, true);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const TailBound& decay, const QuadratureSpec& spec) {
  return truncated(f, decay, spec, false);
}

namespace {

// |Ai(iu)| >= 0.81 e^{(sqrt2/3)|u|^{3/2}} / (2 sqrt(pi) |u|^{1/4}) and
// |Ai(iu+y)| <= 1.1 e^{(sqrt2/3)|u|^{3/2}} / (2 sqrt(pi) |u|^{1/4}) for
// |u| >= 4, y >= 0 (Re zeta grows along horizontal lines to the right).
constexpr double kRate1 = 0.47140452079103168;  // sqrt(2)/3
constexpr double kRate2 = 0.94280904158206336;  // 2 sqrt(2)/3
constexpr double kLower = 0.81;
constexpr double kUpper = 1.1;

}  // namespace

double airy_ratio_envelope(double shift, double u, double scale) {
  const double au = std::max(std::abs(u), 1.0);
  const double two_sqrt_pi = 2.0 * std::sqrt(kPi);
  if (shift == 0.0) {
    return scale * (two_sqrt_pi * two_sqrt_pi / (kLower * kLower)) * std::sqrt(au) *
           std::exp(-kRate2 * au * std::sqrt(au));
  }
  return scale * shift * (kUpper * two_sqrt_pi / (kLower * kLower)) * std::pow(au, 0.25) *
         std::exp(-kRate1 * au * std::sqrt(au));
}

TailBound airy_ratio_tail_bound(double shift, double scale) {
  if (shift < 0.0) throw DomainError("airy_ratio_tail_bound: shift must be >= 0");
  return [shift, scale](double big_u) {
    const double u = std::max(big_u, 1.0);
    const double two_sqrt_pi = 2.0 * std::sqrt(kPi);
    if (shift == 0.0) {
      // 2 * int_U^inf K u^{1/2} e^{-c u^{3/2}} du = 2K e^{-c U^{3/2}} / (1.5 c)
      const double k = two_sqrt_pi * two_sqrt_pi / (kLower * kLower);
      return scale * 2.0 * k * std::exp(-kRate2 * u * std::sqrt(u)) / (1.5 * kRate2);
    }
    // u^{1/4} <= u^{1/2} U^{-1/4} on [U, inf)
    const double k = shift * kUpper * two_sqrt_pi / (kLower * kLower);
    return scale * 2.0 * k * std::pow(u, -0.25) * std::exp(-kRate1 * u * std::sqrt(u)) / (1.5 * kRate1);
  };
}

TailBound reciprocal_ai_tail_bound(double scale) {
  return [scale](double big_u) {
    const double u = std::max(big_u, 1.0);
    const double k = 2.0 * std::sqrt(kPi) / kLower;
    return scale * 2.0 * k * std::pow(u, -0.25) * std::exp(-kRate1 * u * std::sqrt(u)) / (1.5 * kRate1);
  };
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

Complex integrate_fixed(const std::function<Complex(double)>& f, double a, double b, int nodes_per_unit) {
  if (a == b) return 0.0;
  const GaussRule& rule = gauss_legendre(nodes_per_unit);
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) - 1e-12)));
  const double step = (b - a) / pieces;
  std::vector<double> re(rule.nodes.size()), im(rule.nodes.size());
  Complex total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double c = a + (p + 0.5) * step;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const Complex v = f(c + 0.5 * step * rule.nodes[j]);
      re[j] = v.real();
      im[j] = v.imag();
    }
    const auto s = kernels::weighted_sum(rule.weights, re, im);
    total += Complex(s.re, s.im) * (0.5 * step);
  }
  return total;
}

}  // namespace chernoff::quad
