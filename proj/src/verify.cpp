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

#include "chernoff/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "chernoff/airy.hpp"
#include "chernoff/quadrature.hpp"

namespace chernoff::verify {
namespace {

using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
  return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

// Runs `body`, stamping the wall time onto every report it returns.
std::vector<CheckReport> timed(const std::function<std::vector<CheckReport>()>& body) {
  const auto start = Clock::now();
  auto reports = body();
  const long ms = elapsed_ms(start);
  for (auto& r : reports) r.runtime_ms = ms;
  return reports;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// splitmix64; a fixed portable sequence for sample points.
struct PointStream {
  std::uint64_t state;
  double next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
};

const Complex kRot = std::polar(1.0, 2.0 * kPi / 3.0);

// Value of Ai (k = 0) or Ai' (k = 1) at z0 from the bundle at z = z0 + d,
// corrected to second order with the Airy ODE.
Complex extrapolate(const airy::AiryBundle& b, Complex z, Complex d, bool derivative, bool bi) {
  const Complex f = bi ? b.bi : b.ai;
  const Complex fp = bi ? b.bip : b.aip;
  if (!derivative) return f - d * fp + 0.5 * d * d * z * f;
  return fp - d * z * f + 0.5 * d * d * (f + z * fp);
}

}  // namespace

CheckReport make_report(std::string name, Complex target, Complex computed, double abs_err, double tol) {
  CheckReport r;
  r.name = std::move(name);
  r.target = target;
  r.computed = computed;
  r.abs_err = abs_err;
  r.tol = tol;
  r.passed = abs_err <= tol;
  return r;
}

CheckReport check_appendix_d(const AppendixDOptions& opt) {
  const auto start = Clock::now();
  quad::QuadratureSpec spec;
  spec.abs_tol = opt.abs_tol;
  spec.rel_tol = opt.abs_tol;
  spec.truncation_halfwidth = opt.truncation;
  const double norm = 1.0 / (2.0 * kPi);
  const auto res = quad::integrate_real_line(
      [norm](double u) {
        const Complex a = airy::airy_ai(Complex(0.0, u));
        return norm / (a * a);
      },
      quad::airy_ratio_tail_bound(0.0, norm), spec);
  // An unconverged or badly truncated integral must not pass on luck alone.
  const double err = std::abs(res.value - 1.0);
  auto r = make_report("appendix_d.integral", 1.0, res.value, std::max(err, res.err_estimate), opt.tol);
  r.note = "err_estimate=" + fmt(res.err_estimate) + " truncation=" + fmt(res.truncation_used) +
           (res.ok() ? "" : " budget_exceeded");
  r.runtime_ms = elapsed_ms(start);
  return r;
}

std::vector<CheckReport> check_airy_wronskian(int points, double tol) {
  return timed([&] {
    PointStream rng{0x5EED0001ULL};
    // Away from the origin Ai and Bi reach e^{|zeta|}, so the Wronskian is a
    // difference of products near e^{2|zeta|}; errors are measured against
    // that scale and against the bundle's own estimate.
    double worst = 0.0, worst_raw = 0.0, worst_est = 0.0;
    Complex worst_z, worst_w;
    for (int i = 0; i < points; ++i) {
      const double r = 20.0 * std::sqrt(rng.next());
      const double th = 2.0 * kPi * rng.next();
      const Complex z = std::polar(r, th);
      const auto b = airy::airy_all(z);
      const Complex w = b.ai * b.bip - b.aip * b.bi;
      const double raw = std::abs(w - 1.0 / kPi);
      const double scale = std::max(1.0, std::abs(b.ai * b.bip) + std::abs(b.aip * b.bi));
      worst_est = std::max(worst_est, raw / std::max(1e-12, 10.0 * b.abs_err_estimate));
      if (raw / scale > worst || i == 0) {
        worst = raw / scale;
        worst_raw = raw;
        worst_z = z;
        worst_w = w;
      }
    }
    auto rep = make_report("airy.wronskian", 1.0 / kPi, worst_w, worst, tol);
    rep.note = "points=" + std::to_string(points) + " worst_at=(" + fmt(worst_z.real()) + "," + fmt(worst_z.imag()) +
               ") raw=" + fmt(worst_raw) + " scaled by max(1, |ai bip| + |aip bi|)";
    auto est = make_report("airy.wronskian_vs_estimate", 0.0, worst_est, worst_est, 1.0);
    est.note = "max |W - 1/pi| / max(1e-12, 10 abs_err_estimate)";
    return std::vector<CheckReport>{rep, est};
  });
}

std::vector<CheckReport> check_airy_connection(int points, double tol) {
  return timed([&] {
    // For x > 0 the rotated terms are ~e^{(2/3)x^{3/2}} and cancel down to
    // Ai(x); the residual is measured relative to the largest term.
    double worst = 0.0, worst_x = 0.0, worst_raw = 0.0;
    Complex worst_v;
    for (int i = 0; i < points; ++i) {
      const double x = -10.0 + 20.0 * i / (points - 1);
      const Complex a = airy::airy_ai(Complex(x, 0.0));
      const Complex m = std::conj(kRot) * airy::airy_ai(std::conj(kRot) * x);
      const Complex p = kRot * airy::airy_ai(kRot * x);
      const Complex v = a + m + p;
      const double scale = std::max({1.0, std::abs(a), std::abs(m), std::abs(p)});
      if (std::abs(v) / scale > worst || i == 0) {
        worst = std::abs(v) / scale;
        worst_raw = std::abs(v);
        worst_x = x;
        worst_v = v;
      }
    }
    auto rep = make_report("airy.connection", 0.0, worst_v, worst, tol);
    rep.note = "points=" + std::to_string(points) + " worst_at=" + fmt(worst_x) + " raw=" + fmt(worst_raw) +
               " scaled by max(1, |terms|)";
    return std::vector<CheckReport>{rep};
  });
}

std::vector<CheckReport> check_airy_ode_order() {
  return timed([] {
    std::vector<CheckReport> out;
    const Complex zs[] = {{1.0, 1.0}, {-5.0, 4.0}, {-10.0, 2.0}};
    const char* labels[] = {"series", "taylor", "asymptotic"};
    for (int k = 0; k < 3; ++k) {
      const Complex z = zs[k];
      const Complex az = airy::airy_ai(z);
      double res[3];
      double h = 0.1;
      for (double& r : res) {
        const Complex d2 = (airy::airy_ai(z + h) - 2.0 * az + airy::airy_ai(z - h)) / (h * h);
        r = std::abs(d2 - z * az);
        h *= 0.5;
      }
      const double o1 = std::log2(res[0] / res[1]);
      const double o2 = std::log2(res[1] / res[2]);
      const double worst = std::max(std::abs(o1 - 2.0), std::abs(o2 - 2.0));
      auto rep = make_report(std::string("airy.ode_order.") + labels[k], 2.0,
                             std::abs(o1 - 2.0) > std::abs(o2 - 2.0) ? o1 : o2, worst, 0.3);
      rep.note = "orders=" + fmt(o1) + "," + fmt(o2);
      out.push_back(rep);
    }
    return out;
  });
}

std::vector<CheckReport> check_airy_square_derivative(double tol) {
  return timed([&] {
    const Complex rot = std::polar(1.0, -kPi / 6.0);
    const Complex i(0.0, 1.0);
    auto g = [&](double u) { return rot * airy::airy_ai(rot * u) / (i * airy::airy_ai(i * u)); };
    const double h = 1e-3;
    double worst = 0.0, worst_u = 0.0;
    Complex worst_t, worst_c;
    for (int k = 0; k <= 200; ++k) {
      const double u = -10.0 + 0.1 * k;
      const Complex d = (g(u - 2 * h) - 8.0 * g(u - h) + 8.0 * g(u + h) - g(u + 2 * h)) / (12.0 * h);
      const Complex a = airy::airy_ai(i * u);
      const Complex t = 1.0 / (2.0 * kPi * a * a);
      if (std::abs(d - t) > worst || k == 0) {
        worst = std::abs(d - t);
        worst_u = u;
        worst_t = t;
        worst_c = d;
      }
    }
    auto rep = make_report("airy.square_derivative", worst_t, worst_c, worst, tol);
    rep.note = "worst_at=" + fmt(worst_u);
    return std::vector<CheckReport>{rep};
  });
}

std::vector<CheckReport> check_regime_continuity(double tol) {
  return timed([&] {
    const double eps = 1e-6;
    double worst = 0.0;
    std::string where;
    for (double radius : {airy::kSeriesRadius, airy::kAsymptoticRadius}) {
      for (int k = 0; k < 24; ++k) {
        const double th = -kPi + 2.0 * kPi * (k + 0.5) / 24.0;
        const Complex z0 = std::polar(radius, th);
        const Complex zin = std::polar(radius - eps, th), zout = std::polar(radius + eps, th);
        const auto bin = airy::airy_all(zin), bout = airy::airy_all(zout);
        for (int which = 0; which < 4; ++which) {
          const bool deriv = which & 1, bi = which & 2;
          const Complex a = extrapolate(bin, zin, zin - z0, deriv, bi);
          const Complex b = extrapolate(bout, zout, zout - z0, deriv, bi);
          const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
          if (rel > worst) {
            worst = rel;
            where = "r=" + fmt(radius) + " ph=" + fmt(th) + " f=" + std::to_string(which);
          }
        }
      }
    }
    auto rep = make_report("airy.regime_continuity", 0.0, worst, worst, tol);
    rep.note = where;
    return std::vector<CheckReport>{rep};
  });
}

std::vector<std::pair<double, double>> default_master_grid() {
  std::vector<std::pair<double, double>> g;
  for (double s : {-1.5, -0.5, 0.0, 0.5, 1.5})
    for (double x : {-3.0, -2.0, -1.0, -0.5, -0.1}) g.emplace_back(s, x);
  return g;
}

std::vector<CheckReport> check_master_relation(const std::vector<std::pair<double, double>>& grid, double rel_tol,
                                               const process::Accuracy& acc) {
  std::vector<CheckReport> out;
  for (const auto& [s, x] : grid) {
    const auto start = Clock::now();
    const process::StartState st{s, x};
    const auto f = process::f_fun(st, acc);
    const auto g = process::g_fun(st, acc);
    const double target = std::exp(-2.0 * s * x - 2.0 * s * s * s / 3.0);
    const double sum = f.value + g.value;
    auto r = make_report("master.s=" + fmt(s) + ",x=" + fmt(x), target, sum, std::abs(sum - target),
                         rel_tol * target);
    r.note = "f=" + fmt(f.value) + " g=" + fmt(g.value);
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  }
  return out;
}

std::vector<CheckReport> check_pde_residuals(process::StartState point, const std::vector<double>& steps,
                                             const process::Accuracy& acc) {
  if (steps.size() < 2) throw DomainError("check_pde_residuals: need at least two steps");
  const double hmax = *std::max_element(steps.begin(), steps.end());
  if (!(point.x < -2.0 * hmax)) throw DomainError("check_pde_residuals: point too close to the barrier");
  std::vector<CheckReport> out;
  const double s = point.s, x = point.x;
  using Fn = process::Estimate (*)(process::StartState, const process::Accuracy&);
  const std::pair<const char*, Fn> funcs[] = {{"f", &process::f_fun}, {"g", &process::g_fun}};
  for (const auto& [label, fn] : funcs) {
    const auto start = Clock::now();
    auto F = [&](double ds, double dx) { return fn({s + ds, x + dx}, acc).value; };
    const double centre = F(0.0, 0.0);
    std::vector<double> res;
    for (double h : steps) {
      const double ds = (F(h, 0.0) - F(-h, 0.0)) / (2.0 * h);
      const double dxx =
          (-F(0.0, 2 * h) + 16.0 * F(0.0, h) - 30.0 * centre + 16.0 * F(0.0, -h) - F(0.0, -2 * h)) / (12.0 * h * h);
      res.push_back(std::abs(ds + 0.5 * dxx + 2.0 * x * centre));
    }
    const long ms = elapsed_ms(start);
    for (std::size_t k = 0; k + 1 < res.size(); ++k) {
      const double order = std::log(res[k] / res[k + 1]) / std::log(steps[k] / steps[k + 1]);
      auto r = make_report(std::string("pde.") + label + ".order.h=" + fmt(steps[k]), 2.0, order,
                           std::abs(order - 2.0), 0.3);
      r.note = "residuals=" + fmt(res[k]) + "," + fmt(res[k + 1]);
      r.runtime_ms = ms;
      out.push_back(r);
    }
  }
  // The tilt e^{-2sx-2s^3/3}: D_s F = -(2x + 2s^2) F and D_xx F = 4 s^2 F.
  const auto start = Clock::now();
  const double tilt = std::exp(-2.0 * s * x - 2.0 * s * s * s / 3.0);
  const double residual = -(2.0 * x + 2.0 * s * s) * tilt + 0.5 * 4.0 * s * s * tilt + 2.0 * x * tilt;
  auto r = make_report("pde.tilt", 0.0, residual, std::abs(residual), 1e-10);
  r.runtime_ms = elapsed_ms(start);
  out.push_back(r);
  return out;
}

std::vector<CheckReport> check_psi_phi(const std::vector<double>& ts, double tol, const process::Accuracy& acc) {
  std::vector<CheckReport> out;
  for (double t : ts) {
    if (t < 0.0 || t > 2.0) throw DomainError("check_psi_phi: t must lie in [0, 2]");
    const auto start = Clock::now();
    const auto p = process::psi(t, acc);
    const auto q = process::phi(-t, acc);
    auto r = make_report("psi_phi.t=" + fmt(t), 0.5 * q.value, p.value, std::abs(p.value - 0.5 * q.value), tol);
    r.note = "psi_err=" + fmt(p.err_estimate);
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  }
  return out;
}

std::vector<CheckReport> check_laplace_roundtrip(const std::vector<double>& lambdas, const std::vector<double>& xs,
                                                 double tol, const process::Accuracy& acc) {
  std::vector<CheckReport> out;
  auto one = [&](double lambda, double x, const std::string& name) {
    const auto start = Clock::now();
    const auto l = process::laplace_of_h(lambda, x, acc);
    const double target = lambda > 0.0
                              ? airy::u_lambda(lambda, x)
                              : airy::airy_ai(-std::cbrt(4.0) * x).real() / airy::ai_at_zero();
    auto r = make_report(name, target, l.value, std::abs(l.value - target), tol);
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  };
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw DomainError("check_laplace_roundtrip: lambda must be positive");
    for (double x : xs) {
      if (!(x < 0.0)) throw DomainError("check_laplace_roundtrip: x must be negative");
      one(lambda, x, "laplace.lambda=" + fmt(lambda) + ",x=" + fmt(x));
    }
  }
  // Total mass of h_x: Ai(-4^{1/3} x) / Ai(0).
  one(0.0, -1.0, "laplace.mass.x=-1");
  // Large lambda: killing dominates. At x = -1 the exact ratio is still
  // 4.07e-5, so the decay bound is taken at x = -2 (exact 1.36e-9).
  one(50.0, -1.0, "laplace.lambda=50,x=-1");
  const auto start = Clock::now();
  const auto big = process::laplace_of_h(50.0, -2.0, acc);
  auto r = make_report("laplace.decay.lambda=50,x=-2", 0.0, big.value, std::abs(big.value), 1e-6);
  r.runtime_ms = elapsed_ms(start);
  out.push_back(r);
  return out;
}

std::vector<CheckReport> check_appendix_c(const std::vector<double>& ss, double rel_tol, const process::Accuracy& acc) {
  std::vector<CheckReport> out;
  for (double s : ss) {
    if (s < -1.0 || s > 2.0) throw DomainError("check_appendix_c: s must lie in [-1, 2]");
    const auto start = Clock::now();
    const auto p = process::p_function(s, acc);
    const double target = std::exp(-2.0 * s * s * s / 3.0);
    auto r = make_report("appendix_c.p.s=" + fmt(s), target, p.value, std::abs(p.value - target), rel_tol * target);
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  }
  const auto start = Clock::now();
  const auto g = process::g_scaled({1.0, -8.0}, acc);
  const double target = std::exp(-2.0 / 3.0);
  auto r = make_report("appendix_c.rate.s=1,x=-8", target, g.value, std::abs(g.value - target), 1e-4);
  r.runtime_ms = elapsed_ms(start);
  out.push_back(r);
  return out;
}

std::vector<CheckReport> check_chernoff_density(double step, double sym_tol, double mass_tol,
                                                const process::Accuracy& acc, int threads) {
  return timed([&] {
    const int n = static_cast<int>(std::lround(3.0 / step));
    std::vector<double> grid;
    for (int k = -n; k <= n; ++k) grid.push_back(k * step);
    const auto table = process::tabulate(process::TableKind::argmax, grid, acc, {}, threads);
    if (!table.failed.empty()) throw NumericalError("check_chernoff_density: tabulation failed");
    double worst = 0.0, worst_t = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double d = std::abs(table.values[n + k] - table.values[n - k]);
      if (d > worst) {
        worst = d;
        worst_t = grid[n + k];
      }
    }
    auto sym = make_report("chernoff.symmetry", 0.0, worst, worst, sym_tol);
    sym.note = "worst_at=" + fmt(worst_t);
    const double mass = table.trapezoid_mass();
    auto m = make_report("chernoff.mass", 1.0, mass, std::abs(mass - 1.0), mass_tol);
    m.note = "interval=[-3,3] step=" + fmt(step);
    return std::vector<CheckReport>{sym, m};
  });
}

std::vector<CheckReport> check_moment_relation(const MomentOptions& opt) {
  return timed([&] {
    quad::QuadratureSpec spec;
    spec.abs_tol = 1e-11;
    spec.rel_tol = 1e-10;
    auto fz = [&](double t) { return process::chernoff_density(t, opt.accuracy).value; };
    const auto m2 = quad::require_ok(
        quad::integrate_interval([&](double t) { return Complex(2.0 * t * t * fz(t)); }, 0.0, opt.t_limit, spec),
        "moment tau^2");
    const auto m1 = quad::require_ok(
        quad::integrate_interval([&](double t) { return Complex(t * fz(t)); }, -opt.t_limit, opt.t_limit, spec),
        "moment tau");
    // The max density costs a full time integral per point, so the outer rule
    // is a fixed composite Gauss-Legendre over pieces matched to its shape.
    process::Accuracy inner = opt.accuracy;
    inner.abs_tol = std::max(inner.abs_tol, 1e-9);
    inner.rel_tol = std::max(inner.rel_tol, 1e-9);
    const auto& rule = quad::gauss_legendre(12);
    const double cuts[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, opt.a_limit};
    double em = 0.0;
    for (int p = 0; p + 1 < 8; ++p) {
      const double a = cuts[p], b = std::min(cuts[p + 1], opt.a_limit);
      if (!(b > a)) break;
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double level = mid + half * rule.nodes[k];
        em += half * rule.weights[k] * level * process::max_density_two_sided(level, inner).value;
      }
    }
    const double target = em / 3.0;
    auto rel = make_report("moment.relation", target, m2.value.real(), std::abs(m2.value.real() - target),
                           opt.rel_tol * std::abs(target));
    rel.note = "E_tau2=" + fmt(m2.value.real()) + " E_M=" + fmt(em);
    auto mean = make_report("moment.tau_mean", 0.0, m1.value.real(), std::abs(m1.value.real()), 1e-8);
    auto pos = make_report("moment.max_positive", 0.0, em, em > 0.0 ? 0.0 : 1.0, 0.5);
    pos.note = "passes iff E_M > 0";
    return std::vector<CheckReport>{rel, mean, pos};
  });
}

ChernoffCdf::ChernoffCdf(double step, const process::Accuracy& acc, int threads) : step_(step) {
  const int n = static_cast<int>(std::lround(4.0 / step));
  std::vector<double> fine;
  for (int k = -2 * n; k <= 2 * n; ++k) fine.push_back(0.5 * k * step);
  const auto table = process::tabulate(process::TableKind::argmax, fine, acc, {}, threads);
  if (!table.failed.empty()) throw NumericalError("ChernoffCdf: tabulation failed");
  double c = 0.0;
  for (int k = 0; k <= 2 * n; ++k) {
    const std::size_t j = 2 * static_cast<std::size_t>(k);
    if (k > 0) c += step / 6.0 * (table.values[j - 2] + 4.0 * table.values[j - 1] + table.values[j]);
    grid_.push_back(fine[j]);
    density_.push_back(table.values[j]);
    cdf_.push_back(c);
  }
}

double ChernoffCdf::operator()(double t) const {
  if (t <= grid_.front()) return 0.0;
  if (t >= grid_.back()) return cdf_.back();
  const auto k = std::min(grid_.size() - 2, static_cast<std::size_t>((t - grid_.front()) / step_));
  const double u = (t - grid_[k]) / step_;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  return h00 * cdf_[k] + h10 * step_ * density_[k] + h01 * cdf_[k + 1] + h11 * step_ * density_[k + 1];
}

namespace {

// Statistic exceeded with probability `p` under chi-square(dof).
double chi_square_quantile(int dof, double p) {
  double lo = 0.0, hi = dof + 40.0 * std::sqrt(2.0 * dof) + 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mcsim::gamma_q(0.5 * dof, 0.5 * mid) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<CheckReport> check_monte_carlo(const McOptions& opt, const ChernoffCdf* cdf) {
  std::vector<CheckReport> out;
  const auto& cfg = opt.config;
  {
    const auto start = Clock::now();
    std::optional<ChernoffCdf> own;
    if (!cdf) cdf = &own.emplace(0.01, process::Accuracy{}, cfg.threads);
    const auto paths = mcsim::simulate_two_sided(cfg);
    std::vector<double> argmax;
    argmax.reserve(paths.size());
    for (const auto& p : paths) argmax.push_back(p.argmax);
    const double d = mcsim::ks_distance(argmax, [cdf](double t) { return (*cdf)(t); });
    const double bound = 1.63 / std::sqrt(static_cast<double>(cfg.n_paths)) + opt.ks_allowance;
    auto r = make_report("mc.argmax_ks", 0.0, d, d, bound);
    r.note = "n=" + std::to_string(cfg.n_paths) + " dt=" + fmt(cfg.dt);
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  }
  {
    const auto start = Clock::now();
    const process::StartState st{0.0, -1.0};
    const auto mc = mcsim::estimate_hitting_prob(st, cfg);
    const auto q = process::hitting_prob(st);
    auto r = make_report("mc.hitting.s=0,x=-1", q.value, mc.p, std::abs(mc.p - q.value), 3.0 * mc.std_error);
    r.note = "std_error=" + fmt(mc.std_error) + " horizon_bound=" + fmt(mc.horizon_bound);
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  }
  {
    const auto start = Clock::now();
    mcsim::McConfig bm = cfg;
    bm.t_max = 5.0;
    const double z = 1.0, width = 0.1;
    const auto hist = mcsim::simulate_pure_bm_passage(z, bm, width);
    quad::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-12;
    std::vector<double> cells;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
      const auto res = quad::integrate_interval(
          [z](double u) { return Complex(process::bm_first_passage_density(z, u)); }, k * width, (k + 1) * width,
          spec);
      cells.push_back(quad::require_ok(res, "passage cell").value.real());
    }
    const auto chi = mcsim::chi_square(hist, cells);
    const double crit = chi_square_quantile(chi.dof, 1e-3);
    auto r = make_report("mc.bm_passage_chi2", static_cast<double>(chi.dof), chi.statistic,
                         std::max(0.0, chi.statistic - chi.dof), crit - chi.dof);
    r.note = "dof=" + std::to_string(chi.dof) + " p=" + fmt(chi.p_value) + " (passes iff p > 0.001)";
    r.runtime_ms = elapsed_ms(start);
    out.push_back(r);
  }
  return out;
}

Profile default_profile() {
  Profile p;
  p.suites = {"all"};
  p.mc.config.n_paths = 100000;
  return p;
}

Profile strict_profile() {
  Profile p = default_profile();
  p.tol_scale = 0.01;
  return p;
}

std::vector<CheckReport> run_all(const Profile& profile) {
  if (profile.suites.empty()) throw DomainError("no checks selected");
  if (!(profile.tol_scale > 0.0)) throw DomainError("run_all: tol_scale must be positive");
  bool airy = false, identities = false, pde = false, mc = false;
  for (const auto& s : profile.suites) {
    if (s == "all") {
      airy = identities = pde = mc = true;
    } else if (s == "airy") {
      airy = true;
    } else if (s == "identities") {
      identities = true;
    } else if (s == "pde") {
      pde = true;
    } else if (s == "mc") {
      mc = true;
    } else {
      throw DomainError("unknown suite: " + s);
    }
  }
  const auto& acc = profile.accuracy;
  std::vector<CheckReport> out;
  auto add = [&out](std::vector<CheckReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (airy) {
    add(check_airy_wronskian());
    add(check_airy_connection());
    add(check_airy_ode_order());
    add(check_airy_square_derivative());
    add(check_regime_continuity());
  }
  if (identities) {
    out.push_back(check_appendix_d());
    add(check_master_relation(default_master_grid(), 1e-6, acc));
    add(check_psi_phi({0.0, 0.5, 1.0}, 1e-5, acc));
    add(check_laplace_roundtrip({0.5, 1.0, 2.0}, {-0.5, -1.0}, 1e-8, acc));
    add(check_appendix_c({-1.0, 0.0, 1.0, 2.0}, 1e-6, acc));
    add(check_chernoff_density(0.01, 1e-12, 1e-5, acc, profile.threads));
    MomentOptions mo;
    mo.accuracy = acc;
    add(check_moment_relation(mo));
  }
  if (pde) {
    process::Accuracy tight = acc;
    tight.abs_tol = 1e-14;
    tight.rel_tol = 1e-14;
    add(check_pde_residuals({0.3, -1.0}, {0.02, 0.01, 0.005}, tight));
  }
  if (mc) {
    McOptions mo = profile.mc;
    mo.config.threads = profile.threads;
    add(check_monte_carlo(mo));
  }
  for (auto& r : out) {
    r.tol *= profile.tol_scale;
    r.passed = r.abs_err <= r.tol;
  }
  return out;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

namespace {

nlohmann::json number(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

std::string to_jsonl(const std::vector<CheckReport>& reports, bool with_runtime) {
  std::string out;
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["target"] = number(r.target);
    j["computed"] = number(r.computed);
    j["abs_err"] = r.abs_err;
    j["tol"] = r.tol;
    j["passed"] = r.passed;
    if (with_runtime) j["runtime_ms"] = r.runtime_ms;
    if (!r.note.empty()) j["note"] = r.note;
    out += j.dump() + "\n";
  }
  return out;
}

std::string summary(const std::vector<CheckReport>& reports, bool with_runtime) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : reports) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << "  err=" << fmt(r.abs_err) << " tol=" << fmt(r.tol);
    if (with_runtime) os << " (" << r.runtime_ms << " ms)";
    if (!r.note.empty()) os << "  " << r.note;
    os << "\n";
    if (!r.passed) ++failed;
  }
  os << reports.size() - failed << "/" << reports.size() << " checks passed\n";
  if (failed) {
    os << "failed:";
    for (const auto& r : reports)
      if (!r.passed) os << " " << r.name;
    os << "\n";
  }
  return os.str();
}

}  // namespace chernoff::verify
