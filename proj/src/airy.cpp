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

#include "chernoff/airy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "chernoff/gamma.hpp"

namespace chernoff::airy {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kTwoPiOver3 = 2.0 * kPi / 3.0;
constexpr double kMaxExponent = 700.0;
constexpr double kTaylorStep = 0.6;
constexpr int kMaxAsymptoticTerms = 40;

const Complex kOmega = std::polar(1.0, kTwoPiOver3);         // e^{2 pi i / 3}
const Complex kOmegaBar = std::polar(1.0, -kTwoPiOver3);     // e^{-2 pi i / 3}
const Complex kBiWeightPlus = std::polar(1.0, kPi / 6.0);    // e^{i pi / 6}
const Complex kBiWeightMinus = std::polar(1.0, -kPi / 6.0);  // e^{-i pi / 6}

struct ZeroConstants {
  double ai0;    // Ai(0)
  double maip0;  // -Ai'(0)
};

const ZeroConstants& zero_constants() {
  static const ZeroConstants c{std::pow(3.0, -2.0 / 3.0) / special::gamma(2.0 / 3.0),
                               std::pow(3.0, -1.0 / 3.0) / special::gamma(1.0 / 3.0)};
  return c;
}

// Coefficients u_k, v_k of the Poincare expansions of Ai and Ai'.
struct AsymptoticCoefficients {
  std::array<double, kMaxAsymptoticTerms + 1> u{};
  std::array<double, kMaxAsymptoticTerms + 1> v{};
  AsymptoticCoefficients() {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k <= kMaxAsymptoticTerms; ++k) {
      const double kk = k;
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216.0 * kk);
      v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
    }
  }
};

const AsymptoticCoefficients& asymptotic_coefficients() {
  static const AsymptoticCoefficients c;
  return c;
}

// Maclaurin series in terms of the two canonical solutions f, g.
AiryBundle maclaurin(Complex z) {
  const Complex z3 = z * z * z;
  Complex f = 1.0, g = z, fp = 0.0, gp = 1.0;
  Complex tf = 1.0, tg = z, tfp = z * z / 2.0, tgp = 1.0;
  double abs_sum = 1.0 + std::abs(z);
  fp += tfp;
  abs_sum += std::abs(tfp);
  double last = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double k3 = 3.0 * k;
    tf *= z3 / ((k3 - 1.0) * k3);
    tg *= z3 / (k3 * (k3 + 1.0));
    tgp *= z3 / ((k3 - 2.0) * k3);
    if (k >= 2) tfp *= z3 / ((k3 - 1.0) * (k3 - 3.0));
    f += tf;
    g += tg;
    gp += tgp;
    if (k >= 2) fp += tfp;
    last = std::abs(tf) + std::abs(tg) + std::abs(tgp) + std::abs(tfp);
    abs_sum += last;
    const double scale = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
    if (last < 1e-18 * scale && k > 2) break;
  }
  const auto& c = zero_constants();
  AiryBundle b;
  const double sqrt3 = std::sqrt(3.0);
  b.ai = c.ai0 * f - c.maip0 * g;
  b.aip = c.ai0 * fp - c.maip0 * gp;
  b.bi = sqrt3 * (c.ai0 * f + c.maip0 * g);
  b.bip = sqrt3 * (c.ai0 * fp + c.maip0 * gp);
  // first omitted term is below `last`; rounding grows with the sum of |terms|
  b.abs_err_estimate = 2.0 * (last + 4.0 * kEps * abs_sum);
  return b;
}

struct AsymptoticLog {
  Complex log_ai;   // log Ai(z)
  Complex aip_over_ai;
  double rel_err;
};

// Poincare expansion, valid for |ph z| <= 2pi/3 and |z| large.
struct AsymptoticSeries {
  Complex zeta;
  Complex s;  // sum (-1)^k u_k zeta^{-k}
  Complex t;  // sum (-1)^k v_k zeta^{-k}
  double last = 0.0;
};

AsymptoticSeries asymptotic_series(Complex z) {
  const auto& c = asymptotic_coefficients();
  AsymptoticSeries out;
  out.zeta = (2.0 / 3.0) * z * std::sqrt(z);
  const Complex inv = 1.0 / out.zeta;
  Complex s = 1.0, t = 1.0, p = 1.0;
  double prev = 1.0, last = 0.0;
  for (int k = 1; k <= kMaxAsymptoticTerms; ++k) {
    p *= -inv;
    const double mag = c.u[k] * std::abs(p);
    if (mag > prev) break;  // series started to diverge
    s += c.u[k] * p;
    t += c.v[k] * p;
    last = std::max(mag, std::abs(c.v[k] * p));
    prev = mag;
    if (last < 1e-17) break;
  }
  out.s = s;
  out.t = t;
  out.last = last;
  return out;
}

AsymptoticLog asymptotic_log(Complex z) {
  const AsymptoticSeries a = asymptotic_series(z);
  AsymptoticLog out;
  out.log_ai = -a.zeta - std::log(2.0 * std::sqrt(kPi)) - 0.25 * std::log(z) + std::log(a.s);
  // Ai'/Ai = -z^{1/2} T / S
  out.aip_over_ai = -std::sqrt(z) * a.t / a.s;
  out.rel_err = a.last + 8.0 * kEps;
  return out;
}

Complex log1p_small(Complex e) {
  if (std::abs(e) > 0.25) return std::log(1.0 + e);
  Complex sum = 0.0, p = 1.0;
  for (int k = 1; k < 60; ++k) {
    p *= -e;
    const Complex term = -p / static_cast<double>(k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

Complex expm1_small(Complex z) {
  if (std::abs(z) > 0.25) return std::exp(z) - 1.0;
  Complex sum = 0.0, term = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= z / static_cast<double>(k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

AiPair from_log(const AsymptoticLog& a) {
  if (std::abs(a.log_ai.real()) > kMaxExponent) {
    throw NumericalError("airy: exp(-zeta) outside the binary64 range; use log_ai");
  }
  AiPair r;
  r.ai = std::exp(a.log_ai);
  r.aip = r.ai * a.aip_over_ai;
  r.abs_err_estimate = a.rel_err * (std::abs(r.ai) + std::abs(r.aip));
  return r;
}

bool in_direct_sector(Complex z) { return std::abs(std::arg(z)) <= kTwoPiOver3; }

AiPair asymptotic_pair(Complex z) {
  if (in_direct_sector(z)) return from_log(asymptotic_log(z));
  // Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z), w = e^{2 pi i/3}
  const AiPair p1 = from_log(asymptotic_log(kOmega * z));
  const AiPair p2 = from_log(asymptotic_log(kOmegaBar * z));
  AiPair r;
  r.ai = -kOmega * p1.ai - kOmegaBar * p2.ai;
  r.aip = -kOmegaBar * p1.aip - kOmega * p2.aip;
  r.abs_err_estimate = p1.abs_err_estimate + p2.abs_err_estimate + 4.0 * kEps * (std::abs(p1.ai) + std::abs(p2.ai));
  return r;
}

// One Taylor step of w'' = z w from z0 to z0 + h.
void taylor_step(Complex z0, Complex h, Complex& w, Complex& wp) {
  const Complex zh2 = z0 * h * h;
  const Complex h3 = h * h * h;
  Complex b_nm1 = w;       // b_0
  Complex b_n = wp * h;    // b_1
  Complex sum = b_nm1 + b_n;
  Complex dsum = b_n;      // sum n b_n
  Complex b_np1 = zh2 * b_nm1 / 2.0;  // b_2
  sum += b_np1;
  dsum += 2.0 * b_np1;
  Complex bm2 = b_nm1, bm1 = b_n, b = b_np1;
  for (int n = 3; n < 80; ++n) {
    // b_n = (z0 h^2 b_{n-2} + h^3 b_{n-3}) / (n (n-1))
    const Complex next = (zh2 * bm1 + h3 * bm2) / (static_cast<double>(n) * (n - 1));
    sum += next;
    dsum += static_cast<double>(n) * next;
    bm2 = bm1;
    bm1 = b;
    b = next;
    if (n > 6 && std::abs(b) + std::abs(bm1) < 1e-18 * (std::abs(sum) + std::abs(dsum))) break;
  }
  w = sum;
  wp = dsum / h;
}

AiPair taylor_continuation(Complex z) {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  const Complex dir = std::polar(1.0, theta);
  double r0;
  Complex w, wp;
  double rel_err;
  if (std::abs(theta) <= kPi / 3.0) {
    // Ai decays outward in this sector: integrate inward from the asymptotic circle.
    r0 = kAsymptoticRadius;
    const AsymptoticLog a = asymptotic_log(r0 * dir);
    w = std::exp(a.log_ai);
    wp = w * a.aip_over_ai;
    rel_err = a.rel_err;
  } else {
    // Ai grows outward: integrate outward from the series disc.
    r0 = kSeriesRadius;
    const AiryBundle b = maclaurin(r0 * dir);
    w = b.ai;
    wp = b.aip;
    rel_err = b.abs_err_estimate / std::max(std::abs(b.ai), 1e-300);
  }
  const double dist = r - r0;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(dist) / kTaylorStep)));
  const Complex h = (dist / steps) * dir;
  Complex zc = r0 * dir;
  for (int i = 0; i < steps; ++i) {
    taylor_step(zc, h, w, wp);
    zc = (r0 + (i + 1) * (dist / steps)) * dir;
  }
  AiPair out;
  out.ai = w;
  out.aip = wp;
  out.abs_err_estimate = (rel_err + 16.0 * kEps * steps) * (std::abs(w) + std::abs(wp));
  return out;
}

}  // namespace

EvalRegime regime_of(Complex z) {
  const double r = std::abs(z);
  if (r <= kSeriesRadius) return {RegimeTag::maclaurin_series, kSeriesRadius};
  if (r < kAsymptoticRadius) return {RegimeTag::taylor_continuation, kAsymptoticRadius};
  if (in_direct_sector(z)) return {RegimeTag::asymptotic_expansion, kAsymptoticRadius};
  return {RegimeTag::rotated_connection, kAsymptoticRadius};
}

AiPair airy_ai_pair(Complex z) {
  if (!is_finite(z)) throw DomainError("airy: non-finite argument");
  switch (regime_of(z).tag) {
    case RegimeTag::maclaurin_series: {
      const AiryBundle b = maclaurin(z);
      return {b.ai, b.aip, b.abs_err_estimate};
    }
    case RegimeTag::taylor_continuation:
      return taylor_continuation(z);
    default:
      return asymptotic_pair(z);
  }
}

namespace {

// Widens a per-component error so it also bounds bilinear forms such as
// ai*bip - aip*bi, whose rounding scales with the products.
AiryBundle cover_bilinear(AiryBundle b) {
  const double d = b.abs_err_estimate;
  const double sum = std::abs(b.ai) + std::abs(b.aip) + std::abs(b.bi) + std::abs(b.bip);
  const double prod = std::abs(b.ai * b.bip) + std::abs(b.aip * b.bi);
  b.abs_err_estimate = std::max(d, d * sum + 4.0 * kEps * prod);
  return b;
}

}  // namespace

AiryBundle airy_all(Complex z) {
  if (!is_finite(z)) throw DomainError("airy: non-finite argument");
  if (regime_of(z).tag == RegimeTag::maclaurin_series) return cover_bilinear(maclaurin(z));
  const AiPair a = airy_ai_pair(z);
  const AiPair p = airy_ai_pair(kOmega * z);
  const AiPair m = airy_ai_pair(kOmegaBar * z);
  AiryBundle b;
  b.ai = a.ai;
  b.aip = a.aip;
  // Bi(z) = e^{i pi/6} Ai(w z) + e^{-i pi/6} Ai(w^2 z)
  b.bi = kBiWeightPlus * p.ai + kBiWeightMinus * m.ai;
  b.bip = kBiWeightPlus * kOmega * p.aip + kBiWeightMinus * kOmegaBar * m.aip;
  b.abs_err_estimate = a.abs_err_estimate + p.abs_err_estimate + m.abs_err_estimate +
                       4.0 * kEps * (std::abs(p.ai) + std::abs(m.ai) + std::abs(p.aip) + std::abs(m.aip));
  return cover_bilinear(b);
}

Complex log_ai(Complex z) {
  if (!is_finite(z)) throw DomainError("airy: non-finite argument");
  if (std::abs(z) < kAsymptoticRadius) return std::log(airy_ai_pair(z).ai);
  if (in_direct_sector(z)) return asymptotic_log(z).log_ai;
  Complex l1 = std::log(-kOmega) + asymptotic_log(kOmega * z).log_ai;
  Complex l2 = std::log(-kOmegaBar) + asymptotic_log(kOmegaBar * z).log_ai;
  if (l2.real() > l1.real()) std::swap(l1, l2);
  return l1 + std::log(1.0 + std::exp(l2 - l1));
}

LogModulusPhase airy_ai_log_scaled(Complex z) {
  const Complex l = log_ai(z);
  return {l.real(), l.imag()};
}

// Past |ph z| = 2pi/3 the recessive exponential is switched on but stays
// below e^{-45} of the dominant one while (4/3)|z|^{3/2}|cos(1.5 ph z)| > 45.
bool expansion_suffices(Complex z) {
  const double r = std::abs(z);
  if (r < kAsymptoticRadius) return false;
  if (in_direct_sector(z)) return true;
  return (4.0 / 3.0) * r * std::sqrt(r) * std::abs(std::cos(1.5 * std::arg(z))) > 45.0;
}

Complex log_ai_ratio(Complex z, Complex a) {
  const Complex w = z + a;
  const bool asymptotic = expansion_suffices(z) && expansion_suffices(w) && std::abs(a) <= 0.5 * std::abs(z) &&
                          std::abs(std::arg(w) - std::arg(z)) < 0.5 * kPi;
  if (!asymptotic) return log_ai(w) - log_ai(z);
  // zeta(z + a) - zeta(z) = zeta(z) expm1(1.5 log1p(a/z)), free of cancellation
  const Complex l = log1p_small(a / z);
  const AsymptoticSeries sz = asymptotic_series(z);
  const AsymptoticSeries sw = asymptotic_series(w);
  return -sz.zeta * expm1_small(1.5 * l) - 0.25 * l + std::log(sw.s / sz.s);
}

double u_lambda(double lambda, double x) {
  if (!(lambda > 0.0) || !(x <= 0.0)) throw DomainError("u_lambda: need lambda > 0 and x <= 0");
  const double xi = std::cbrt(0.5) * lambda;
  if (x == 0.0) return 1.0;
  const double shifted = xi - std::cbrt(4.0) * x;
  return std::exp(log_ai_ratio({xi, 0.0}, {shifted - xi, 0.0}).real());
}

double ai_at_zero() { return zero_constants().ai0; }
double minus_aip_at_zero() { return zero_constants().maip0; }

}  // namespace chernoff::airy
