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

#include <cmath>

#include "chernoff/airy.hpp"
#include "chernoff/quadrature.hpp"
#include "doctest.h"

using chernoff::Complex;
using chernoff::kPi;
namespace quad = chernoff::quad;

namespace {

quad::QuadratureSpec tol(double t) {
  quad::QuadratureSpec s;
  s.abs_tol = t;
  s.rel_tol = t;
  return s;
}

Complex gauss(double u) { return std::exp(-u * u); }
double gauss_tail(double u) { return std::exp(-u * u); }
Complex inv_ai_sq(double u) {
  const Complex a = chernoff::airy::airy_ai(Complex(0.0, u));
  return 1.0 / (2.0 * kPi * a * a);
}
const quad::TailBound inv_ai_sq_tail = quad::airy_ratio_tail_bound(0.0, 1.0 / (2.0 * kPi));

}  // namespace

TEST_CASE("real line references") {
  const auto g = quad::integrate_real_line(gauss, gauss_tail, tol(1e-13));
  CHECK(g.ok());
  CHECK(std::abs(g.value - std::sqrt(kPi)) < 1e-12);
  const auto d = quad::integrate_real_line(inv_ai_sq, inv_ai_sq_tail, tol(1e-12));
  CHECK(std::abs(d.value - 1.0) < 1e-11);
  CHECK(d.truncation_used > 5.0);
  const auto o = quad::integrate_real_line([](double u) { return u * gauss(u); }, gauss_tail, tol(1e-10));
  CHECK(std::abs(o.value) < 1e-10);
}

TEST_CASE("half line references") {
  const auto e = quad::integrate_semi_infinite([](double t) { return Complex(std::exp(-t)); },
                                               [](double u) { return std::exp(-u); }, tol(1e-13));
  CHECK(std::abs(e.value - 1.0) < 1e-12);
  const auto c = quad::integrate_semi_infinite([](double t) { return Complex(std::exp(-t * t * t / 3.0)); },
                                               [](double u) { return std::exp(-u * u * u / 3.0); }, tol(1e-13));
  CHECK(std::abs(c.value - std::pow(3.0, -2.0 / 3.0) * std::tgamma(1.0 / 3.0)) < 1e-12);
  // int_U^inf Ai <= Ai(U) / sqrt(U) <= e^{-(2/3)U^{3/2}} for U >= 1
  const auto a = quad::integrate_semi_infinite([](double y) { return chernoff::airy::airy_ai(y); },
                                               [](double u) { return std::exp(-2.0 / 3.0 * u * std::sqrt(u)); },
                                               tol(1e-13));
  CHECK(std::abs(a.value - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("error estimates are honest across a tolerance sweep") {
  for (double t : {1e-6, 1e-8, 1e-10}) {
    CAPTURE(t);
    const auto g = quad::integrate_real_line(gauss, gauss_tail, tol(t));
    CHECK(std::abs(g.value - std::sqrt(kPi)) <= g.err_estimate);
    CHECK(g.err_estimate <= t * std::sqrt(kPi) + t);
    const auto d = quad::integrate_real_line(inv_ai_sq, inv_ai_sq_tail, tol(t));
    CHECK(std::abs(d.value - 1.0) <= d.err_estimate);
    CHECK(d.err_estimate <= 2.0 * t);
  }
}

TEST_CASE("halving the tolerance does not move away from the reference") {
  double prev_g = INFINITY, prev_o = INFINITY, prev_est = INFINITY;
  for (double t = 1e-6; t > 1e-12; t *= 0.5) {
    CAPTURE(t);
    const double eg = std::abs(quad::integrate_real_line(gauss, gauss_tail, tol(t)).value - std::sqrt(kPi));
    const double eo =
        std::abs(quad::integrate_real_line([](double u) { return u * gauss(u); }, gauss_tail, tol(t)).value);
    // differences at the rounding floor are not meaningful
    CHECK((eg <= prev_g || eg < 1e-14));
    CHECK((eo <= prev_o || eo < 1e-14));
    prev_g = eg;
    prev_o = eo;
    // The 1/Ai(iu)^2 error is dominated by a truncated tail whose sign
    // oscillates with U, so only the bound is monotone.
    const auto d = quad::integrate_real_line(inv_ai_sq, inv_ai_sq_tail, tol(t));
    CHECK(std::abs(d.value - 1.0) <= d.err_estimate);
    CHECK(d.err_estimate <= prev_est);
    prev_est = d.err_estimate;
  }
}

TEST_CASE("determinism and oscillation cap") {
  const auto a = quad::integrate_real_line(inv_ai_sq, inv_ai_sq_tail, tol(1e-12));
  const auto b = quad::integrate_real_line(inv_ai_sq, inv_ai_sq_tail, tol(1e-12));
  CHECK(a.value == b.value);
  CHECK(a.err_estimate == b.err_estimate);
  CHECK(a.evaluations == b.evaluations);

  auto spec = tol(1e-12);
  spec.frequency = 50.0;
  const auto c = quad::integrate_interval([](double x) { return Complex(std::cos(50.0 * x)); }, 0.0, 10.0, spec);
  CHECK(std::abs(c.value.real() - std::sin(500.0) / 50.0) < 1e-12);
}

TEST_CASE("budget exhaustion reports an honest estimate") {
  auto spec = tol(1e-14);
  spec.max_subdivisions = 8;
  const auto r = quad::integrate_interval([](double x) { return Complex(std::sqrt(x)); }, 0.0, 1.0, spec);
  CHECK_FALSE(r.ok());
  CHECK(r.status == quad::Status::budget_exceeded);
  CHECK(std::abs(r.value.real() - 2.0 / 3.0) <= r.err_estimate);
  CHECK_THROWS_AS(quad::require_ok(r, "sqrt"), chernoff::NumericalError);
}

TEST_CASE("spec validation") {
  auto s = tol(1e-15);
  CHECK_THROWS_AS(s.validate(), chernoff::DomainError);
  s = tol(1e-10);
  s.max_subdivisions = (1 << 20) + 1;
  CHECK_THROWS_AS(s.validate(), chernoff::DomainError);
  s.max_subdivisions = 0;
  CHECK_THROWS_AS(s.validate(), chernoff::DomainError);
  s.max_subdivisions = 100;
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("tail bounds") {
  const auto b0 = quad::airy_ratio_tail_bound(0.0);
  const auto b1 = quad::airy_ratio_tail_bound(2.0);
  double prev0 = INFINITY, prev1 = INFINITY;
  for (double u = 4.0; u <= 40.0; u += 0.5) {
    CHECK(b0(u) < prev0);
    CHECK(b1(u) < prev1);
    prev0 = b0(u);
    prev1 = b1(u);
  }
  // shift = 0: proportional to U^{1/2} e^{-(2 sqrt2/3) U^{3/2}} up to the constant
  const double c = 2.0 * std::sqrt(2.0) / 3.0;
  const double r10 = b0(10.0) / std::exp(-c * std::pow(10.0, 1.5));
  const double r20 = b0(20.0) / std::exp(-c * std::pow(20.0, 1.5));
  CHECK(r10 == doctest::Approx(r20).epsilon(1e-12));
  for (double u : {10.0, 20.0, 30.0}) {
    for (double sgn : {-1.0, 1.0}) {
      const Complex a = chernoff::airy::airy_ai(Complex(0.0, sgn * u));
      CHECK(std::abs(1.0 / (a * a)) <= quad::airy_ratio_envelope(0.0, sgn * u));
      const Complex num = quad::integrate_fixed(
          [&](double y) { return chernoff::airy::airy_ai(Complex(y, sgn * u)); }, 0.0, 2.0);
      CHECK(std::abs(num / (a * a)) <= quad::airy_ratio_envelope(2.0, sgn * u));
    }
  }
  CHECK(quad::solve_truncation([](double u) { return std::exp(-u); }, 1e-10, 5.0, 200.0) ==
        doctest::Approx(10.0 * std::log(10.0)).epsilon(1e-6));
}

TEST_CASE("gauss-legendre rules") {
  const auto& r = quad::gauss_legendre(20);
  double sw = 0.0, m38 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    sw += r.weights[i];
    m38 += r.weights[i] * std::pow(r.nodes[i], 38);
  }
  CHECK(sw == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m38 == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
  CHECK(&quad::gauss_legendre(20) == &r);
  const Complex v = quad::integrate_fixed([](double x) { return Complex(std::exp(x)); }, 0.0, 3.5);
  CHECK(v.real() == doctest::Approx(std::exp(3.5) - 1.0).epsilon(1e-14));
}
