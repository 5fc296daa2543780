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
#include <vector>

#include "chernoff/mcsim.hpp"
#include "chernoff/process.hpp"
#include "doctest.h"

namespace mc = chernoff::mcsim;
namespace pr = chernoff::process;

namespace {

mc::McConfig small(long n, int threads = 1) {
  mc::McConfig c;
  c.n_paths = n;
  c.dt = 1e-3;
  c.t_max = 4.0;
  c.seed = 17;
  c.threads = threads;
  return c;
}

bool same(const std::vector<mc::PathFunctionals>& a, const std::vector<mc::PathFunctionals>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].max != b[i].max || a[i].argmax != b[i].argmax || a[i].hit_time != b[i].hit_time) return false;
  return true;
}

}  // namespace

TEST_CASE("grid plan") {
  for (double dt : {1e-3, 5e-4, 3e-4}) {
    const auto p = mc::plan_grid(4.0, dt);
    CHECK(p.coarse_steps <= 64);
    CHECK(p.step <= dt);
    CHECK(p.coarse_steps * std::ldexp(1.0, p.levels) * p.step == doctest::Approx(4.0));
  }
}

TEST_CASE("results depend on the seed only, not on threads") {
  const auto a = mc::simulate_two_sided(small(3000, 1));
  const auto b = mc::simulate_two_sided(small(3000, 3));
  const auto c = mc::simulate_two_sided(small(3000, 1));
  CHECK(same(a, b));
  CHECK(same(a, c));
  auto other = small(3000);
  other.seed = 18;
  CHECK_FALSE(same(a, mc::simulate_two_sided(other)));
  const auto h1 = mc::simulate_pure_bm_passage(1.0, small(2000, 1));
  const auto h2 = mc::simulate_pure_bm_passage(1.0, small(2000, 2));
  CHECK(h1.counts == h2.counts);
  CHECK(h1.overflow == h2.overflow);
}

TEST_CASE("two-sided functionals") {
  const auto cfg = small(20000);
  const auto paths = mc::simulate_two_sided(cfg);
  std::vector<double> tau, tau2, m;
  for (const auto& p : paths) {
    CHECK(p.max >= 0.0);
    CHECK(std::abs(p.argmax) <= cfg.t_max);
    tau.push_back(p.argmax);
    tau2.push_back(p.argmax * p.argmax);
    m.push_back(p.max);
  }
  const auto mt = mc::sample_mean(tau);
  CHECK(std::abs(mt.mean) < 4.0 * mt.std_error);
  // E tau^2 = E M / 3
  const auto m2 = mc::sample_mean(tau2), mm = mc::sample_mean(m);
  CHECK(std::abs(m2.mean - mm.mean / 3.0) < 4.0 * std::hypot(m2.std_error, mm.std_error / 3.0));
}

TEST_CASE("one-sided functionals") {
  const pr::StartState st{0.5, -0.3};
  const auto cfg = small(5000);
  for (const auto& p : mc::simulate_one_sided(st, cfg)) {
    CHECK(p.argmax >= st.s);
    CHECK(p.argmax <= st.s + cfg.t_max);
    CHECK(p.max >= st.x);
    if (p.hit_time) CHECK(*p.hit_time > st.s);
  }
}

TEST_CASE("hitting probability") {
  auto cfg = small(40000);
  const auto near = mc::estimate_hitting_prob({0.0, -0.01}, cfg);
  const double q = pr::hitting_prob({0.0, -0.01}).value;
  CHECK(std::abs(near.p - q) <= 3.0 * near.std_error + 1e-12);
  const auto on = mc::estimate_hitting_prob({0.0, -1.0}, cfg);
  CHECK(std::abs(on.p - pr::hitting_prob({0.0, -1.0}).value) <= 3.0 * on.std_error);
  cfg.bridge_correction = false;
  const auto off = mc::estimate_hitting_prob({0.0, -1.0}, cfg);
  CHECK(off.p <= on.p);
  CHECK(on.horizon_bound < 1e-6);
  // sqrt(n) law
  auto big = small(80000);
  const auto twice = mc::estimate_hitting_prob({0.0, -1.0}, big);
  const double ratio = on.std_error / twice.std_error;
  CHECK(ratio > 1.3);
  CHECK(ratio < 1.7);
}

TEST_CASE("pure BM passage histogram") {
  auto cfg = small(20000);
  cfg.t_max = 5.0;
  const auto h = mc::simulate_pure_bm_passage(1.0, cfg);
  CHECK(h.counts.size() == 50);
  long total = h.overflow;
  for (long c : h.counts) total += c;
  CHECK(total == cfg.n_paths);
  // cell probabilities from the closed-form CDF erfc(z / sqrt(2u))
  std::vector<double> cells;
  for (int k = 0; k < 50; ++k)
    cells.push_back(std::erfc(1.0 / std::sqrt(2.0 * 0.1 * (k + 1))) - (k ? std::erfc(1.0 / std::sqrt(0.2 * k)) : 0.0));
  CHECK(mc::chi_square(h, cells).p_value > 0.001);
}

TEST_CASE("statistics helpers") {
  CHECK(mc::gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK(mc::gamma_q(0.5, 3.0) == doctest::Approx(std::erfc(std::sqrt(3.0))).epsilon(1e-12));
  CHECK(mc::gamma_q(25.0, 10.0) == doctest::Approx(0.999953050618573).epsilon(1e-10));
  std::vector<double> u;
  for (int i = 0; i < 1000; ++i) u.push_back((i + 0.5) / 1000.0);
  CHECK(mc::ks_distance(u, [](double t) { return t; }) == doctest::Approx(0.0005));
  mc::Histogram h;
  h.n = 100;
  h.counts = {25, 25, 50};
  const auto c = mc::chi_square(h, {0.25, 0.25, 0.5});
  CHECK(c.statistic == 0.0);
  CHECK(c.p_value == doctest::Approx(1.0));
  const auto s = mc::sample_mean({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  mc::McConfig bad;
  bad.n_paths = 0;
  CHECK_THROWS_AS(bad.validate(), chernoff::DomainError);
  bad = {};
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), chernoff::DomainError);
}
