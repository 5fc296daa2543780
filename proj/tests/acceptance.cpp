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

// Acceptance run: one PASS/FAIL line per criterion, each with its own
// wall-clock limit. Criterion numbers on the command line select a subset.
// CHERNOFF_THREADS sets the worker count of the parallel stages.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "chernoff/verify.hpp"

namespace v = chernoff::verify;

namespace {

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<std::vector<v::CheckReport>(int threads)> run;
};

std::vector<v::CheckReport> concat(std::vector<v::CheckReport> a, const std::vector<v::CheckReport>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "(1/2pi) int du / Ai(iu)^2 = 1", 1.0, [](int) { return std::vector{v::check_appendix_d()}; }},
      {2, "Airy Wronskian and connection, 1000 points", 5.0,
       [](int) { return concat(v::check_airy_wronskian(1000, 1e-11), v::check_airy_connection(1000, 1e-12)); }},
      {3, "Laplace round trip, 6 (lambda, x) pairs", 30.0,
       [](int) {
         auto all = v::check_laplace_roundtrip({0.5, 1.0, 2.0}, {-0.5, -1.0}, 1e-8);
         all.resize(6);  // the grid pairs come first; the extras belong to the verify suite
         return all;
       }},
      {4, "master relation f + g on the 5x5 grid", 120.0,
       [](int) { return v::check_master_relation(v::default_master_grid(), 1e-6); }},
      {5, "PDE residual order of f and g at (0.3, -1)", 60.0, [](int) { return v::check_pde_residuals(); }},
      {6, "p(s) and the x = -8 rate", 60.0, [](int) { return v::check_appendix_c({-1.0, 0.0, 1.0, 2.0}, 1e-6); }},
      {7, "psi(t) = phi(-t)/2", 120.0, [](int) { return v::check_psi_phi({0.0, 0.5, 1.0}, 1e-5); }},
      {8, "f_Z symmetry and mass", 60.0,
       [](int threads) { return v::check_chernoff_density(0.01, 1e-12, 1e-5, {}, threads); }},
      {9, "moment relation E tau^2 = E M / 3", 120.0, [](int) { return v::check_moment_relation(); }},
      {10, "Monte Carlo concordance, 1e6 paths", 600.0,
       [](int threads) {
         v::McOptions opt;
         opt.config.n_paths = 1000000;
         opt.config.dt = 5e-4;
         opt.config.seed = 1;
         opt.config.threads = threads;
         const v::ChernoffCdf cdf(0.01, {}, threads);
         return v::check_monte_carlo(opt, &cdf);
       }},
  };
  return list;
}

int env_threads() {
  const char* s = std::getenv("CHERNOFF_THREADS");
  if (!s) return 1;
  const int n = std::atoi(s);
  return n >= 1 ? n : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const int threads = env_threads();

  int failed = 0, run = 0;
  for (const auto& c : criteria()) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++run;
    const auto start = std::chrono::steady_clock::now();
    std::vector<v::CheckReport> reports;
    std::string error;
    try {
      reports = c.run(threads);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = error.empty() && !reports.empty() && v::all_passed(reports) && in_time;
    std::printf("%s %2d  %s  (%zu checks, %.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.title,
                reports.size(), secs, c.limit_s);
    if (!error.empty()) std::printf("        error: %s\n", error.c_str());
    if (!in_time) std::printf("        over the time limit\n");
    for (const auto& r : reports)
      if (!r.passed)
        std::printf("        %s: err=%.3g tol=%.3g %s\n", r.name.c_str(), r.abs_err, r.tol, r.note.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d/%d criteria passed\n", run - failed, run);
  return failed == 0 ? 0 : 1;
}
