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

// chernoff: tabulate densities, run the verification suites, simulate, and
// compare quadrature against Monte Carlo.
//
// Exit codes: 0 ok, 1 check failure, 2 usage, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chernoff/airy.hpp"
#include "chernoff/mcsim.hpp"
#include "chernoff/process.hpp"
#include "chernoff/quadrature.hpp"
#include "chernoff/verify.hpp"

namespace {

using namespace chernoff;

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int default_threads() {
  if (const char* env = std::getenv("CHERNOFF_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<int>(n);
    std::cerr << "warning: ignoring invalid CHERNOFF_THREADS='" << env << "'\n";
  }
  return 1;
}

void add_accuracy_flags(CLI::App* cmd, process::Accuracy& acc) {
  cmd->add_option("--abs-tol", acc.abs_tol, "Absolute quadrature tolerance")->capture_default_str();
  cmd->add_option("--rel-tol", acc.rel_tol, "Relative quadrature tolerance")->capture_default_str();
  cmd->add_option("--time-margin", acc.time_margin, "Extra log-margin for time truncation")->capture_default_str();
  cmd->add_option("--psi-truncation", acc.psi_truncation, "Upper level limit of the psi integral")
      ->capture_default_str();
  cmd->add_option("--fd-step", acc.fd_step, "Finite-difference step for one-sided max densities")
      ->capture_default_str();
  cmd->add_option("--inner-nodes", acc.inner_nodes, "Gauss-Legendre nodes per unit of inner level integrals")
      ->capture_default_str();
  cmd->add_option("--max-subdivisions", acc.max_subdivisions, "Panel budget of each adaptive integral")
      ->capture_default_str();
}

void add_mc_flags(CLI::App* cmd, mcsim::McConfig& cfg, bool& no_bridge) {
  cmd->add_option("--paths", cfg.n_paths, "Number of simulated paths")->capture_default_str();
  cmd->add_option("--dt", cfg.dt, "Effective time step")->capture_default_str();
  cmd->add_option("--t-max", cfg.t_max, "Simulation horizon")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--no-bridge", no_bridge, "Disable the Brownian-bridge crossing correction");
}

std::vector<double> make_grid(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("--step must be positive");
  if (!std::isfinite(from) || !std::isfinite(to) || !(to >= from)) throw UsageError("--to must be >= --from");
  const double span = (to - from) / step;
  if (span > 1e7) throw UsageError("grid has too many points");
  const auto n = static_cast<long>(std::floor(span + 1e-9)) + 1;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) g.push_back(from + static_cast<double>(k) * step);
  return g;
}

// Writes `text` to `path`, or stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot open " + path);
  os << text;
  os.close();
  if (!os) {
    std::remove(path.c_str());
    throw NumericalError("write failed: " + path);
  }
}

// ---- tabulate --------------------------------------------------------------

struct TabulateArgs {
  std::string which = "chernoff";
  double from = 0.0, to = 0.0, step = 0.0;
  double x = -1.0, s = 0.0, a = 0.5;
  std::string out;
  process::Accuracy acc;
};

int run_tabulate(const TabulateArgs& args, int threads) {
  args.acc.validate();
  const auto grid = make_grid(args.from, args.to, args.step);
  std::vector<double> values(grid.size());
  std::string header = "t,f";
  auto check_failed = [](const process::DensityTable& t) {
    if (!t.failed.empty())
      throw NumericalError("quadrature failed at " + std::to_string(t.failed.size()) + " grid point(s), first at " +
                           num(t.grid[t.failed.front()]));
  };
  if (args.which == "chernoff" || args.which == "max2" || args.which == "joint2" || args.which == "firstpassage") {
    process::TableKind kind = process::TableKind::argmax;
    process::StartState st;
    if (args.which == "max2") {
      kind = process::TableKind::max;
      header = "a,f";
    } else if (args.which == "joint2") {
      if (!(args.a > 0.0)) throw UsageError("--a must be positive for --which joint2");
      kind = process::TableKind::joint;
      st.x = args.a;
      header = "t,a,f";
    } else if (args.which == "firstpassage") {
      kind = process::TableKind::first_passage;
      st = {args.s, args.x};
    }
    const auto table = process::tabulate(kind, grid, args.acc, st, threads);
    check_failed(table);
    values = table.values;
  } else if (args.which == "phi") {
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = process::phi(grid[i], args.acc).value;
  } else if (args.which == "h") {
    if (!(args.x < 0.0)) throw UsageError("--x must be negative for --which h");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) throw UsageError("--which h needs a grid in t > 0");
      values[i] = process::h_density(args.x, grid[i], args.acc).value;
    }
  } else {
    throw UsageError("unknown --which " + args.which);
  }
  std::string text = header + "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    text += num(grid[i]);
    if (args.which == "joint2") text += "," + num(args.a);
    text += "," + num(values[i]) + "\n";
  }
  emit(args.out, text);
  double mass = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) mass += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
  std::cerr << "rows=" << grid.size() << " trapezoid_mass=" << num(mass);
  if (args.which == "h") {
    std::cerr << " total_mass=" << num(airy::airy_ai(-std::cbrt(4.0) * args.x).real() / airy::ai_at_zero());
  }
  std::cerr << "\n";
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> suites{"all"};
  bool strict = false;
  long paths = 100000;
  std::uint64_t seed = 1;
  double dt = 5e-4;
  std::string report;
  process::Accuracy acc;
};

int run_verify(const VerifyArgs& args, int threads) {
  args.acc.validate();
  verify::Profile p = args.strict ? verify::strict_profile() : verify::default_profile();
  p.suites = args.suites;
  p.accuracy = args.acc;
  p.threads = threads;
  p.mc.config.n_paths = args.paths;
  p.mc.config.seed = args.seed;
  p.mc.config.dt = args.dt;
  p.mc.config.validate();
  const auto reports = verify::run_all(p);
  std::cout << verify::summary(reports);
  long total_ms = 0;
  for (const auto& r : reports) {
    std::cerr << r.name << ": " << r.runtime_ms << " ms\n";
    total_ms += r.runtime_ms;
  }
  std::cerr << "total: " << total_ms << " ms\n";
  if (!args.report.empty()) emit(args.report, verify::to_jsonl(reports));
  return verify::all_passed(reports) ? kExitOk : kExitCheck;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string mode = "two-sided";
  std::string field = "argmax";
  double s = 0.0, x = -1.0, z = 1.0, bin_width = 0.1;
  std::string out;
  mcsim::McConfig cfg;
  bool no_bridge = false;
};

int run_simulate(SimulateArgs args, int threads) {
  args.cfg.threads = threads;
  args.cfg.bridge_correction = !args.no_bridge;
  args.cfg.validate();
  std::string text;
  auto field_of = [&](const mcsim::PathFunctionals& p) -> std::optional<double> {
    if (args.field == "argmax") return p.argmax;
    if (args.field == "max") return p.max;
    if (args.field == "hit_time") return p.hit_time;
    throw UsageError("unknown --field " + args.field);
  };
  if (args.mode == "two-sided" || args.mode == "one-sided") {
    const auto paths = args.mode == "two-sided" ? mcsim::simulate_two_sided(args.cfg)
                                                : mcsim::simulate_one_sided({args.s, args.x}, args.cfg);
    text = "value\n";
    for (const auto& p : paths) {
      const auto v = field_of(p);
      text += v ? num(*v) : std::string("inf");
      text += "\n";
    }
  } else if (args.mode == "hitting") {
    const auto r = mcsim::estimate_hitting_prob({args.s, args.x}, args.cfg);
    text = "p,std_error,hits,n,horizon_bound\n" + num(r.p) + "," + num(r.std_error) + "," + std::to_string(r.hits) +
           "," + std::to_string(r.n) + "," + num(r.horizon_bound) + "\n";
  } else if (args.mode == "bm-passage") {
    const auto h = mcsim::simulate_pure_bm_passage(args.z, args.cfg, args.bin_width);
    text = "value,count\n";
    for (std::size_t k = 0; k < h.counts.size(); ++k)
      text += num(h.lo + static_cast<double>(k) * h.width) + "," + std::to_string(h.counts[k]) + "\n";
    text += "inf," + std::to_string(h.overflow) + "\n";
  } else {
    throw UsageError("unknown --mode " + args.mode);
  }
  emit(args.out, text);
  return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
  std::string target = "argmax";
  double s = 0.0, x = -1.0;
  std::vector<double> levels{0.2, 0.5, 1.0};
  double bin_width = 0.05;
  double ks_allowance = 0.003;
  mcsim::McConfig cfg;
  bool no_bridge = false;
  process::Accuracy acc;
};

int run_compare(CompareArgs args, int threads) {
  args.cfg.threads = threads;
  args.cfg.bridge_correction = !args.no_bridge;
  args.cfg.validate();
  args.acc.validate();
  const double n = static_cast<double>(args.cfg.n_paths);
  bool ok = true;
  if (args.target == "argmax") {
    const verify::ChernoffCdf cdf(0.01, args.acc, threads);
    const auto paths = mcsim::simulate_two_sided(args.cfg);
    std::vector<double> tau, tau2, m;
    for (const auto& p : paths) {
      tau.push_back(p.argmax);
      tau2.push_back(p.argmax * p.argmax);
      m.push_back(p.max);
    }
    const double d = mcsim::ks_distance(tau, [&cdf](double t) { return cdf(t); });
    const double bound = 1.63 / std::sqrt(n) + args.ks_allowance;
    const auto mt = mcsim::sample_mean(tau), mt2 = mcsim::sample_mean(tau2), mm = mcsim::sample_mean(m);
    ok = d < bound;
    std::cout << "quantity,quadrature,monte_carlo,std_error\n";
    std::cout << "E_tau,0," << num(mt.mean) << "," << num(mt.std_error) << "\n";
    std::cout << "E_tau2-E_M/3,0," << num(mt2.mean - mm.mean / 3.0) << ","
              << num(std::hypot(mt2.std_error, mm.std_error / 3.0)) << "\n";
    std::cout << "ks," << num(bound) << "," << num(d) << ",\n";
  } else if (args.target == "hitting") {
    const process::StartState st{args.s, args.x};
    const auto q = process::hitting_prob(st, args.acc);
    const auto mc = mcsim::estimate_hitting_prob(st, args.cfg);
    ok = std::abs(q.value - mc.p) <= 3.0 * mc.std_error;
    std::cout << "quantity,quadrature,monte_carlo,std_error\n";
    std::cout << "hitting," << num(q.value) << "," << num(mc.p) << "," << num(mc.std_error) << "\n";
  } else if (args.target == "max") {
    const auto paths = mcsim::simulate_two_sided(args.cfg);
    const auto& rule = quad::gauss_legendre(5);
    std::cout << "a,quadrature,monte_carlo,std_error\n";
    for (double a : args.levels) {
      const double lo = a - 0.5 * args.bin_width, hi = a + 0.5 * args.bin_width;
      if (!(lo >= 0.0)) throw UsageError("--levels must exceed half the bin width");
      long hits = 0;
      for (const auto& p : paths) hits += (p.max >= lo && p.max < hi);
      const double prob = static_cast<double>(hits) / n;
      const double mc = prob / args.bin_width;
      const double se = std::sqrt(prob * (1.0 - prob) / n) / args.bin_width;
      // bin average of the density
      double q = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        q += 0.5 * rule.weights[k] * process::max_density_two_sided(a + 0.5 * args.bin_width * rule.nodes[k], args.acc).value;
      ok = ok && std::abs(q - mc) <= 3.0 * se;
      std::cout << num(a) << "," << num(q) << "," << num(mc) << "," << num(se) << "\n";
    }
  } else {
    throw UsageError("unknown --target " + args.target);
  }
  std::cout << (ok ? "agree" : "DISAGREE") << "\n";
  return ok ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian motion with parabolic drift: densities, checks and simulation"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: CHERNOFF_THREADS or 1)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  TabulateArgs tab;
  auto* tcmd = app.add_subcommand("tabulate", "Tabulate a density on a grid as CSV");
  tcmd->add_option("--which", tab.which, "Quantity")
      ->check(CLI::IsMember({"chernoff", "max2", "joint2", "firstpassage", "phi", "h"}))
      ->capture_default_str();
  tcmd->add_option("--from", tab.from, "First grid point")->required();
  tcmd->add_option("--to", tab.to, "Last grid point")->required();
  tcmd->add_option("--step", tab.step, "Grid spacing")->required();
  tcmd->add_option("--x", tab.x, "Level for h; start level for firstpassage")->capture_default_str();
  tcmd->add_option("--s", tab.s, "Start time for firstpassage")->capture_default_str();
  tcmd->add_option("--a", tab.a, "Level of the maximum for joint2")->capture_default_str();
  tcmd->add_option("--out", tab.out, "Output path (default stdout)");
  add_accuracy_flags(tcmd, tab.acc);

  VerifyArgs ver;
  auto* vcmd = app.add_subcommand("verify", "Run the verification suites");
  vcmd->add_option("--suite", ver.suites, "Suites to run (repeatable)")
      ->check(CLI::IsMember({"all", "airy", "identities", "pde", "mc"}))
      ->capture_default_str();
  vcmd->add_flag("--strict", ver.strict, "Divide every tolerance by 100");
  vcmd->add_option("--paths", ver.paths, "Paths for the Monte Carlo suite")->capture_default_str();
  vcmd->add_option("--seed", ver.seed, "Seed for the Monte Carlo suite")->capture_default_str();
  vcmd->add_option("--dt", ver.dt, "Time step for the Monte Carlo suite")->capture_default_str();
  vcmd->add_option("--report", ver.report, "Write a JSON-lines report to this path");
  add_accuracy_flags(vcmd, ver.acc);

  SimulateArgs sim;
  auto* scmd = app.add_subcommand("simulate", "Simulate paths and write samples or a histogram as CSV");
  scmd->add_option("--mode", sim.mode, "What to simulate")
      ->check(CLI::IsMember({"two-sided", "one-sided", "hitting", "bm-passage"}))
      ->capture_default_str();
  scmd->add_option("--field", sim.field, "Sample column for two-/one-sided runs")
      ->check(CLI::IsMember({"argmax", "max", "hit_time"}))
      ->capture_default_str();
  scmd->add_option("--s", sim.s, "Start time (one-sided, hitting)")->capture_default_str();
  scmd->add_option("--x", sim.x, "Start level (one-sided, hitting)")->capture_default_str();
  scmd->add_option("--z", sim.z, "Start level of the pure BM passage")->capture_default_str();
  scmd->add_option("--bin-width", sim.bin_width, "Histogram bin width")->capture_default_str();
  scmd->add_option("--out", sim.out, "Output path (default stdout)");
  add_mc_flags(scmd, sim.cfg, sim.no_bridge);

  CompareArgs cmp;
  auto* ccmd = app.add_subcommand("compare", "Quadrature against Monte Carlo");
  ccmd->add_option("--target", cmp.target, "Quantity")
      ->check(CLI::IsMember({"argmax", "max", "hitting"}))
      ->capture_default_str();
  ccmd->add_option("--s", cmp.s, "Start time (hitting)")->capture_default_str();
  ccmd->add_option("--x", cmp.x, "Start level (hitting)")->capture_default_str();
  ccmd->add_option("--levels", cmp.levels, "Levels a for the max density")->capture_default_str();
  ccmd->add_option("--bin-width", cmp.bin_width, "Bin width for the max density")->capture_default_str();
  ccmd->add_option("--ks-allowance", cmp.ks_allowance, "Discretisation allowance added to the KS bound")
      ->capture_default_str();
  add_mc_flags(ccmd, cmp.cfg, cmp.no_bridge);
  add_accuracy_flags(ccmd, cmp.acc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (tcmd->parsed()) return run_tabulate(tab, threads);
    if (vcmd->parsed()) return run_verify(ver, threads);
    if (scmd->parsed()) return run_simulate(sim, threads);
    if (ccmd->parsed()) return run_compare(cmp, threads);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
