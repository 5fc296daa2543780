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

#include "chernoff/mcsim.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "chernoff/kernels.hpp"

namespace chernoff::mcsim {

namespace {

constexpr int kMaxCoarse = 64;
constexpr long kChunk = 1024;

enum class Experiment : std::uint32_t { two_sided = 1, one_sided = 2, pure_bm = 3 };
enum class Purpose : std::uint32_t { coarse = 0, bridge = 1, uniform = 2 };

double unit_from(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double normal_from(const std::uint32_t* w) {
  const double u1 = unit_from(w[0], w[1]);
  const double u2 = unit_from(w[2], w[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Identity of one simulated side of one path.
struct Stream {
  std::array<std::uint32_t, 2> key;
  std::uint32_t path_lo;
  std::uint32_t path_hi;
  std::uint32_t tag;

  std::uint32_t hi_word(Purpose p) const { return (path_hi & 0xFFFFu) | ((tag | static_cast<std::uint32_t>(p)) << 16); }

  double draw_normal(std::uint64_t index) const {
    std::array<std::uint32_t, 4> w{};
    kernels::philox_block(index, path_lo, hi_word(Purpose::bridge), key, w);
    return normal_from(w.data());
  }
  double draw_uniform(std::uint64_t index) const {
    std::array<std::uint32_t, 4> w{};
    kernels::philox_block(index, path_lo, hi_word(Purpose::uniform), key, w);
    return unit_from(w[0], w[1]);
  }
};

Stream make_stream(std::uint64_t seed, long path, Experiment e, int side) {
  Stream s;
  s.key = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto p = static_cast<std::uint64_t>(path);
  s.path_lo = static_cast<std::uint32_t>(p);
  s.path_hi = static_cast<std::uint32_t>(p >> 32);
  // bits 0-1 purpose, bit 2 side, bits 3-5 experiment (shifted into the top half-word)
  s.tag = (static_cast<std::uint32_t>(side) << 2) | (static_cast<std::uint32_t>(e) << 3);
  return s;
}

// x0 + W(t) - c((s + t)^2 - s^2) on t in [0, horizon].
struct SideModel {
  double x0 = 0.0;
  double s = 0.0;
  double curvature = 1.0;
  GridPlan plan;
  bool bridge = true;
};

struct Node {
  std::int64_t k;
  double x;
};

class SideSimulator {
 public:
  SideSimulator(const SideModel& m, const Stream& st) : m_(m), st_(st) {
    stride_ = std::int64_t{1} << m.plan.levels;
    build_coarse();
  }

  double time_of(double k) const { return k * m_.plan.step; }

  // Continuous (bridge) or grid maximum and its location (relative time).
  std::pair<double, double> maximum() {
    double ref = coarse_.front().x;
    double best_t = 0.0;
    std::int64_t best_k = 0;
    for (const auto& n : coarse_) {
      if (n.x > ref) {
        ref = n.x;
        best_k = n.k;
      }
    }
    best_t = time_of(static_cast<double>(best_k));
    double grid_best = ref;
    double cont_best = -std::numeric_limits<double>::infinity();
    double cont_t = 0.0;

    std::vector<std::size_t> order(coarse_.size() - 1);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
      return std::max(coarse_[a].x, coarse_[a + 1].x) > std::max(coarse_[b].x, coarse_[b + 1].x);
    });
    std::vector<std::pair<Node, Node>> stack;
    for (std::size_t i : order) {
      stack.emplace_back(coarse_[i], coarse_[i + 1]);
      while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const double len = time_of(static_cast<double>(b.k - a.k));
        if (crossing_bound(a.x, b.x, ref, len) < kPruneProbability) continue;
        if (b.k - a.k == 1) {
          if (!m_.bridge) continue;
          const double u = st_.draw_uniform(static_cast<std::uint64_t>(a.k));
          const double d = b.x - a.x;
          const double top = 0.5 * (a.x + b.x + std::sqrt(d * d - 2.0 * len * std::log(u)));
          if (top > cont_best || (top == cont_best && a.k < static_cast<std::int64_t>(cont_t))) {
            cont_best = top;
            cont_t = static_cast<double>(a.k);
          }
          ref = std::max(ref, top);
          continue;
        }
        const Node mid = midpoint(a, b);
        if (mid.x > grid_best || (mid.x == grid_best && mid.k < best_k)) {
          grid_best = mid.x;
          best_k = mid.k;
          best_t = time_of(static_cast<double>(mid.k));
        }
        ref = std::max(ref, mid.x);
        stack.emplace_back(mid, b);
        stack.emplace_back(a, mid);
      }
    }
    if (m_.bridge) return {cont_best, time_of(cont_t + 0.5)};
    return {grid_best, best_t};
  }

  // First time the level reaches 0; empty if not within the horizon.
  std::optional<double> first_passage() {
    if (coarse_.front().x >= 0.0) return 0.0;
    for (std::size_t i = 0; i + 1 < coarse_.size(); ++i) {
      std::vector<std::pair<Node, Node>> stack{{coarse_[i], coarse_[i + 1]}};
      while (!stack.empty()) {
        const auto [a, b] = stack.back();
        stack.pop_back();
        const double len = time_of(static_cast<double>(b.k - a.k));
        if (b.k - a.k == 1) {
          if (b.x >= 0.0) return m_.bridge ? time_of(a.k + 0.5) : time_of(static_cast<double>(b.k));
          if (m_.bridge) {
            const double p = std::exp(-2.0 * a.x * b.x / len);
            if (st_.draw_uniform(static_cast<std::uint64_t>(a.k)) < p) return time_of(a.k + 0.5);
          }
          continue;
        }
        if (crossing_bound(a.x, b.x, 0.0, len) < kPruneProbability) continue;
        const Node mid = midpoint(a, b);
        stack.emplace_back(mid, b);
        stack.emplace_back(a, mid);
      }
    }
    return std::nullopt;
  }

 private:
  double drift(double t) const { return -m_.curvature * ((m_.s + t) * (m_.s + t) - m_.s * m_.s); }

  void build_coarse() {
    const int m = m_.plan.coarse_steps;
    const double dtc = m_.plan.step * static_cast<double>(stride_);
    std::array<std::uint32_t, 4 * kMaxCoarse> words{};
    kernels::philox_block(0, st_.path_lo, st_.hi_word(Purpose::coarse), st_.key,
                          std::span<std::uint32_t>(words.data(), 4 * static_cast<std::size_t>(m)));
    std::array<double, kMaxCoarse> inc{}, levels{}, values{};
    const double sd = std::sqrt(dtc);
    for (int j = 0; j < m; ++j) inc[static_cast<std::size_t>(j)] = sd * normal_from(&words[4 * static_cast<std::size_t>(j)]);
    coarse_.clear();
    coarse_.push_back({0, m_.x0});
    if (m_.curvature == 1.0) {
      const auto n = static_cast<std::size_t>(m);
      kernels::parabolic_path_extremum(std::span<const double>(inc.data(), n), m_.x0 + m_.s * m_.s, m_.s, dtc,
                                       std::span<double>(levels.data(), n), std::span<double>(values.data(), n));
      for (int j = 0; j < m; ++j) coarse_.push_back({(j + 1) * stride_, values[static_cast<std::size_t>(j)]});
    } else {
      double w = 0.0;
      for (int j = 0; j < m; ++j) {
        w += inc[static_cast<std::size_t>(j)];
        coarse_.push_back({(j + 1) * stride_, m_.x0 + w + drift((j + 1) * dtc)});
      }
    }
  }

  // P(bridge of the level from xa to xb over len exceeds ref), with the
  // parabola's excess over its chord (at most c len^2 / 4) added.
  double crossing_bound(double xa, double xb, double ref, double len) const {
    const double level = ref - m_.curvature * len * len / 4.0;
    if (xa >= level || xb >= level) return 1.0;
    return std::exp(-2.0 * (level - xa) * (level - xb) / len);
  }

  Node midpoint(const Node& a, const Node& b) const {
    const std::int64_t k = (a.k + b.k) / 2;
    const double len = time_of(static_cast<double>(b.k - a.k));
    const double ta = time_of(static_cast<double>(a.k));
    const double tb = time_of(static_cast<double>(b.k));
    const double tm = time_of(static_cast<double>(k));
    // the drift is deterministic: bridge the driftless part and add it back
    const double wa = a.x - drift(ta);
    const double wb = b.x - drift(tb);
    const double wm = 0.5 * (wa + wb) + std::sqrt(0.25 * len) * st_.draw_normal(static_cast<std::uint64_t>(k));
    return {k, wm + drift(tm)};
  }

  SideModel m_;
  Stream st_;
  std::int64_t stride_ = 1;
  std::vector<Node> coarse_;
};

template <typename F>
void parallel_paths(long n, int threads, F&& body) {
  const long chunks = (n + kChunk - 1) / kChunk;
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (long c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      const long end = std::min(n, (c + 1) * kChunk);
      for (long i = c * kChunk; i < end; ++i) body(i);
    }
  };
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(std::max<long>(chunks, 1))));
  if (t == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// P(some u >= horizon with x + W(u) - ((s+u)^2 - s^2) >= 0), bounded on unit
// blocks by the reflection principle.
double late_hit_bound(process::StartState st, double horizon) {
  double total = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double u = horizon + j;
    const double need = (st.s + u) * (st.s + u) - st.s * st.s - st.x;
    if (need <= 0.0) return 1.0;
    total += 2.0 * normal_upper_tail(need / std::sqrt(u + 1.0));
  }
  return std::min(1.0, total);
}

}  // namespace

void McConfig::validate() const {
  if (n_paths < 1) throw DomainError("mcsim: n_paths must be positive");
  if (!(dt > 0.0)) throw DomainError("mcsim: dt must be positive");
  if (!(t_max > 0.0)) throw DomainError("mcsim: t_max must be positive");
  if (t_max / dt > 1e9) throw DomainError("mcsim: t_max / dt too large");
  if (threads < 1) throw DomainError("mcsim: threads must be >= 1");
}

GridPlan plan_grid(double horizon, double dt) {
  GridPlan p;
  const double steps = std::ceil(horizon / dt - 1e-9);
  while (static_cast<double>(kMaxCoarse) * std::ldexp(1.0, p.levels) < steps) ++p.levels;
  p.coarse_steps = static_cast<int>(std::ceil(steps / std::ldexp(1.0, p.levels) - 1e-9));
  p.coarse_steps = std::clamp(p.coarse_steps, 1, kMaxCoarse);
  p.step = horizon / (p.coarse_steps * std::ldexp(1.0, p.levels));
  return p;
}

std::vector<PathFunctionals> simulate_two_sided(const McConfig& cfg) {
  cfg.validate();
  SideModel model;
  model.plan = plan_grid(cfg.t_max, cfg.dt);
  model.bridge = cfg.bridge_correction;
  std::vector<PathFunctionals> out(static_cast<std::size_t>(cfg.n_paths));
  parallel_paths(cfg.n_paths, cfg.threads, [&](long i) {
    SideSimulator right(model, make_stream(cfg.seed, i, Experiment::two_sided, 0));
    SideSimulator left(model, make_stream(cfg.seed, i, Experiment::two_sided, 1));
    const auto r = right.maximum();
    const auto l = left.maximum();
    PathFunctionals& p = out[static_cast<std::size_t>(i)];
    // ties go to the earlier time, i.e. the left side
    if (l.first >= r.first) {
      p.max = l.first;
      p.argmax = -l.second;
    } else {
      p.max = r.first;
      p.argmax = r.second;
    }
  });
  return out;
}

std::vector<PathFunctionals> simulate_one_sided(process::StartState state, const McConfig& cfg) {
  cfg.validate();
  SideModel model;
  model.x0 = state.x;
  model.s = state.s;
  model.plan = plan_grid(cfg.t_max, cfg.dt);
  model.bridge = cfg.bridge_correction;
  std::vector<PathFunctionals> out(static_cast<std::size_t>(cfg.n_paths));
  parallel_paths(cfg.n_paths, cfg.threads, [&](long i) {
    const Stream st = make_stream(cfg.seed, i, Experiment::one_sided, 0);
    SideSimulator side(model, st);
    const auto m = side.maximum();
    PathFunctionals& p = out[static_cast<std::size_t>(i)];
    p.max = m.first;
    p.argmax = state.s + m.second;
    if (m.first >= 0.0) {
      SideSimulator again(model, st);
      const auto hit = again.first_passage();
      if (hit) p.hit_time = state.s + *hit;
    }
  });
  return out;
}

Proportion estimate_hitting_prob(process::StartState state, const McConfig& cfg) {
  cfg.validate();
  if (!(state.x < 0.0)) throw DomainError("estimate_hitting_prob: x must be negative");
  SideModel model;
  model.x0 = state.x;
  model.s = state.s;
  model.plan = plan_grid(cfg.t_max, cfg.dt);
  model.bridge = cfg.bridge_correction;
  std::vector<char> hit(static_cast<std::size_t>(cfg.n_paths), 0);
  parallel_paths(cfg.n_paths, cfg.threads, [&](long i) {
    SideSimulator side(model, make_stream(cfg.seed, i, Experiment::one_sided, 0));
    hit[static_cast<std::size_t>(i)] = side.first_passage().has_value() ? 1 : 0;
  });
  Proportion r;
  r.n = cfg.n_paths;
  for (char h : hit) r.hits += h;
  r.p = static_cast<double>(r.hits) / static_cast<double>(r.n);
  r.std_error = std::sqrt(std::max(r.p * (1.0 - r.p), 1.0 / static_cast<double>(r.n)) / static_cast<double>(r.n));
  r.horizon_bound = late_hit_bound(state, cfg.t_max);
  return r;
}

Histogram simulate_pure_bm_passage(double z, const McConfig& cfg, double bin_width) {
  cfg.validate();
  if (!(z > 0.0)) throw DomainError("simulate_pure_bm_passage: z must be positive");
  if (!(bin_width > 0.0)) throw DomainError("simulate_pure_bm_passage: bin_width must be positive");
  SideModel model;
  model.x0 = -z;
  model.curvature = 0.0;
  model.plan = plan_grid(cfg.t_max, cfg.dt);
  model.bridge = cfg.bridge_correction;
  std::vector<double> times(static_cast<std::size_t>(cfg.n_paths), std::numeric_limits<double>::infinity());
  parallel_paths(cfg.n_paths, cfg.threads, [&](long i) {
    SideSimulator side(model, make_stream(cfg.seed, i, Experiment::pure_bm, 0));
    const auto t = side.first_passage();
    if (t) times[static_cast<std::size_t>(i)] = *t;
  });
  Histogram h;
  h.width = bin_width;
  h.n = cfg.n_paths;
  const auto bins = static_cast<std::size_t>(std::llround(cfg.t_max / bin_width));
  h.counts.assign(bins, 0);
  for (double t : times) {
    const double b = std::floor(t / bin_width);
    if (std::isfinite(t) && b < static_cast<double>(bins)) {
      ++h.counts[static_cast<std::size_t>(b)];
    } else {
      ++h.overflow;
    }
  }
  return h;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  const double log_pre = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return 1.0 - sum * std::exp(log_pre);
  }
  // modified Lentz continued fraction
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(log_pre) * h;
}

ChiSquare chi_square(const Histogram& h, const std::vector<double>& cell_probabilities) {
  if (cell_probabilities.size() != h.counts.size()) throw DomainError("chi_square: size mismatch");
  ChiSquare r;
  const double n = static_cast<double>(h.n);
  double used = 0.0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double e = n * cell_probabilities[i];
    used += cell_probabilities[i];
    if (e <= 0.0) continue;
    const double d = static_cast<double>(h.counts[i]) - e;
    r.statistic += d * d / e;
    ++r.dof;
  }
  const double rest = n * std::max(0.0, 1.0 - used);
  if (rest > 0.0) {
    const double d = static_cast<double>(h.overflow) - rest;
    r.statistic += d * d / rest;
    ++r.dof;
  }
  r.dof = std::max(1, r.dof - 1);
  r.p_value = gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

SampleMean sample_mean(const std::vector<double>& v) {
  if (v.size() < 2) throw DomainError("sample_mean: need at least two samples");
  // Neumaier summation in index order
  auto sum = [&v](auto f) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
      const double y = f(x);
      const double t = s + y;
      c += std::abs(s) >= std::abs(y) ? (s - t) + y : (y - t) + s;
      s = t;
    }
    return s + c;
  };
  const double n = static_cast<double>(v.size());
  SampleMean r;
  r.mean = sum([](double x) { return x; }) / n;
  const double var = sum([&r](double x) { return (x - r.mean) * (x - r.mean); }) / (n - 1.0);
  r.std_error = std::sqrt(var / n);
  return r;
}

}  // namespace chernoff::mcsim
