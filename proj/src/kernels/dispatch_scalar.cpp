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

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string_view>

#include "chernoff/kernels.hpp"

namespace chernoff::kernels {

namespace {

Isa initial_isa() {
  // CHERNOFF_ISA=scalar forces the reference kernels (useful for A/B runs).
  if (const char* env = std::getenv("CHERNOFF_ISA"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::scalar;
  }
  return detected_isa();
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detected_isa() { return avx2::available() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re, std::span<const double> im) {
  return active_isa() == Isa::avx2 ? avx2::weighted_sum(w, re, im) : scalar::weighted_sum(w, re, im);
}

Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0, double dt,
                                 std::span<double> levels, std::span<double> values) {
  return active_isa() == Isa::avx2 ? avx2::parabolic_path_extremum(increments, start, t0, dt, levels, values)
                                   : scalar::parabolic_path_extremum(increments, start, t0, dt, levels, values);
}

void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                  std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out) {
  if (active_isa() == Isa::avx2) {
    avx2::philox_block(first, stream_lo, stream_hi, key, out);
  } else {
    scalar::philox_block(first, stream_lo, stream_hi, key, out);
  }
}

namespace scalar {

ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re, std::span<const double> im) {
  std::array<double, 4> ar{}, ai{};
  const std::size_t n = w.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      ar[l] = ar[l] + w[i + l] * re[i + l];
      ai[l] = ai[l] + w[i + l] * im[i + l];
    }
  }
  if (i < n) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double wl = i + l < n ? w[i + l] : 0.0;
      const double rl = i + l < n ? re[i + l] : 0.0;
      const double il = i + l < n ? im[i + l] : 0.0;
      ar[l] = ar[l] + wl * rl;
      ai[l] = ai[l] + wl * il;
    }
  }
  return {(ar[0] + ar[1]) + (ar[2] + ar[3]), (ai[0] + ai[1]) + (ai[2] + ai[3])};
}

Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0, double dt,
                                 std::span<double> levels, std::span<double> values) {
  const std::size_t n = increments.size();
  double carry = start;
  std::array<double, 4> best{-HUGE_VAL, -HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
  std::array<std::size_t, 4> best_idx{0, 0, 0, 0};
  for (std::size_t i = 0; i < n; i += 4) {
    std::array<double, 4> d{};
    for (std::size_t l = 0; l < 4; ++l) d[l] = i + l < n ? increments[i + l] : 0.0;
    // same association as the two shift-and-add steps of the vector scan
    const std::array<double, 4> s1{d[0] + 0.0, d[1] + d[0], d[2] + d[1], d[3] + d[2]};
    const std::array<double, 4> s2{s1[0] + 0.0, s1[1] + 0.0, s1[2] + s1[0], s1[3] + s1[1]};
    std::array<double, 4> lv{};
    for (std::size_t l = 0; l < 4; ++l) lv[l] = s2[l] + carry;
    carry = lv[3];
    for (std::size_t l = 0; l < 4 && i + l < n; ++l) {
      const double t = t0 + static_cast<double>(i + l + 1) * dt;
      const double v = lv[l] - t * t;
      levels[i + l] = lv[l];
      values[i + l] = v;
      if (v > best[l]) {
        best[l] = v;
        best_idx[l] = i + l;
      }
    }
  }
  Extremum e{best[0], best_idx[0]};
  for (std::size_t l = 1; l < 4; ++l) {
    if (best[l] > e.value || (best[l] == e.value && best_idx[l] < e.index)) e = {best[l], best_idx[l]};
  }
  return e;
}

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                  std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out) {
  const std::size_t n = out.size() / 4;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t c = first + j;
    std::array<std::uint32_t, 4> x{static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32), stream_lo,
                                   stream_hi};
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k0 += kW0;
        k1 += kW1;
      }
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(kM0, x[0], hi0, lo0);
      mulhilo(kM1, x[2], hi1, lo1);
      x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    }
    std::copy(x.begin(), x.end(), out.begin() + static_cast<std::ptrdiff_t>(4 * j));
  }
}

}  // namespace scalar

}  // namespace chernoff::kernels
