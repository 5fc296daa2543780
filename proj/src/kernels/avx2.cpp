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

// AVX2 variants of the kernels. Functions carry a target attribute so the
// rest of the library builds for baseline x86-64; callers reach them only
// after available() reports CPU support. No FMA: results must match the
// scalar reference bit for bit.

#include <array>
#include <cmath>

#include "chernoff/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CHERNOFF_HAVE_X86 1
#define CHERNOFF_AVX2 __attribute__((target("avx2")))
#else
#define CHERNOFF_HAVE_X86 0
#define CHERNOFF_AVX2
#endif

namespace chernoff::kernels::avx2 {

#if CHERNOFF_HAVE_X86

bool available() {
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return ok;
}

namespace {

CHERNOFF_AVX2 inline double hsum_pairwise(__m256d v) {
  alignas(32) double a[4];
  _mm256_store_pd(a, v);
  return (a[0] + a[1]) + (a[2] + a[3]);
}

// [a0,a1,a2,a3] -> [0,a0,a1,a2]
CHERNOFF_AVX2 inline __m256d shift_one(__m256d a) {
  const __m256d rot = _mm256_permute4x64_pd(a, 0x90);  // a0,a0,a1,a2
  return _mm256_blend_pd(rot, _mm256_setzero_pd(), 0x1);
}

// [a0,a1,a2,a3] -> [0,0,a0,a1]
CHERNOFF_AVX2 inline __m256d shift_two(__m256d a) {
  return _mm256_permute2f128_pd(a, a, 0x08);
}

}  // namespace

CHERNOFF_AVX2 ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re,
                                      std::span<const double> im) {
  const std::size_t n = w.size();
  __m256d ar = _mm256_setzero_pd();
  __m256d ai = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w.data() + i);
    ar = _mm256_add_pd(ar, _mm256_mul_pd(wv, _mm256_loadu_pd(re.data() + i)));
    ai = _mm256_add_pd(ai, _mm256_mul_pd(wv, _mm256_loadu_pd(im.data() + i)));
  }
  if (i < n) {
    alignas(32) double tw[4] = {0, 0, 0, 0}, tr[4] = {0, 0, 0, 0}, ti[4] = {0, 0, 0, 0};
    for (std::size_t l = 0; i + l < n; ++l) {
      tw[l] = w[i + l];
      tr[l] = re[i + l];
      ti[l] = im[i + l];
    }
    const __m256d wv = _mm256_load_pd(tw);
    ar = _mm256_add_pd(ar, _mm256_mul_pd(wv, _mm256_load_pd(tr)));
    ai = _mm256_add_pd(ai, _mm256_mul_pd(wv, _mm256_load_pd(ti)));
  }
  return {hsum_pairwise(ar), hsum_pairwise(ai)};
}

CHERNOFF_AVX2 Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0,
                                               double dt, std::span<double> levels, std::span<double> values) {
  const std::size_t n = increments.size();
  __m256d carry = _mm256_set1_pd(start);
  __m256d best = _mm256_set1_pd(-HUGE_VAL);
  __m256d best_idx = _mm256_setzero_pd();
  const __m256d vt0 = _mm256_set1_pd(t0);
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  for (std::size_t i = 0; i < n; i += 4) {
    __m256d d;
    const bool full = i + 4 <= n;
    if (full) {
      d = _mm256_loadu_pd(increments.data() + i);
    } else {
      alignas(32) double td[4] = {0, 0, 0, 0};
      for (std::size_t l = 0; i + l < n; ++l) td[l] = increments[i + l];
      d = _mm256_load_pd(td);
    }
    const __m256d s1 = _mm256_add_pd(d, shift_one(d));
    const __m256d s2 = _mm256_add_pd(s1, shift_two(s1));
    const __m256d lv = _mm256_add_pd(s2, carry);
    carry = _mm256_permute4x64_pd(lv, 0xFF);
    const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(i)), lane);
    const __m256d t = _mm256_add_pd(vt0, _mm256_mul_pd(_mm256_add_pd(idx, _mm256_set1_pd(1.0)), vdt));
    __m256d v = _mm256_sub_pd(lv, _mm256_mul_pd(t, t));
    if (full) {
      _mm256_storeu_pd(levels.data() + i, lv);
      _mm256_storeu_pd(values.data() + i, v);
    } else {
      alignas(32) double tl[4], tv[4];
      _mm256_store_pd(tl, lv);
      _mm256_store_pd(tv, v);
      for (std::size_t l = 0; i + l < n; ++l) {
        levels[i + l] = tl[l];
        values[i + l] = tv[l];
      }
      for (std::size_t l = n - i; l < 4; ++l) tv[l] = -HUGE_VAL;
      v = _mm256_load_pd(tv);
    }
    const __m256d gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
    best = _mm256_blendv_pd(best, v, gt);
    best_idx = _mm256_blendv_pd(best_idx, idx, gt);
  }
  alignas(32) double b[4], bi[4];
  _mm256_store_pd(b, best);
  _mm256_store_pd(bi, best_idx);
  Extremum e{b[0], static_cast<std::size_t>(bi[0])};
  for (int l = 1; l < 4; ++l) {
    const auto il = static_cast<std::size_t>(bi[l]);
    if (b[l] > e.value || (b[l] == e.value && il < e.index)) e = {b[l], il};
  }
  return e;
}

namespace {

CHERNOFF_AVX2 inline void mulhilo8(__m256i a, __m256i m, __m256i& hi, __m256i& lo) {
  lo = _mm256_mullo_epi32(a, m);
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(m, 32));
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

}  // namespace

CHERNOFF_AVX2 void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                                std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out) {
  const std::size_t n = out.size() / 4;
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    alignas(32) std::uint32_t c0[8], c1[8];
    for (int l = 0; l < 8; ++l) {
      const std::uint64_t c = first + j + static_cast<std::uint64_t>(l);
      c0[l] = static_cast<std::uint32_t>(c);
      c1[l] = static_cast<std::uint32_t>(c >> 32);
    }
    __m256i x0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c0));
    __m256i x1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c1));
    __m256i x2 = _mm256_set1_epi32(static_cast<int>(stream_lo));
    __m256i x3 = _mm256_set1_epi32(static_cast<int>(stream_hi));
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
      }
      __m256i hi0, lo0, hi1, lo1;
      mulhilo8(x0, m0, hi0, lo0);
      mulhilo8(x2, m1, hi1, lo1);
      const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
      const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
      x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), vk0);
      x1 = lo1;
      x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), vk1);
      x3 = lo0;
    }
    alignas(32) std::uint32_t o[4][8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(o[0]), x0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(o[1]), x1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(o[2]), x2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(o[3]), x3);
    for (int l = 0; l < 8; ++l) {
      for (int w = 0; w < 4; ++w) out[4 * (j + l) + w] = o[w][l];
    }
  }
  if (j < n) scalar::philox_block(first + j, stream_lo, stream_hi, key, out.subspan(4 * j));
}

#else

bool available() { return false; }

ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re, std::span<const double> im) {
  return scalar::weighted_sum(w, re, im);
}

Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0, double dt,
                                 std::span<double> levels, std::span<double> values) {
  return scalar::parabolic_path_extremum(increments, start, t0, dt, levels, values);
}

void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                  std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out) {
  scalar::philox_block(first, stream_lo, stream_hi, key, out);
}

#endif

}  // namespace chernoff::kernels::avx2
