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

// Data-parallel inner loops with a portable scalar reference and AVX2
// variants. The scalar versions fix the association order (4-lane blocks),
// so both variants return bit-identical results; the active variant is
// chosen once at startup from CPUID and can be pinned for testing.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace chernoff::kernels {

enum class Isa { scalar, avx2 };

/// Best variant supported by this CPU.
Isa detected_isa();
Isa active_isa();
/// Pins the variant; requesting avx2 on a CPU without it falls back to scalar.
void set_active_isa(Isa isa);
const char* isa_name(Isa isa);

struct ComplexSum {
  double re = 0.0;
  double im = 0.0;
};

/// sum_i w[i] * (re[i] + i im[i]); all spans have the same length.
ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re, std::span<const double> im);

struct Extremum {
  double value;
  std::size_t index;
};

/// Builds a drifted path from Gaussian increments:
///   level[i] = start + (d[0] + ... + d[i]),  value[i] = level[i] - (t0 + (i+1) dt)^2
/// and returns the maximum of `value` with the earliest index on ties.
/// `levels` and `values` receive the per-node results.
Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0, double dt,
                                 std::span<double> levels, std::span<double> values);

/// Philox4x32-10 applied to counters (first + j, hi, stream_lo, stream_hi),
/// j = 0..n-1, with the given key. Writes 4 words per counter.
void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                  std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out);

namespace scalar {
ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re, std::span<const double> im);
Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0, double dt,
                                 std::span<double> levels, std::span<double> values);
void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                  std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out);
}  // namespace scalar

namespace avx2 {
bool available();
ComplexSum weighted_sum(std::span<const double> w, std::span<const double> re, std::span<const double> im);
Extremum parabolic_path_extremum(std::span<const double> increments, double start, double t0, double dt,
                                 std::span<double> levels, std::span<double> values);
void philox_block(std::uint64_t first, std::uint32_t stream_lo, std::uint32_t stream_hi,
                  std::array<std::uint32_t, 2> key, std::span<std::uint32_t> out);
}  // namespace avx2

}  // namespace chernoff::kernels
