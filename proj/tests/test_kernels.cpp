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

#include <array>
#include <string>
#include <cstdint>
#include <random>
#include <vector>

#include "chernoff/kernels.hpp"
#include "doctest.h"

namespace k = chernoff::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& g, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  struct Kat {
    std::array<std::uint32_t, 4> ctr;
    std::array<std::uint32_t, 2> key;
    std::array<std::uint32_t, 4> want;
  };
  // Random123 reference vectors
  const Kat kats[] = {
      {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
      {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
       {0xffffffff, 0xffffffff},
       {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
      {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
       {0xa4093822, 0x299f31d0},
       {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
  };
  for (const auto& kat : kats) {
    const std::uint64_t first = kat.ctr[0] | (static_cast<std::uint64_t>(kat.ctr[1]) << 32);
    std::array<std::uint32_t, 4> out{};
    k::scalar::philox_block(first, kat.ctr[2], kat.ctr[3], kat.key, out);
    CHECK(out == kat.want);
    if (k::avx2::available()) {
      std::array<std::uint32_t, 4> v{};
      k::avx2::philox_block(first, kat.ctr[2], kat.ctr[3], kat.key, v);
      CHECK(v == kat.want);
    }
  }
}

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (!k::avx2::available()) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  std::mt19937_64 g(42);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 15u, 16u, 17u, 64u, 1000u, 1023u}) {
    CAPTURE(n);
    const auto w = random_vector(g, n, -1.0, 1.0);
    const auto re = random_vector(g, n, -1e3, 1e3);
    const auto im = random_vector(g, n, -1e-3, 1e-3);
    const auto a = k::scalar::weighted_sum(w, re, im);
    const auto b = k::avx2::weighted_sum(w, re, im);
    CHECK(a.re == b.re);
    CHECK(a.im == b.im);

    const auto inc = random_vector(g, n, -0.05, 0.05);
    std::vector<double> l1(n), v1(n), l2(n), v2(n);
    if (n > 0) {
      const auto e1 = k::scalar::parabolic_path_extremum(inc, -0.3, 0.7, 1e-3, l1, v1);
      const auto e2 = k::avx2::parabolic_path_extremum(inc, -0.3, 0.7, 1e-3, l2, v2);
      CHECK(e1.value == e2.value);
      CHECK(e1.index == e2.index);
      CHECK(l1 == l2);
      CHECK(v1 == v2);
    }

    std::vector<std::uint32_t> p1(4 * n), p2(4 * n);
    k::scalar::philox_block(0xFFFFFFFFull - 3, 7, 9, {123, 456}, p1);
    k::avx2::philox_block(0xFFFFFFFFull - 3, 7, 9, {123, 456}, p2);
    CHECK(p1 == p2);
  }
}

TEST_CASE("path extremum picks the earliest maximum") {
  const std::vector<double> inc{0.5, 0.0, 0.0, -1.0};
  std::vector<double> l(4), v(4);
  // with dt = 0 the drift vanishes and steps 0..2 tie at 0.5
  const auto e = k::scalar::parabolic_path_extremum(inc, 0.0, 0.0, 0.0, l, v);
  CHECK(e.index == 0);
  const auto f = k::scalar::parabolic_path_extremum(inc, 1.0, 0.0, 0.1, l, v);
  CHECK(l[3] == doctest::Approx(0.5));
  CHECK(v[0] == doctest::Approx(1.5 - 0.01));
  CHECK(f.index == 0);
}

TEST_CASE("dispatch") {
  const auto saved = k::active_isa();
  k::set_active_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  k::set_active_isa(k::Isa::avx2);
  CHECK(k::active_isa() == (k::avx2::available() ? k::Isa::avx2 : k::Isa::scalar));
  CHECK(std::string(k::isa_name(k::Isa::scalar)) == "scalar");
  k::set_active_isa(saved);
}
