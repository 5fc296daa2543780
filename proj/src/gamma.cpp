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

#include "chernoff/gamma.hpp"

#include <array>
#include <cmath>

#include "chernoff/types.hpp"

namespace chernoff::special {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma(double x) {
  if (x < 0.5) {
    return kPi / (std::sin(kPi * x) * gamma(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + kLanczosG + 0.5;
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (x + static_cast<double>(i));
  }
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

}  // namespace chernoff::special
