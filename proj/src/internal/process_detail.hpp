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

#pragma once

#include <functional>

#include "chernoff/process.hpp"

namespace chernoff::process::detail {

extern const double kBeta;
extern const double kInvBeta;
extern const double kFourThird;

double clamp_tol(double tol);

/// z(u) = sigma0 + mu[(1 - cosh u) sin(alpha) + i cos(alpha) sinh u]
struct Contour {
  double sigma0 = 0.0;
  double mu = 1.0;
  double alpha = 0.6;
  /// Size of the logarithms that cancel inside the transform.
  double log_scale = 0.0;
};

/// (1/2 pi i) int over the contour of e^{z time} exp(log_transform(z)) dz.
/// full_line = false uses Hermitian symmetry and returns only the real part.
Estimate bromwich(const std::function<Complex(Complex)>& log_transform, double time, const Contour& c,
                  bool full_line, const Accuracy& acc);

/// Integral of f over [lo, hi] on panels doubling in length from lo.
/// f(t, inner_accuracy, &inner_err) may tighten inner_accuracy per call.
Estimate integrate_time(const std::function<double(double, Accuracy&, double*)>& f, double lo, double hi,
                        double abs_tol, const Accuracy& acc);

}  // namespace chernoff::process::detail
