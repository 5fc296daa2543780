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

namespace chernoff::special {

/// Gamma function for real x > 0 (Lanczos, g = 7, n = 9), with the
/// reflection formula for x < 0.5. Relative accuracy ~1e-15.
double gamma(double x);

}  // namespace chernoff::special
