// Copyright 2026 The dpftrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpftrl/linalg.hpp"

#include <cmath>

namespace dpftrl {

Vector sym_matvec(const Vector& a, const Vector& x, std::size_t side) {
  Vector out(side, 0.0);
  for (std::size_t i = 0; i < side; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < side; ++j) s += a[i * side + j] * x[j];
    out[i] = s;
  }
  return out;
}

std::optional<Vector> cholesky_solve(const Vector& a, const Vector& b,
                                     std::size_t side) {
  // Lower-triangular factor L with A = L L^T.
  Vector l(side * side, 0.0);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i * side + j];
      for (std::size_t k = 0; k < j; ++k) {
        s -= l[i * side + k] * l[j * side + k];
      }
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return std::nullopt;
        l[i * side + i] = std::sqrt(s);
      } else {
        l[i * side + j] = s / l[j * side + j];
      }
    }
  }
  // Forward then back substitution.
  Vector y(side, 0.0);
  for (std::size_t i = 0; i < side; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i * side + k] * y[k];
    y[i] = s / l[i * side + i];
  }
  Vector x(side, 0.0);
  for (std::size_t ii = side; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < side; ++k) s -= l[k * side + ii] * x[k];
    x[ii] = s / l[ii * side + ii];
  }
  return x;
}

double gershgorin_bound(const Vector& a, std::size_t side) {
  double bound = 0.0;
  for (std::size_t i = 0; i < side; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < side; ++j) row += std::fabs(a[i * side + j]);
    bound = std::max(bound, row);
  }
  return bound;
}

}  // namespace dpftrl
