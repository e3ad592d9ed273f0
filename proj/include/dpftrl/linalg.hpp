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

#ifndef DPFTRL_LINALG_HPP_
#define DPFTRL_LINALG_HPP_

#include <cstddef>
#include <optional>

#include "dpftrl/vec.hpp"

namespace dpftrl {

// Just enough dense symmetric machinery for the least-squares solve;
// matrices are row-major side x side.

Vector sym_matvec(const Vector& a, const Vector& x, std::size_t side);

// Solves A x = b for symmetric positive definite A via Cholesky; returns
// nullopt when A is not (numerically) positive definite.
std::optional<Vector> cholesky_solve(const Vector& a, const Vector& b,
                                     std::size_t side);

// Gershgorin upper bound on the spectral radius.
double gershgorin_bound(const Vector& a, std::size_t side);

}  // namespace dpftrl

#endif  // DPFTRL_LINALG_HPP_
