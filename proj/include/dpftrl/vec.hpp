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

#ifndef DPFTRL_VEC_HPP_
#define DPFTRL_VEC_HPP_

#include <cstddef>
#include <vector>

namespace dpftrl {

using Vector = std::vector<double>;

// All functions here are pure and thread-safe. Inputs must be finite; the
// mutating helpers keep outputs finite for finite inputs.

bool all_finite(const Vector& v);
void require_finite(const Vector& v, const char* where);

double dot(const Vector& a, const Vector& b);
double l2_norm(const Vector& v);
double l2_dist(const Vector& a, const Vector& b);

// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);
void scale(Vector& v, double alpha);
Vector scaled(const Vector& v, double alpha);
void add_in_place(Vector& a, const Vector& b);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);

// v * min(clip_norm / ||v||, 1); vectors already inside the ball (including
// the exact-threshold case ||v|| == clip_norm) pass through unchanged.
Vector clip(const Vector& v, double clip_norm);

// Euclidean projection onto the l2 ball of the given radius.
Vector project_ball(const Vector& v, double radius);

}  // namespace dpftrl

#endif  // DPFTRL_VEC_HPP_
