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

#include "dpftrl/vec.hpp"

#include <cmath>
#include <string>

#include "dpftrl/errors.hpp"

namespace dpftrl {

bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void require_finite(const Vector& v, const char* where) {
  if (!all_finite(v)) {
    throw InvalidInputError(std::string(where) + ": non-finite entry");
  }
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const Vector& v) { return std::sqrt(dot(v, v)); }

double l2_dist(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void axpy(double alpha, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(Vector& v, double alpha) {
  for (double& x : v) x *= alpha;
}

Vector scaled(const Vector& v, double alpha) {
  Vector out(v);
  scale(out, alpha);
  return out;
}

void add_in_place(Vector& a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

Vector add(const Vector& a, const Vector& b) {
  Vector out(a);
  add_in_place(out, b);
  return out;
}

Vector sub(const Vector& a, const Vector& b) {
  Vector out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vector clip(const Vector& v, double clip_norm) {
  if (clip_norm <= 0) throw InvalidInputError("clip: clip_norm must be > 0");
  require_finite(v, "clip");
  const double norm = l2_norm(v);
  if (norm <= clip_norm) return v;
  return scaled(v, clip_norm / norm);
}

Vector project_ball(const Vector& v, double radius) {
  if (radius <= 0) throw InvalidInputError("project_ball: radius must be > 0");
  require_finite(v, "project_ball");
  const double norm = l2_norm(v);
  if (norm <= radius) return v;
  return scaled(v, radius / norm);
}

}  // namespace dpftrl
