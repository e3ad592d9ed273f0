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

#include "dpftrl/loss.hpp"

#include <cmath>

namespace dpftrl {

double SquaredErrorLoss::loss(const Vector& theta, const Datum& d) const {
  if (d.bottom) return 0.0;
  const double r = d.y - dot(d.x, theta);
  return r * r;
}

Vector SquaredErrorLoss::grad(const Vector& theta, const Datum& d) const {
  if (d.bottom) return Vector(theta.size(), 0.0);
  const double r = d.y - dot(d.x, theta);
  return scaled(d.x, -2.0 * r);
}

double LogisticLoss::loss(const Vector& theta, const Datum& d) const {
  if (d.bottom) return 0.0;
  const double m = d.y * dot(d.x, theta);
  // log(1 + exp(-m)) without overflow for large |m|.
  return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

Vector LogisticLoss::grad(const Vector& theta, const Datum& d) const {
  if (d.bottom) return Vector(theta.size(), 0.0);
  const double m = d.y * dot(d.x, theta);
  const double s = 1.0 / (1.0 + std::exp(m));  // sigmoid(-m)
  return scaled(d.x, -d.y * s);
}

double LinearLoss::loss(const Vector& theta, const Datum& d) const {
  if (d.bottom) return 0.0;
  return dot(theta, d.x);
}

Vector LinearLoss::grad(const Vector& theta, const Datum& d) const {
  if (d.bottom) return Vector(theta.size(), 0.0);
  return d.x;
}

}  // namespace dpftrl
