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

#ifndef DPFTRL_LOSS_HPP_
#define DPFTRL_LOSS_HPP_

#include "dpftrl/vec.hpp"

namespace dpftrl {

// One training example. The distinguished bottom element stands for an
// absent record and always produces a zero gradient and zero loss.
struct Datum {
  Vector x;
  double y = 0.0;
  bool bottom = false;

  static Datum make_bottom(std::size_t dim) {
    Datum d;
    d.x.assign(dim, 0.0);
    d.bottom = true;
    return d;
  }
};

class LossOracle {
 public:
  virtual ~LossOracle() = default;
  virtual double loss(const Vector& theta, const Datum& d) const = 0;
  // Must return the zero vector for bottom data.
  virtual Vector grad(const Vector& theta, const Datum& d) const = 0;
};

// l(theta; (x, y)) = (y - <x, theta>)^2
class SquaredErrorLoss : public LossOracle {
 public:
  double loss(const Vector& theta, const Datum& d) const override;
  Vector grad(const Vector& theta, const Datum& d) const override;
};

// l(theta; (x, y)) = log(1 + exp(-y <x, theta>)), y in {-1, +1}
class LogisticLoss : public LossOracle {
 public:
  double loss(const Vector& theta, const Datum& d) const override;
  Vector grad(const Vector& theta, const Datum& d) const override;
};

// l(theta; d) = <theta, x>; the gradient is the feature vector itself.
class LinearLoss : public LossOracle {
 public:
  double loss(const Vector& theta, const Datum& d) const override;
  Vector grad(const Vector& theta, const Datum& d) const override;
};

}  // namespace dpftrl

#endif  // DPFTRL_LOSS_HPP_
