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

#ifndef DPFTRL_LEAST_SQUARES_HPP_
#define DPFTRL_LEAST_SQUARES_HPP_

#include <cstdint>
#include <memory>

#include "dpftrl/optimizer.hpp"
#include "dpftrl/tree.hpp"
#include "dpftrl/vec.hpp"

namespace dpftrl {

struct LsConfig {
  double lambda = 1.0;
  double feature_bound = 1.0;  // L, bound on ||x||
  double noise_scale = 0.0;    // sigma
  Constraint constraint = Constraint::kUnconstrained;
  double ball_radius = 0.0;
  Estimator estimator = Estimator::kHonaker;
  std::uint64_t seed = 0;
};

// argmin theta^T W theta - 2 <s, theta> + lambda/2 ||theta||^2, solved
// exactly via Cholesky on the unconstrained domain or by projected gradient
// (tolerance 1e-8 on the projected gradient norm) inside a ball. Requires
// 2W + lambda*I positive definite; throws IndefiniteSystemError otherwise.
// warm_start, when nonempty, seeds the projected-gradient iteration.
Vector ls_argmin(const Vector& w, const Vector& s, double lambda,
                 Constraint constraint, double ball_radius, std::size_t dim,
                 const Vector& warm_start = {});

// FTRL specialized to least-squares losses (y - <x, theta>)^2: a
// vector-valued tree aggregates y_t * x_t and a symmetric-matrix tree
// aggregates x_t x_t^T (per-entry noise std L^2 sigma). Each step solves
// the regularized quadratic above at the current noisy (W_t, s_t).
class LsFtrlOptimizer {
 public:
  LsFtrlOptimizer(const LsConfig& config, std::size_t dim,
                  std::size_t horizon);

  const Vector& model() const { return theta_; }
  std::size_t step_count() const { return step_; }

  // Consumes one example; requires ||x|| <= L and |y| <= 1.
  const Vector& step(const Vector& x, double y);

 private:
  LsConfig config_;
  std::size_t dim_;
  std::size_t step_ = 0;
  std::unique_ptr<AggregationTree> bias_tree_;
  std::unique_ptr<AggregationTree> cov_tree_;
  Vector theta_;
};

}  // namespace dpftrl

#endif  // DPFTRL_LEAST_SQUARES_HPP_
