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

#include "dpftrl/least_squares.hpp"

#include <cmath>

#include "dpftrl/errors.hpp"
#include "dpftrl/linalg.hpp"

namespace dpftrl {
namespace {

constexpr double kBoundSlack = 1e-9;
constexpr double kProjGradTol = 1e-8;
constexpr int kMaxProjGradIters = 200000;

// argmin of 1/2 theta^T A theta - <b, theta> over the ball, A positive
// definite, by projected gradient with a Gershgorin step size.
Vector projected_gradient_solve(const Vector& a, const Vector& b,
                                std::size_t side, double radius,
                                Vector theta) {
  const double step = 1.0 / gershgorin_bound(a, side);
  theta = project_ball(theta, radius);
  for (int it = 0; it < kMaxProjGradIters; ++it) {
    Vector grad = sym_matvec(a, theta, side);
    for (std::size_t i = 0; i < side; ++i) grad[i] -= b[i];
    Vector next = theta;
    axpy(-step, grad, next);
    next = project_ball(next, radius);
    const double residual = l2_dist(theta, next) / step;
    theta = std::move(next);
    if (residual <= kProjGradTol) break;
  }
  return theta;
}

}  // namespace

Vector ls_argmin(const Vector& w, const Vector& s, double lambda,
                 Constraint constraint, double ball_radius, std::size_t dim,
                 const Vector& warm_start) {
  if (w.size() != dim * dim || s.size() != dim) {
    throw InvalidInputError("ls_argmin: dimension mismatch");
  }
  if (!(lambda > 0)) throw InvalidInputError("ls_argmin: lambda must be > 0");
  Vector a = w;
  scale(a, 2.0);
  for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] += lambda;

  // Positive definiteness is required in both modes; noisy W can break it.
  auto solved = cholesky_solve(a, scaled(s, 2.0), dim);
  if (!solved) {
    throw IndefiniteSystemError(
        "ls_argmin: 2W + lambda*I is not positive definite; increase lambda");
  }
  if (constraint == Constraint::kUnconstrained) return *solved;
  Vector start = warm_start.size() == dim ? warm_start : Vector(dim, 0.0);
  return projected_gradient_solve(a, scaled(s, 2.0), dim, ball_radius,
                                  std::move(start));
}

LsFtrlOptimizer::LsFtrlOptimizer(const LsConfig& config, std::size_t dim,
                                 std::size_t horizon)
    : config_(config), dim_(dim) {
  if (!(config.lambda > 0)) throw InvalidInputError("ls: lambda must be > 0");
  if (!(config.feature_bound > 0)) {
    throw InvalidInputError("ls: feature bound must be > 0");
  }
  if (config.noise_scale < 0) {
    throw InvalidInputError("ls: noise_scale must be >= 0");
  }
  if (config.constraint == Constraint::kBall && !(config.ball_radius > 0)) {
    throw InvalidInputError("ls: ball constraint needs a radius");
  }
  const double l = config.feature_bound;
  bias_tree_ = std::make_unique<AggregationTree>(
      horizon, config.noise_scale, l, dim, config.seed, config.estimator);
  cov_tree_ = std::make_unique<AggregationTree>(
      horizon, config.noise_scale, l * l, dim * dim, config.seed + 1,
      config.estimator, /*symmetric_side=*/dim);
  theta_.assign(dim, 0.0);
}

const Vector& LsFtrlOptimizer::step(const Vector& x, double y) {
  if (x.size() != dim_) throw InvalidInputError("ls: dimension mismatch");
  require_finite(x, "LsFtrlOptimizer::step");
  if (!std::isfinite(y) || std::fabs(y) > 1.0 + kBoundSlack) {
    throw InvalidInputError("ls: |y| must be <= 1");
  }
  if (l2_norm(x) > config_.feature_bound * (1.0 + kBoundSlack)) {
    throw InvalidInputError("ls: ||x|| must be <= the feature bound");
  }

  ++step_;
  bias_tree_->add(step_, scaled(x, y));
  Vector outer(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      outer[i * dim_ + j] = x[i] * x[j];
    }
  }
  cov_tree_->add(step_, outer);

  const Vector s = bias_tree_->estimate(step_).value;
  const Vector w = cov_tree_->estimate(step_).value;
  theta_ = ls_argmin(w, s, config_.lambda, config_.constraint,
                     config_.ball_radius, dim_, theta_);
  return theta_;
}

}  // namespace dpftrl
