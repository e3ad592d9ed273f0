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

#include "dpftrl/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "dpftrl/errors.hpp"

namespace dpftrl {
namespace {

void check_config(const OptimizerConfig& c) {
  if (!(c.lambda > 0)) throw InvalidInputError("optimizer: lambda must be > 0");
  if (c.momentum < 0 || c.momentum > 1) {
    throw InvalidInputError("optimizer: momentum must be in [0, 1]");
  }
  if (!(c.clip_norm > 0)) {
    throw InvalidInputError("optimizer: clip_norm must be > 0");
  }
  if (c.noise_scale < 0) {
    throw InvalidInputError("optimizer: noise_scale must be >= 0");
  }
  if (c.constraint == Constraint::kBall && !(c.ball_radius > 0)) {
    throw InvalidInputError("optimizer: ball constraint needs a radius");
  }
  if (c.l1_weight < 0) {
    throw InvalidInputError("optimizer: l1_weight must be >= 0");
  }
  if (c.batch_size < 1) {
    throw InvalidInputError("optimizer: batch_size must be >= 1");
  }
}

}  // namespace

Vector ftrl_argmin(const Vector& s, double lambda, Constraint constraint,
                   double ball_radius) {
  if (constraint == Constraint::kUnconstrained) {
    return scaled(s, -1.0 / lambda);
  }
  // The objective is radial along -s: cap the step length at the radius.
  const double norm = l2_norm(s);
  const double factor =
      norm == 0.0 ? 1.0 / lambda : std::min(1.0 / lambda, ball_radius / norm);
  return scaled(s, -factor);
}

Vector ftrl_momentum_argmin(const Vector& v, const Vector& anchor,
                            double lambda, Constraint constraint,
                            double ball_radius) {
  Vector theta = anchor;
  axpy(-1.0 / lambda, v, theta);
  if (constraint == Constraint::kBall) return project_ball(theta, ball_radius);
  return theta;
}

Vector ftrl_composite_argmin(const Vector& s, double l1_total, double lambda) {
  Vector theta(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double mag = std::fabs(s[i]) - l1_total;
    if (mag > 0) theta[i] = (s[i] > 0 ? -mag : mag) / lambda;
  }
  return theta;
}

Vector noisy_sgd_step(const Vector& theta, const Vector& gradient,
                      const Vector& noise, double eta) {
  Vector out = theta;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] -= eta * (gradient[i] + noise[i]);
  }
  return out;
}

Vector minibatch_gradient(const std::vector<Datum>& batch, const Vector& theta,
                          const LossOracle& oracle, double clip_norm,
                          std::size_t q) {
  if (q == 0) throw InvalidInputError("minibatch_gradient: q must be >= 1");
  if (batch.size() > q) {
    throw InvalidInputError("minibatch_gradient: batch larger than q");
  }
  Vector sum(theta.size(), 0.0);
  for (const Datum& d : batch) {
    if (d.bottom) continue;
    add_in_place(sum, clip(oracle.grad(theta, d), clip_norm));
  }
  scale(sum, 1.0 / static_cast<double>(q));
  return sum;
}

FtrlOptimizer::FtrlOptimizer(Variant variant, const OptimizerConfig& config,
                             std::size_t dim, std::size_t horizon)
    : variant_(variant), config_(config), dim_(dim) {
  check_config(config);
  if (variant == Variant::kComposite &&
      config.constraint == Constraint::kBall) {
    throw UnsupportedError(
        "composite l1 steps are closed-form on the unconstrained domain only");
  }
  if (variant == Variant::kComposite && !(config.l1_weight > 0)) {
    throw InvalidInputError("composite variant needs l1_weight > 0");
  }
  tree_ = std::make_unique<AggregationTree>(
      horizon, config.noise_scale, config.clip_norm, dim, config.seed,
      config.estimator);
  // theta_1 minimizes the bare regularizer: the origin for both domains.
  theta_.assign(dim, 0.0);
  anchor_ = theta_;
  momentum_.assign(dim, 0.0);
  momentum_prev_ = momentum_;
  carry_.assign(dim, 0.0);
  last_sum_.assign(dim, 0.0);
  exact_prefix_.assign(dim, 0.0);
}

void FtrlOptimizer::recompute_model() {
  switch (variant_) {
    case Variant::kFtrl:
      theta_ = ftrl_argmin(last_sum_, config_.lambda, config_.constraint,
                           config_.ball_radius);
      break;
    case Variant::kFtrlMomentum: {
      momentum_ = momentum_prev_;
      scale(momentum_, config_.momentum);
      add_in_place(momentum_, last_sum_);
      theta_ = ftrl_momentum_argmin(momentum_, anchor_, config_.lambda,
                                    config_.constraint, config_.ball_radius);
      break;
    }
    case Variant::kComposite:
      theta_ = ftrl_composite_argmin(
          last_sum_,
          static_cast<double>(global_step_) * config_.l1_weight,
          config_.lambda);
      break;
  }
}

const Vector& FtrlOptimizer::step(const Vector& raw_gradient) {
  if (raw_gradient.size() != dim_) {
    throw InvalidInputError("FtrlOptimizer::step: dimension mismatch");
  }
  const Vector g = clip(raw_gradient, config_.clip_norm);
  ++global_step_;
  ++block_step_;
  tree_->add(block_step_, g);
  add_in_place(exact_prefix_, g);

  momentum_prev_ = momentum_;
  last_sum_ = carry_;
  add_in_place(last_sum_, tree_->estimate(block_step_).value);
  recompute_model();
  return theta_;
}

std::size_t FtrlOptimizer::complete_current_block() {
  const std::size_t target = tree_->capacity();
  const std::size_t added = target - tree_->leaf_count();
  if (added == 0) return 0;
  tree_->complete(target);
  if (block_step_ > 0) {
    last_sum_ = carry_;
    add_in_place(last_sum_, tree_->estimate(target).value);
    recompute_model();
  }
  return added;
}

void FtrlOptimizer::restart_tree(std::size_t horizon) {
  carry_ = last_sum_;
  tree_ = std::make_unique<AggregationTree>(
      horizon, config_.noise_scale, config_.clip_norm, dim_,
      config_.seed + global_step_ + 1, config_.estimator);
  block_step_ = 0;
}

EquivalenceResult equivalence_check(const std::vector<Datum>& stream,
                                    const LossOracle& oracle,
                                    const OptimizerConfig& config) {
  if (config.constraint != Constraint::kUnconstrained) {
    throw UnsupportedError(
        "equivalence_check: the correspondence holds on the unconstrained "
        "domain");
  }
  if (stream.empty()) {
    throw InvalidInputError("equivalence_check: empty stream");
  }
  const std::size_t dim = stream.front().x.size();
  const double eta = 1.0 / config.lambda;

  // DP-FTRL pass, recording the tree noise after every step.
  FtrlOptimizer ftrl(Variant::kFtrl, config, dim, stream.size());
  std::vector<Vector> ftrl_models;  // theta_2 .. theta_{n+1}
  std::vector<Vector> noises;       // b_1 .. b_n
  ftrl_models.reserve(stream.size());
  for (const Datum& d : stream) {
    const Vector g = oracle.grad(ftrl.model(), d);
    ftrl.step(g);
    ftrl_models.push_back(ftrl.model());
    noises.push_back(ftrl.last_noise());
  }

  // Noisy-SGD replay with a_t = b_t - b_{t-1}.
  Vector theta_sgd(dim, 0.0);
  double max_dev = 0.0;
  double max_norm = 0.0;
  Vector prev_noise(dim, 0.0);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const Vector g = clip(oracle.grad(theta_sgd, stream[t]), config.clip_norm);
    const Vector a = sub(noises[t], prev_noise);
    theta_sgd = noisy_sgd_step(theta_sgd, g, a, eta);
    prev_noise = noises[t];
    max_dev = std::max(max_dev, l2_dist(theta_sgd, ftrl_models[t]));
    max_norm = std::max(max_norm, l2_norm(ftrl_models[t]));
  }

  EquivalenceResult result;
  result.max_deviation = max_dev;
  result.max_relative_deviation = max_norm > 0 ? max_dev / max_norm : max_dev;
  return result;
}

}  // namespace dpftrl
