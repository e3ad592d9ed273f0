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

#ifndef DPFTRL_OPTIMIZER_HPP_
#define DPFTRL_OPTIMIZER_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "dpftrl/loss.hpp"
#include "dpftrl/tree.hpp"
#include "dpftrl/vec.hpp"

namespace dpftrl {

enum class Constraint { kUnconstrained, kBall };

enum class Variant { kFtrl, kFtrlMomentum, kComposite };

struct OptimizerConfig {
  double lambda = 1.0;       // regularization; the learning rate is 1/lambda
  double momentum = 0.0;     // gamma in [0, 1]
  double clip_norm = 1.0;    // L
  double noise_scale = 0.0;  // sigma
  Constraint constraint = Constraint::kUnconstrained;
  double ball_radius = 0.0;  // mu, used when constraint == kBall
  double l1_weight = 0.0;    // per-step l1 regularizer weight
  std::size_t batch_size = 1;
  Estimator estimator = Estimator::kHonaker;
  std::uint64_t seed = 0;
};

// Closed-form minimizers for the per-step objectives. Pure functions.

// argmin <s, theta> + lambda/2 ||theta||^2 (radial cap inside the ball).
Vector ftrl_argmin(const Vector& s, double lambda, Constraint constraint,
                   double ball_radius);

// argmin <v, theta> + lambda/2 ||theta - anchor||^2. The objective completes
// to a perfect square, so the ball case is the exact Euclidean projection of
// anchor - v/lambda.
Vector ftrl_momentum_argmin(const Vector& v, const Vector& anchor,
                            double lambda, Constraint constraint,
                            double ball_radius);

// argmin <s, theta> + l1_total ||theta||_1 + lambda/2 ||theta||^2,
// coordinate-wise soft threshold. Unconstrained domain only.
Vector ftrl_composite_argmin(const Vector& s, double l1_total, double lambda);

// theta - eta * (gradient + noise); the unconstrained noisy-SGD update.
Vector noisy_sgd_step(const Vector& theta, const Vector& gradient,
                      const Vector& noise, double eta);

// Mean of per-example clipped gradients over a batch of nominal size q;
// missing entries count as bottom (zero gradient). The per-example
// sensitivity of the result is clip_norm / q.
Vector minibatch_gradient(const std::vector<Datum>& batch, const Vector& theta,
                          const LossOracle& oracle, double clip_norm,
                          std::size_t q);

// DP-FTRL over a gradient stream: clips each incoming gradient, adds it to
// the aggregation tree, reads a noisy prefix sum, and emits the argmin of
// the regularized linearized objective. Tree restarts keep the last
// prefix-sum estimate as a frozen carry so the model keeps training across
// blocks. Single-owner during stepping.
class FtrlOptimizer {
 public:
  FtrlOptimizer(Variant variant, const OptimizerConfig& config,
                std::size_t dim, std::size_t horizon);

  const Vector& model() const { return theta_; }
  std::size_t step_count() const { return global_step_; }
  const OptimizerConfig& config() const { return config_; }
  AggregationTree& tree() { return *tree_; }

  // Consumes one (possibly unclipped) gradient; returns the new model.
  const Vector& step(const Vector& raw_gradient);

  // Appends virtual zero steps until the current tree is a complete power
  // of two and recomputes the model from the completed estimate. Returns
  // the number of virtual steps added.
  std::size_t complete_current_block();

  // Freezes the current prefix-sum estimate and starts a fresh tree sized
  // for `horizon` further steps.
  void restart_tree(std::size_t horizon);

  // Diagnostics: the latest prefix-sum estimate and its tree noise
  // b_t = s_t - sum of clipped gradients.
  const Vector& last_sum_estimate() const { return last_sum_; }
  Vector last_noise() const { return sub(last_sum_, exact_prefix_); }

 private:
  void recompute_model();

  Variant variant_;
  OptimizerConfig config_;
  std::size_t dim_;
  std::unique_ptr<AggregationTree> tree_;
  std::size_t global_step_ = 0;
  std::size_t block_step_ = 0;
  Vector theta_;
  Vector anchor_;       // theta_0 for the momentum variant (the initial model)
  Vector momentum_;     // v_t
  Vector momentum_prev_;
  Vector carry_;        // frozen estimate from earlier tree blocks
  Vector last_sum_;     // s_t = carry + current-tree estimate
  Vector exact_prefix_; // sum of clipped gradients (diagnostic only)
};

struct EquivalenceResult {
  double max_deviation = 0.0;  // max over t of ||theta_sgd_t - theta_ftrl_t||
  double max_relative_deviation = 0.0;  // scaled by the largest ||theta_t||
};

// Runs DP-FTRL on the stream, then replays the equivalent noisy-SGD with
// per-step noise a_t = b_t - b_{t-1} and eta = 1/lambda, and reports the
// largest trajectory gap. Requires the unconstrained domain.
EquivalenceResult equivalence_check(const std::vector<Datum>& stream,
                                    const LossOracle& oracle,
                                    const OptimizerConfig& config);

}  // namespace dpftrl

#endif  // DPFTRL_OPTIMIZER_HPP_
