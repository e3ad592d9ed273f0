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

#ifndef DPFTRL_HARNESS_HPP_
#define DPFTRL_HARNESS_HPP_

#include <string>
#include <vector>

#include "dpftrl/optimizer.hpp"
#include "dpftrl/sensitivity.hpp"
#include "dpftrl/stream.hpp"
#include "dpftrl/vec.hpp"

namespace dpftrl {

enum class RunVariant { kFtrl, kFtrlMomentum, kComposite, kLs, kSgd };

RunVariant parse_variant(const std::string& name);

struct RunConfig {
  OptimizerConfig opt;
  std::size_t epochs = 1;
  // Steps per aggregation-tree block; 0 means a single tree for the run.
  std::size_t restart_every = 0;
  // Explicit steps-per-block schedule; overrides restart_every when
  // nonempty. Steps beyond the listed blocks form one final block.
  std::vector<std::size_t> restart_schedule;
  // Complete each tree to a power of two with virtual steps before restart.
  bool complete_tree = false;
  double delta = 1e-5;  // for the running epsilon column
};

struct StepRecord {
  std::size_t t = 0;
  double loss = 0.0;        // average loss of theta_t on the step's batch
  double avg_regret = 0.0;  // running average regret against theta*
  double epsilon = 0.0;     // converted (epsilon, delta) spent so far
};

struct RunResult {
  // theta_t emitted before batch t is consumed; trajectory[0] is theta_1.
  std::vector<Vector> trajectory;
  std::vector<StepRecord> records;
  std::vector<OrderToken> participation_order;
  double final_regret = 0.0;
  Vector averaged_model;
};

// Online training loop: prediction-then-update over epochs * ceil(n/q)
// steps, with fixed batches within each restart block (reshuffled at block
// boundaries only) and exact per-step privacy accounting from the emitted
// participation order. Blocks need not align with epochs; a mid-epoch
// restart re-partitions the remaining visits under the fresh shuffle while
// the per-block accounting stays exact.
RunResult run_online(const SyntheticStream& stream, const LossOracle& oracle,
                     RunVariant variant, const RunConfig& config);

// Average regret of a trajectory against a fixed comparator, one batch per
// step.
double compute_regret(const std::vector<Vector>& trajectory,
                      const std::vector<std::vector<Datum>>& batches,
                      const LossOracle& oracle, const Vector& theta_star);
// Single-example-per-step convenience overload.
double compute_regret(const std::vector<Vector>& trajectory,
                      const std::vector<Datum>& stream,
                      const LossOracle& oracle, const Vector& theta_star);

// Coordinate-wise mean of the emitted models.
Vector online_to_batch(const std::vector<Vector>& trajectory);

double average_loss(const Vector& model, const std::vector<Datum>& data,
                    const LossOracle& oracle);

struct BoundParams {
  double clip_norm = 1.0;       // L
  double lambda = 1.0;
  double sigma = 0.0;
  std::size_t n = 1;
  std::size_t p = 1;
  double theta_star_norm = 0.0;
  double beta = 0.05;  // failure probability, in (0, 1)
};

// The pre-optimization high-probability regret bound with theta_1 = 0:
//   (L sigma sqrt(p ceil(lg n) ln(n/beta)) + L^2) / lambda
//     + lambda/(2n) * ||theta*||^2.
double regret_bound_general(const BoundParams& params);

// Learning-rate grid {10^i, 2*10^i, 5*10^i} for i in [-3, 3].
std::vector<double> lambda_grid();

// Writes a per-step comparison of noise multipliers and cumulative noise:
// t, vanilla nu, honaker nu, sigma*sqrt(nu) for the tree (units of eta*L),
// and the per-epoch-composed unamplified DP-SGD std sigma*sqrt(t).
void write_noise_table(std::size_t n, double sigma, const std::string& path);

// Writes (t, loss, regret, epsilon) rows; 12 significant digits, LF endings.
void write_run_csv(const RunResult& result, const std::string& path);

// %.12g rendering used for every CSV number.
std::string format_csv(double value);

}  // namespace dpftrl

#endif  // DPFTRL_HARNESS_HPP_
