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

#include "dpftrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>

#include "dpftrl/accounting.hpp"
#include "dpftrl/errors.hpp"
#include "dpftrl/least_squares.hpp"
#include "dpftrl/noise.hpp"
#include "dpftrl/tree.hpp"

namespace dpftrl {
namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

double batch_loss(const LossOracle& oracle, const Vector& theta,
                  const std::vector<Datum>& batch) {
  double sum = 0.0;
  std::size_t real = 0;
  for (const Datum& d : batch) {
    if (d.bottom) continue;
    sum += oracle.loss(theta, d);
    ++real;
  }
  return real == 0 ? 0.0 : sum / static_cast<double>(real);
}

// Batches for one restart block: the examples are shuffled once per block
// and grouped into fixed batches of size q (short tail padded with bottom),
// visited in the same order on every epoch of the block.
std::vector<std::vector<Datum>> make_batches(const SyntheticStream& stream,
                                             std::size_t q,
                                             std::uint64_t shuffle_seed,
                                             bool shuffle) {
  std::vector<std::size_t> perm(stream.data.size());
  std::iota(perm.begin(), perm.end(), 0);
  if (shuffle) {
    std::mt19937_64 rng(shuffle_seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  const std::size_t num_batches = ceil_div(perm.size(), q);
  std::vector<std::vector<Datum>> batches(num_batches);
  for (std::size_t b = 0; b < num_batches; ++b) {
    for (std::size_t i = b * q; i < std::min((b + 1) * q, perm.size()); ++i) {
      batches[b].push_back(stream.data[perm[i]]);
    }
    while (batches[b].size() < q) {
      batches[b].push_back(Datum::make_bottom(stream.spec.dim));
    }
  }
  return batches;
}

// Running privacy state: finished blocks contribute their frozen zeta,
// the open block is tracked online from the participation order.
struct Accountant {
  double finished_zeta = 0.0;
  OnlineOrderSensitivity open;
  double sigma_eff = 0.0;  // sigma * q for tree variants
  double delta = 1e-5;

  double epsilon() const {
    const RdpCurve curve =
        sensitivity_curve(finished_zeta + open.zeta(), sigma_eff);
    return rdp_to_dp(curve, delta).epsilon;
  }
  void close_block() {
    finished_zeta += open.zeta();
    open = OnlineOrderSensitivity();
  }
};

}  // namespace

RunVariant parse_variant(const std::string& name) {
  if (name == "ftrl") return RunVariant::kFtrl;
  if (name == "ftrlm") return RunVariant::kFtrlMomentum;
  if (name == "composite") return RunVariant::kComposite;
  if (name == "ls") return RunVariant::kLs;
  if (name == "sgd") return RunVariant::kSgd;
  throw InvalidInputError("unknown variant: " + name);
}

RunResult run_online(const SyntheticStream& stream, const LossOracle& oracle,
                     RunVariant variant, const RunConfig& config) {
  const std::size_t dim = stream.spec.dim;
  for (const Datum& d : stream.data) {
    if (d.x.size() != dim) {
      throw InvalidInputError("run_online: dimension mismatch in stream");
    }
  }
  if (config.epochs < 1) {
    throw InvalidInputError("run_online: epochs must be >= 1");
  }
  const std::size_t q = config.opt.batch_size;
  if (variant == RunVariant::kLs && q != 1) {
    throw UnsupportedError(
        "run_online: the least-squares variant is per-sample (batch_size 1)");
  }
  const bool has_restarts =
      config.restart_every != 0 || !config.restart_schedule.empty();
  if (variant == RunVariant::kLs && (has_restarts || config.epochs != 1)) {
    throw UnsupportedError(
        "run_online: the least-squares variant is single-pass without "
        "restarts");
  }
  // Restarting reshuffles batches, which would break the per-epoch parallel
  // composition the SGD baseline is accounted with.
  if (variant == RunVariant::kSgd && has_restarts) {
    throw UnsupportedError(
        "run_online: restarts apply to the tree-aggregation variants only");
  }

  const std::size_t batches_per_epoch = ceil_div(stream.data.size(), q);
  const std::size_t total_steps = config.epochs * batches_per_epoch;

  // Block lengths: explicit schedule first, then restart_every, then one
  // block covering the whole run.
  std::size_t schedule_pos = 0;
  const auto next_block_len = [&](std::size_t remaining) {
    std::size_t len = remaining;
    if (!config.restart_schedule.empty()) {
      if (schedule_pos < config.restart_schedule.size()) {
        len = config.restart_schedule[schedule_pos++];
        if (len == 0) throw InvalidInputError("run_online: zero-length block");
      }
    } else if (config.restart_every != 0) {
      len = config.restart_every;
    }
    return std::min(len, remaining);
  };

  // Optimizer state.
  std::unique_ptr<FtrlOptimizer> ftrl;
  std::unique_ptr<LsFtrlOptimizer> ls;
  Vector theta_sgd(dim, 0.0);
  const double eta = 1.0 / config.opt.lambda;
  NoiseSource sgd_noise(config.opt.seed ^ 0x5f375a86ULL);

  std::size_t current_block_len = next_block_len(total_steps);
  const std::size_t first_block = current_block_len;
  switch (variant) {
    case RunVariant::kFtrl:
      ftrl = std::make_unique<FtrlOptimizer>(Variant::kFtrl, config.opt, dim,
                                             first_block);
      break;
    case RunVariant::kFtrlMomentum:
      ftrl = std::make_unique<FtrlOptimizer>(Variant::kFtrlMomentum,
                                             config.opt, dim, first_block);
      break;
    case RunVariant::kComposite:
      ftrl = std::make_unique<FtrlOptimizer>(Variant::kComposite, config.opt,
                                             dim, first_block);
      break;
    case RunVariant::kLs: {
      LsConfig lc;
      lc.lambda = config.opt.lambda;
      lc.feature_bound = config.opt.clip_norm;
      lc.noise_scale = config.opt.noise_scale;
      lc.constraint = config.opt.constraint;
      lc.ball_radius = config.opt.ball_radius;
      lc.estimator = config.opt.estimator;
      lc.seed = config.opt.seed;
      ls = std::make_unique<LsFtrlOptimizer>(lc, dim, total_steps);
      break;
    }
    case RunVariant::kSgd:
      break;
  }

  Accountant accountant;
  accountant.sigma_eff = config.opt.noise_scale * static_cast<double>(q);
  accountant.delta = config.delta;

  RunResult result;
  result.trajectory.reserve(total_steps);
  result.records.reserve(total_steps);

  std::vector<std::vector<Datum>> batches =
      make_batches(stream, q, config.opt.seed, /*shuffle=*/false);
  double loss_sum = 0.0;
  double comparator_sum = 0.0;

  std::size_t step_in_block = 0;
  std::size_t block_index = 0;
  for (std::size_t t = 1; t <= total_steps; ++t) {
    const std::size_t batch_id = (t - 1) % batches_per_epoch;  // 0-based
    const std::vector<Datum>& batch = batches[batch_id];

    // Emit the prediction model, then consume the batch.
    const Vector theta = variant == RunVariant::kSgd
                             ? theta_sgd
                             : (ls ? ls->model() : ftrl->model());
    result.trajectory.push_back(theta);
    const double loss = batch_loss(oracle, theta, batch);
    const double comparator_loss =
        batch_loss(oracle, stream.theta_star, batch);
    loss_sum += loss;
    comparator_sum += comparator_loss;

    switch (variant) {
      case RunVariant::kFtrl:
      case RunVariant::kFtrlMomentum:
      case RunVariant::kComposite: {
        const Vector grad = minibatch_gradient(batch, theta, oracle,
                                               config.opt.clip_norm, q);
        ftrl->step(grad);
        break;
      }
      case RunVariant::kLs:
        ls->step(batch.front().x, batch.front().y);
        break;
      case RunVariant::kSgd: {
        const Vector grad = minibatch_gradient(batch, theta, oracle,
                                               config.opt.clip_norm, q);
        Vector noise = sgd_noise.sample(
            t, dim, config.opt.clip_norm * config.opt.noise_scale);
        scale(noise, 1.0 / static_cast<double>(q));
        theta_sgd = noisy_sgd_step(theta_sgd, grad, noise, eta);
        break;
      }
    }

    result.participation_order.push_back(
        OrderToken::sample(static_cast<std::int64_t>(batch_id + 1)));
    accountant.open.append(result.participation_order.back());
    ++step_in_block;

    const bool block_ends =
        step_in_block == current_block_len || t == total_steps;
    if (block_ends && ftrl && config.complete_tree) {
      const std::size_t added = ftrl->complete_current_block();
      for (std::size_t i = 0; i < added; ++i) {
        result.participation_order.push_back(OrderToken::virtual_step());
        accountant.open.append(result.participation_order.back());
      }
    }

    StepRecord record;
    record.t = t;
    record.loss = loss;
    record.avg_regret =
        (loss_sum - comparator_sum) / static_cast<double>(t);
    switch (variant) {
      case RunVariant::kLs:
        record.epsilon =
            rdp_to_dp(ls_trees_curve(t, config.opt.noise_scale), config.delta)
                .epsilon;
        break;
      case RunVariant::kSgd: {
        const std::size_t epochs_started = ceil_div(t, batches_per_epoch);
        record.epsilon =
            rdp_to_dp(sensitivity_curve(static_cast<double>(epochs_started),
                                        config.opt.noise_scale),
                      config.delta)
                .epsilon;
        break;
      }
      default:
        record.epsilon = accountant.epsilon();
    }
    result.records.push_back(record);

    if (block_ends && t < total_steps) {
      accountant.close_block();
      step_in_block = 0;
      ++block_index;
      current_block_len = next_block_len(total_steps - t);
      if (ftrl) ftrl->restart_tree(current_block_len);
      // Reshuffle into fresh batches for the new block.
      batches = make_batches(stream, q,
                             config.opt.seed + 0x9E3779B9ULL * block_index,
                             /*shuffle=*/true);
    }
  }

  result.final_regret = result.records.back().avg_regret;
  result.averaged_model = online_to_batch(result.trajectory);
  return result;
}

double compute_regret(const std::vector<Vector>& trajectory,
                      const std::vector<std::vector<Datum>>& batches,
                      const LossOracle& oracle, const Vector& theta_star) {
  if (trajectory.size() != batches.size()) {
    throw InvalidInputError("compute_regret: trajectory/stream length mismatch");
  }
  if (trajectory.empty()) return 0.0;
  double diff = 0.0;
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    diff += batch_loss(oracle, trajectory[t], batches[t]) -
            batch_loss(oracle, theta_star, batches[t]);
  }
  return diff / static_cast<double>(trajectory.size());
}

double compute_regret(const std::vector<Vector>& trajectory,
                      const std::vector<Datum>& stream,
                      const LossOracle& oracle, const Vector& theta_star) {
  std::vector<std::vector<Datum>> batches;
  batches.reserve(stream.size());
  for (const Datum& d : stream) batches.push_back({d});
  return compute_regret(trajectory, batches, oracle, theta_star);
}

Vector online_to_batch(const std::vector<Vector>& trajectory) {
  if (trajectory.empty()) {
    throw InvalidInputError("online_to_batch: empty trajectory");
  }
  Vector mean(trajectory.front().size(), 0.0);
  for (const Vector& theta : trajectory) add_in_place(mean, theta);
  scale(mean, 1.0 / static_cast<double>(trajectory.size()));
  return mean;
}

double average_loss(const Vector& model, const std::vector<Datum>& data,
                    const LossOracle& oracle) {
  if (data.empty()) throw InvalidInputError("average_loss: empty data");
  double sum = 0.0;
  for (const Datum& d : data) sum += oracle.loss(model, d);
  return sum / static_cast<double>(data.size());
}

double regret_bound_general(const BoundParams& params) {
  if (!(params.beta > 0 && params.beta < 1)) {
    throw InvalidInputError("regret_bound_general: beta must be in (0, 1)");
  }
  if (!(params.lambda > 0) || !(params.clip_norm > 0) || params.n < 1 ||
      params.p < 1 || params.sigma < 0 || params.theta_star_norm < 0) {
    throw InvalidInputError("regret_bound_general: bad parameters");
  }
  const double levels = static_cast<double>(ceil_log2(params.n));
  const double log_term =
      std::log(static_cast<double>(params.n) / params.beta);
  const double noise_term =
      params.clip_norm * params.sigma *
      std::sqrt(static_cast<double>(params.p) * levels * log_term);
  const double first =
      (noise_term + params.clip_norm * params.clip_norm) / params.lambda;
  const double second = params.lambda /
                        (2.0 * static_cast<double>(params.n)) *
                        params.theta_star_norm * params.theta_star_norm;
  return first + second;
}

std::vector<double> lambda_grid() {
  std::vector<double> grid;
  for (int i = -3; i <= 3; ++i) {
    const double base = std::pow(10.0, i);
    grid.push_back(base);
    grid.push_back(2.0 * base);
    grid.push_back(5.0 * base);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

std::string format_csv(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_noise_table(std::size_t n, double sigma, const std::string& path) {
  if (n < 1) throw InvalidInputError("write_noise_table: n must be >= 1");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path);
  const std::size_t capacity = std::size_t{1} << ceil_log2(n);
  out << "# dpsgd column is the unamplified per-epoch-composed baseline;"
         " amplified accounting is out of scope\n";
  out << "t,nu_vanilla,nu_honaker,dpftrl_noise_std,dpsgd_noise_std\n";
  for (std::size_t t = 1; t <= n; ++t) {
    const double nu_v = noise_variance_multiplier(t, capacity,
                                                  Estimator::kVanilla);
    const double nu_h = noise_variance_multiplier(t, capacity,
                                                  Estimator::kHonaker);
    out << t << ',' << format_csv(nu_v) << ',' << format_csv(nu_h) << ','
        << format_csv(sigma * std::sqrt(nu_v)) << ','
        << format_csv(sigma * std::sqrt(static_cast<double>(t))) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_run_csv(const RunResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path);
  out << "t,loss,regret,epsilon\n";
  for (const StepRecord& r : result.records) {
    out << r.t << ',' << format_csv(r.loss) << ',' << format_csv(r.avg_regret)
        << ',' << format_csv(r.epsilon) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace dpftrl
