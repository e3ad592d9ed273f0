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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpftrl/accounting.hpp"
#include "dpftrl/errors.hpp"
#include "dpftrl/harness.hpp"
#include "dpftrl/optimizer.hpp"
#include "dpftrl/sensitivity.hpp"
#include "dpftrl/stream.hpp"
#include "dpftrl/tree.hpp"

namespace {

using dpftrl::format_csv;

std::string fmt(double v) { return format_csv(v); }

void print_report(const dpftrl::SensitivityReport& report) {
  std::printf("zeta=%s\n", fmt(report.zeta).c_str());
  for (const auto& [id, rho] : report.per_id) {
    std::printf("rho[%lld]=%s\n", static_cast<long long>(id),
                fmt(rho).c_str());
  }
}

// Plain key=value overrides: each pair becomes a '--key value' pair injected
// before the command-line tokens, so explicit flags win on conflict.
std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dpftrl::IoError("cannot open config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    // Single --key=value tokens work for flags as well as options.
    tokens.push_back(value.empty() ? "--" + key : "--" + key + "=" + value);
  }
  return tokens;
}

struct TrainArgs {
  std::string task = "linreg";
  std::string variant = "ftrl";
  std::size_t n = 1000;
  std::size_t p = 5;
  double sigma = 0.0;
  double lambda = 1.0;
  double clip = 1.0;
  double gamma = 0.9;
  double l1_weight = 0.0;
  double mu = 0.0;
  double label_noise = 0.1;
  double theta_star_norm = 0.5;
  double delta = 1e-5;
  std::size_t epochs = 1;
  std::size_t batch_size = 1;
  std::size_t restart_every = 0;
  bool complete_tree = false;
  bool grid = false;
  std::string estimator = "honaker";
  std::uint64_t seed = 0;
  std::string out = "train.csv";
};

int run_train(const TrainArgs& args) {
  dpftrl::StreamSpec spec;
  spec.dim = args.p;
  spec.length = args.n;
  spec.feature_bound = args.clip;
  spec.theta_star_norm = args.theta_star_norm;
  spec.label_noise = args.label_noise;
  spec.seed = args.seed;
  spec.task = dpftrl::parse_task(args.task);
  const dpftrl::SyntheticStream stream = dpftrl::gen_stream(spec);
  const auto oracle = dpftrl::make_oracle(spec.task);
  const dpftrl::RunVariant variant = dpftrl::parse_variant(args.variant);

  dpftrl::RunConfig config;
  config.opt.lambda = args.lambda;
  config.opt.momentum = args.gamma;
  config.opt.clip_norm = args.clip;
  config.opt.noise_scale = args.sigma;
  config.opt.l1_weight = args.l1_weight;
  config.opt.batch_size = args.batch_size;
  config.opt.seed = args.seed;
  config.opt.estimator = args.estimator == "vanilla"
                             ? dpftrl::Estimator::kVanilla
                             : dpftrl::Estimator::kHonaker;
  if (args.mu > 0) {
    config.opt.constraint = dpftrl::Constraint::kBall;
    config.opt.ball_radius = args.mu;
  }
  config.epochs = args.epochs;
  config.restart_every = args.restart_every;
  config.complete_tree = args.complete_tree;
  config.delta = args.delta;

  dpftrl::RunResult result;
  if (args.grid) {
    // Learning-rate sweep; the run with the best final regret is kept.
    double best_regret = 0.0;
    double best_lambda = 0.0;
    bool first = true;
    for (double lambda : dpftrl::lambda_grid()) {
      dpftrl::RunConfig swept = config;
      swept.opt.lambda = lambda;
      dpftrl::RunResult candidate =
          dpftrl::run_online(stream, *oracle, variant, swept);
      if (first || candidate.final_regret < best_regret) {
        best_regret = candidate.final_regret;
        best_lambda = lambda;
        result = std::move(candidate);
        first = false;
      }
    }
    std::printf("lambda=%s\n", fmt(best_lambda).c_str());
  } else {
    result = dpftrl::run_online(stream, *oracle, variant, config);
  }
  dpftrl::write_run_csv(result, args.out);
  std::printf("steps=%zu final_regret=%s epsilon=%s out=%s\n",
              result.records.size(), fmt(result.final_regret).c_str(),
              fmt(result.records.back().epsilon).c_str(), args.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DP-FTRL private online learning toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  // account
  auto* account = app.add_subcommand(
      "account", "Convert tree/restart/ls/sensitivity accounting to epsilon");
  std::string acc_mode = "tree";
  std::size_t acc_n = 1, acc_E = 1, acc_xi = 0;
  double acc_sigma = 1.0, acc_delta = 1e-5;
  std::string acc_order;
  account->add_option("--mode", acc_mode)
      ->check(CLI::IsMember({"tree", "restarts", "ls", "sensitivity"}));
  account->add_option("--n", acc_n);
  account->add_option("--epochs", acc_E);
  account->add_option("--sigma", acc_sigma);
  account->add_option("--delta", acc_delta);
  account->add_option("--xi", acc_xi);
  account->add_option("--order", acc_order);

  // sensitivity
  auto* sens = app.add_subcommand(
      "sensitivity", "Squared sensitivity of a participation pattern");
  std::string sens_method = "dp";
  std::size_t sens_T = 1, sens_E = 1, sens_xi = 0;
  std::string sens_order;
  sens->add_option("--method", sens_method)
      ->check(CLI::IsMember({"levelwise", "dp", "order"}));
  sens->add_option("--T", sens_T);
  sens->add_option("--E", sens_E);
  sens->add_option("--xi", sens_xi);
  sens->add_option("--order", sens_order);

  // calibrate
  auto* cal = app.add_subcommand("calibrate",
                                 "Smallest sigma meeting a privacy target");
  double cal_eps = 1.0, cal_delta = 1e-5;
  std::size_t cal_n = 1, cal_epochs = 1;
  cal->add_option("--epsilon", cal_eps);
  cal->add_option("--delta", cal_delta);
  cal->add_option("--n", cal_n);
  cal->add_option("--epochs", cal_epochs);

  // train
  auto* train = app.add_subcommand("train", "Online training on a synthetic "
                                            "stream; writes a CSV log");
  TrainArgs targs;
  train->add_option("--task", targs.task)
      ->check(CLI::IsMember({"linreg", "logistic", "linear"}));
  train->add_option("--variant", targs.variant)
      ->check(CLI::IsMember({"ftrl", "ftrlm", "composite", "ls", "sgd"}));
  train->add_option("--n", targs.n);
  train->add_option("--p", targs.p);
  train->add_option("--sigma", targs.sigma);
  train->add_option("--lambda", targs.lambda);
  train->add_option("--clip", targs.clip);
  train->add_option("--gamma", targs.gamma);
  train->add_option("--l1-weight", targs.l1_weight);
  train->add_option("--mu", targs.mu);
  train->add_option("--label-noise", targs.label_noise);
  train->add_option("--theta-star-norm", targs.theta_star_norm);
  train->add_option("--delta", targs.delta);
  train->add_option("--epochs", targs.epochs);
  train->add_option("--batch-size", targs.batch_size);
  train->add_option("--restart-every", targs.restart_every);
  train->add_flag("--complete-tree", targs.complete_tree);
  train->add_flag("--grid", targs.grid);
  train->add_option("--estimator", targs.estimator)
      ->check(CLI::IsMember({"vanilla", "honaker"}));
  train->add_option("--seed", targs.seed);
  train->add_option("--out", targs.out);

  // noise-table
  auto* table = app.add_subcommand("noise-table",
                                   "Per-step noise multiplier comparison");
  std::size_t tbl_n = 32;
  double tbl_sigma = 1.0;
  std::string tbl_out = "noise_table.csv";
  table->add_option("--n", tbl_n);
  table->add_option("--sigma", tbl_sigma);
  table->add_option("--out", tbl_out);

  // equivalence
  auto* equiv = app.add_subcommand(
      "equivalence", "Trajectory gap between DP-FTRL and matched noisy-SGD");
  std::size_t eq_n = 100, eq_p = 10;
  double eq_sigma = 1.0, eq_lambda = 10.0;
  std::uint64_t eq_seed = 0;
  equiv->add_option("--n", eq_n);
  equiv->add_option("--p", eq_p);
  equiv->add_option("--sigma", eq_sigma);
  equiv->add_option("--lambda", eq_lambda);
  equiv->add_option("--seed", eq_seed);

  // Config file: plain key=value lines; command-line flags win on conflict.
  std::string config_path;
  app.add_option("--config", config_path,
                 "key=value file with defaults for the subcommand");

  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
  }

  try {
    if (!config_path.empty()) {
      if (args.empty()) throw dpftrl::InvalidInputError("missing subcommand");
      const std::vector<std::string> overrides =
          config_file_tokens(config_path);
      args.insert(args.begin() + 1, overrides.begin(), overrides.end());
    }
    // CLI11 consumes tokens in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    if (account->parsed()) {
      dpftrl::RdpCurve curve;
      if (acc_mode == "tree") {
        curve = dpftrl::single_tree_curve(acc_n, acc_sigma, 1);
      } else if (acc_mode == "restarts") {
        curve = dpftrl::single_tree_curve(acc_n, acc_sigma, acc_E);
      } else if (acc_mode == "ls") {
        curve = dpftrl::ls_trees_curve(acc_n, acc_sigma);
      } else {
        dpftrl::SensitivityReport report;
        if (!acc_order.empty()) {
          report =
              dpftrl::sensitivity_given_order(dpftrl::read_order_file(acc_order));
        } else {
          report = dpftrl::sensitivity_dp(acc_n, acc_E, acc_xi);
        }
        print_report(report);
        curve = dpftrl::sensitivity_curve(report.zeta, acc_sigma);
      }
      const dpftrl::DpConversion dp = dpftrl::rdp_to_dp(curve, acc_delta);
      std::printf("epsilon=%s alpha=%s\n", fmt(dp.epsilon).c_str(),
                  fmt(dp.alpha).c_str());
    } else if (sens->parsed()) {
      dpftrl::SensitivityReport report;
      if (sens_method == "levelwise") {
        report = dpftrl::sensitivity_level_wise(sens_T, sens_E, sens_xi);
      } else if (sens_method == "dp") {
        report = dpftrl::sensitivity_dp(sens_T, sens_E, sens_xi);
      } else {
        if (sens_order.empty()) {
          throw dpftrl::InvalidInputError("--method order needs --order FILE");
        }
        report =
            dpftrl::sensitivity_given_order(dpftrl::read_order_file(sens_order));
      }
      print_report(report);
    } else if (cal->parsed()) {
      const double sigma = dpftrl::calibrate_noise_single_tree(
          {cal_eps, cal_delta}, cal_n, cal_epochs);
      std::printf("sigma=%s\n", fmt(sigma).c_str());
    } else if (train->parsed()) {
      return run_train(targs);
    } else if (table->parsed()) {
      dpftrl::write_noise_table(tbl_n, tbl_sigma, tbl_out);
      std::printf("out=%s\n", tbl_out.c_str());
    } else if (equiv->parsed()) {
      dpftrl::StreamSpec spec;
      spec.dim = eq_p;
      spec.length = eq_n;
      spec.seed = eq_seed;
      spec.task = dpftrl::Task::kLinearRegression;
      const dpftrl::SyntheticStream stream = dpftrl::gen_stream(spec);
      const auto oracle = dpftrl::make_oracle(spec.task);
      dpftrl::OptimizerConfig config;
      config.lambda = eq_lambda;
      config.noise_scale = eq_sigma;
      config.seed = eq_seed;
      const dpftrl::EquivalenceResult result =
          dpftrl::equivalence_check(stream.data, *oracle, config);
      std::printf("max_deviation=%s max_relative_deviation=%s\n",
                  fmt(result.max_deviation).c_str(),
                  fmt(result.max_relative_deviation).c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
