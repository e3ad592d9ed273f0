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

#include "dpftrl/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpftrl/errors.hpp"

namespace dpftrl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 1.0)) throw InvalidInputError("rdp: alpha must be > 1");
}

void check_sigma(double sigma) {
  if (sigma < 0) throw InvalidInputError("rdp: sigma must be >= 0");
}

}  // namespace

RdpCurve::RdpCurve(std::vector<double> alphas, std::vector<double> epsilons)
    : alphas_(std::move(alphas)), epsilons_(std::move(epsilons)) {
  if (alphas_.size() != epsilons_.size()) {
    throw InvalidInputError("RdpCurve: alpha/epsilon size mismatch");
  }
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (!(alphas_[i] > 1.0)) throw InvalidInputError("RdpCurve: alpha <= 1");
    if (i > 0 && alphas_[i] <= alphas_[i - 1]) {
      throw InvalidInputError("RdpCurve: orders must increase");
    }
    if (epsilons_[i] < 0) throw InvalidInputError("RdpCurve: epsilon < 0");
  }
}

RdpCurve RdpCurve::gaussian(double rate, const std::vector<double>& alphas) {
  std::vector<double> eps(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) eps[i] = rate * alphas[i];
  return RdpCurve(alphas, std::move(eps));
}

double RdpCurve::at(double alpha) const {
  if (empty()) throw InvalidInputError("RdpCurve::at: empty curve");
  if (alphas_.size() == 1) {
    return epsilons_[0] * alpha / alphas_[0];
  }
  std::size_t hi = 1;
  while (hi + 1 < alphas_.size() && alphas_[hi] < alpha) ++hi;
  const std::size_t lo = hi - 1;
  const double slope = (epsilons_[hi] - epsilons_[lo]) /
                       (alphas_[hi] - alphas_[lo]);
  return epsilons_[lo] + slope * (alpha - alphas_[lo]);
}

const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g = {1.25, 1.5, 1.75};
    for (double a = 2.0; a <= 64.0; a += 0.5) g.push_back(a);
    g.push_back(128.0);
    g.push_back(256.0);
    return g;
  }();
  return grid;
}

std::size_t ceil_log2(std::size_t x) {
  if (x < 1) throw InvalidInputError("ceil_log2: x must be >= 1");
  std::size_t k = 0;
  std::size_t pow = 1;
  while (pow < x) {
    pow <<= 1;
    ++k;
  }
  return k;
}

double rdp_single_tree(std::size_t n, double sigma, double alpha) {
  if (n < 1) throw InvalidInputError("rdp_single_tree: n must be >= 1");
  check_alpha(alpha);
  check_sigma(sigma);
  if (sigma == 0) return kInf;
  return alpha * static_cast<double>(ceil_log2(n + 1)) / (2.0 * sigma * sigma);
}

double rdp_tree_restarts(std::size_t n, double sigma, std::size_t epochs,
                         double alpha) {
  if (epochs < 1) throw InvalidInputError("rdp_tree_restarts: epochs >= 1");
  return static_cast<double>(epochs) * rdp_single_tree(n, sigma, alpha);
}

double rdp_ls_trees(std::size_t n, double sigma, double alpha) {
  if (n < 1) throw InvalidInputError("rdp_ls_trees: n must be >= 1");
  check_alpha(alpha);
  check_sigma(sigma);
  if (sigma == 0) return kInf;
  return alpha * static_cast<double>(ceil_log2(n)) / (sigma * sigma);
}

double rdp_from_sensitivity(double zeta, double sigma, double alpha) {
  if (zeta < 0) throw InvalidInputError("rdp_from_sensitivity: zeta >= 0");
  check_alpha(alpha);
  check_sigma(sigma);
  if (zeta == 0) return 0.0;
  if (sigma == 0) return kInf;
  return alpha * zeta / (2.0 * sigma * sigma);
}

RdpCurve single_tree_curve(std::size_t n, double sigma, std::size_t epochs) {
  if (epochs < 1) throw InvalidInputError("single_tree_curve: epochs >= 1");
  if (n < 1) throw InvalidInputError("single_tree_curve: n must be >= 1");
  check_sigma(sigma);
  const double rate =
      sigma == 0 ? kInf
                 : static_cast<double>(epochs) *
                       static_cast<double>(ceil_log2(n + 1)) /
                       (2.0 * sigma * sigma);
  return RdpCurve::gaussian(rate, default_alpha_grid());
}

RdpCurve ls_trees_curve(std::size_t n, double sigma) {
  if (n < 1) throw InvalidInputError("ls_trees_curve: n must be >= 1");
  check_sigma(sigma);
  const double rate =
      sigma == 0 ? kInf
                 : static_cast<double>(ceil_log2(n)) / (sigma * sigma);
  return RdpCurve::gaussian(rate, default_alpha_grid());
}

RdpCurve sensitivity_curve(double zeta, double sigma) {
  if (zeta < 0) throw InvalidInputError("sensitivity_curve: zeta >= 0");
  check_sigma(sigma);
  double rate;
  if (zeta == 0) {
    rate = 0.0;
  } else if (sigma == 0) {
    rate = kInf;
  } else {
    rate = zeta / (2.0 * sigma * sigma);
  }
  return RdpCurve::gaussian(rate, default_alpha_grid());
}

RdpCurve compose_rdp(const std::vector<RdpCurve>& curves) {
  if (curves.empty()) {
    return RdpCurve::gaussian(0.0, default_alpha_grid());
  }
  // Union grid; each curve is evaluated by chord interpolation off-grid.
  std::vector<double> grid;
  for (const RdpCurve& c : curves) {
    if (c.empty()) throw InvalidInputError("compose_rdp: empty curve");
    grid.insert(grid.end(), c.alphas().begin(), c.alphas().end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> eps(grid.size(), 0.0);
  for (const RdpCurve& c : curves) {
    for (std::size_t i = 0; i < grid.size(); ++i) eps[i] += c.at(grid[i]);
  }
  for (double& e : eps) {
    if (std::isnan(e)) e = kInf;
  }
  return RdpCurve(std::move(grid), std::move(eps));
}

DpConversion rdp_to_dp(const RdpCurve& curve, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("rdp_to_dp: delta must be in (0, 1)");
  }
  if (curve.empty()) throw InvalidInputError("rdp_to_dp: empty curve");
  const double log_inv_delta = std::log(1.0 / delta);
  DpConversion best{kInf, 0.0};
  for (std::size_t i = 0; i < curve.alphas().size(); ++i) {
    const double alpha = curve.alphas()[i];
    const double candidate =
        curve.epsilons()[i] + log_inv_delta / (alpha - 1.0);
    if (candidate < best.epsilon) best = {candidate, alpha};
  }
  return best;
}

double calibrate_noise(const PrivacyParams& target,
                       const std::function<RdpCurve(double)>& curve_at) {
  if (!(target.epsilon > 0) || !std::isfinite(target.epsilon)) {
    throw InvalidInputError("calibrate_noise: epsilon must be positive");
  }
  if (!(target.delta > 0.0 && target.delta < 1.0)) {
    throw InvalidInputError("calibrate_noise: delta must be in (0, 1)");
  }
  const auto converted = [&](double sigma) {
    return rdp_to_dp(curve_at(sigma), target.delta).epsilon;
  };

  // Exponential search for a bracket [lo, hi] with converted(lo) > target
  // and converted(hi) <= target.
  double hi = 1.0;
  int guard = 0;
  while (converted(hi) > target.epsilon) {
    hi *= 2.0;
    if (++guard > 200) {
      throw CalibrationError(
          "calibrate_noise: target unreachable (epsilon too small for the "
          "conversion's order grid)");
    }
  }
  double lo = hi / 2.0;
  guard = 0;
  while (lo > 0 && converted(lo) <= target.epsilon) {
    hi = lo;
    lo /= 2.0;
    if (++guard > 200) {
      lo = 0.0;
      break;
    }
  }

  // Bisection well past the 1e-6 relative tolerance so the forward pass
  // reproduces the target essentially exactly.
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (converted(mid) <= target.epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double calibrate_noise_single_tree(const PrivacyParams& target, std::size_t n,
                                   std::size_t epochs) {
  return calibrate_noise(target, [n, epochs](double sigma) {
    return single_tree_curve(n, sigma, epochs);
  });
}

double calibrate_noise_sensitivity(const PrivacyParams& target, double zeta) {
  return calibrate_noise(
      target, [zeta](double sigma) { return sensitivity_curve(zeta, sigma); });
}

}  // namespace dpftrl
