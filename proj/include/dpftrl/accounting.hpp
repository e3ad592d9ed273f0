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

#ifndef DPFTRL_ACCOUNTING_HPP_
#define DPFTRL_ACCOUNTING_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace dpftrl {

struct PrivacyParams {
  double epsilon;  // > 0, finite
  double delta;    // in (0, 1)
};

// Renyi-DP curve: epsilon as a function of the order alpha. Orders are
// strictly increasing and > 1. Gaussian-mechanism accounting produces
// curves linear in alpha, epsilon(alpha) = rate * alpha.
class RdpCurve {
 public:
  RdpCurve() = default;
  RdpCurve(std::vector<double> alphas, std::vector<double> epsilons);

  // rate * alpha at every grid order.
  static RdpCurve gaussian(double rate, const std::vector<double>& alphas);

  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& epsilons() const { return epsilons_; }
  bool empty() const { return alphas_.empty(); }

  // epsilon at an arbitrary order: chord interpolation between grid points
  // (an upper bound for convex curves, exact for Gaussian rates); the last
  // segment's slope extends beyond the grid.
  double at(double alpha) const;

 private:
  std::vector<double> alphas_;
  std::vector<double> epsilons_;
};

// Orders used by default: {1.25, 1.5, 1.75} plus 2..64 in steps of 0.5 plus
// {128, 256}.
const std::vector<double>& default_alpha_grid();

// Smallest k with 2^k >= x (x >= 1).
std::size_t ceil_log2(std::size_t x);

// Tree over n steps, one participation per sample:
// alpha * ceil(lg(n + 1)) / (2 sigma^2). sigma == 0 yields +infinity.
double rdp_single_tree(std::size_t n, double sigma, double alpha);

// One fresh tree per epoch, composed over E epochs (per-sample sensitivity
// normalized into sigma): E * rdp_single_tree(n, sigma, alpha).
double rdp_tree_restarts(std::size_t n, double sigma, std::size_t epochs,
                         double alpha);

// Bias + covariance double tree for least squares:
// alpha * ceil(lg n) / sigma^2. (Note the level count differs from the
// single-tree rate, which uses ceil(lg(n + 1)); both are implemented as
// stated.)
double rdp_ls_trees(std::size_t n, double sigma, double alpha);

// Gaussian release with squared l2 sensitivity zeta and per-node noise
// sigma: alpha * zeta / (2 sigma^2).
double rdp_from_sensitivity(double zeta, double sigma, double alpha);

RdpCurve single_tree_curve(std::size_t n, double sigma, std::size_t epochs = 1);
RdpCurve ls_trees_curve(std::size_t n, double sigma);
RdpCurve sensitivity_curve(double zeta, double sigma);

// Pointwise sum over the union grid; an empty list gives the identity
// (all-zero) curve.
RdpCurve compose_rdp(const std::vector<RdpCurve>& curves);

struct DpConversion {
  double epsilon;  // +infinity if every candidate is infinite
  double alpha;    // arg-min order (0 when epsilon is infinite)
};

// Classic conversion: min over the grid of eps(alpha) + ln(1/delta)/(alpha-1).
DpConversion rdp_to_dp(const RdpCurve& curve, double delta);

// Smallest sigma (relative tolerance 1e-6, bisection) whose accounting curve
// converts to at most target.epsilon. curve_at must be non-increasing in
// sigma; throws CalibrationError when the target cannot be bracketed.
double calibrate_noise(const PrivacyParams& target,
                       const std::function<RdpCurve(double)>& curve_at);

// Convenience calibrators for the two accounting modes.
double calibrate_noise_single_tree(const PrivacyParams& target, std::size_t n,
                                   std::size_t epochs = 1);
double calibrate_noise_sensitivity(const PrivacyParams& target, double zeta);

}  // namespace dpftrl

#endif  // DPFTRL_ACCOUNTING_HPP_
