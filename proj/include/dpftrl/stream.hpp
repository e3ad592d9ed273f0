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

#ifndef DPFTRL_STREAM_HPP_
#define DPFTRL_STREAM_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dpftrl/loss.hpp"
#include "dpftrl/vec.hpp"

namespace dpftrl {

enum class Task { kLinearRegression, kLogistic, kLinearLoss };

Task parse_task(const std::string& name);

struct StreamSpec {
  std::size_t dim = 2;
  std::size_t length = 100;
  double feature_bound = 1.0;   // L: every ||x_i|| <= L
  double theta_star_norm = 0.5; // ||theta*||; 0 gives the zero comparator
  double label_noise = 0.0;
  std::uint64_t seed = 0;
  // When nonzero, features and labels draw from this seed while theta*
  // still derives from `seed` — a held-out stream from the same
  // distribution.
  std::uint64_t feature_seed = 0;
  Task task = Task::kLinearRegression;
};

struct SyntheticStream {
  StreamSpec spec;
  Vector theta_star;
  std::vector<Datum> data;
};

// Deterministic in the seed. Features are clipped to the L ball; regression
// labels are <theta*, x> plus Gaussian label noise, clipped to [-1, 1];
// logistic labels are noisy signs in {-1, +1}; linear-loss data are the
// feature vectors themselves.
SyntheticStream gen_stream(const StreamSpec& spec);

// The loss oracle matching a task.
std::unique_ptr<LossOracle> make_oracle(Task task);

}  // namespace dpftrl

#endif  // DPFTRL_STREAM_HPP_
