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

#include "dpftrl/stream.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dpftrl/errors.hpp"
#include "dpftrl/noise.hpp"

namespace dpftrl {

Task parse_task(const std::string& name) {
  if (name == "linreg") return Task::kLinearRegression;
  if (name == "logistic") return Task::kLogistic;
  if (name == "linear") return Task::kLinearLoss;
  throw InvalidInputError("unknown task: " + name);
}

SyntheticStream gen_stream(const StreamSpec& spec) {
  if (spec.length < 1 || spec.dim < 1) {
    throw InvalidInputError("gen_stream: length and dim must be >= 1");
  }
  if (!(spec.feature_bound > 0)) {
    throw InvalidInputError("gen_stream: feature bound must be > 0");
  }
  SyntheticStream stream;
  stream.spec = spec;

  // Separate noise streams keep theta*, features, and labels independent.
  NoiseSource model_source(spec.seed);
  stream.theta_star = model_source.sample(0, spec.dim, 1.0);
  const double norm = l2_norm(stream.theta_star);
  if (spec.theta_star_norm > 0 && norm > 0) {
    scale(stream.theta_star, spec.theta_star_norm / norm);
  } else {
    stream.theta_star.assign(spec.dim, 0.0);
  }

  NoiseSource source(spec.feature_seed != 0 ? spec.feature_seed : spec.seed);
  stream.data.reserve(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i) {
    Datum d;
    // Raw Gaussian features normalized to sit near the boundary, then
    // clipped so ||x|| <= L holds exactly.
    d.x = source.sample(1 + 2 * i, spec.dim, 1.0);
    const double xnorm = l2_norm(d.x);
    if (xnorm > 0) scale(d.x, spec.feature_bound / xnorm);
    d.x = clip(d.x, spec.feature_bound);

    const double label_noise =
        spec.label_noise > 0 ? source.sample(2 + 2 * i, 1, spec.label_noise)[0]
                             : 0.0;
    switch (spec.task) {
      case Task::kLinearRegression: {
        const double y = dot(stream.theta_star, d.x) + label_noise;
        d.y = std::clamp(y, -1.0, 1.0);
        break;
      }
      case Task::kLogistic: {
        const double margin = dot(stream.theta_star, d.x) + label_noise;
        d.y = margin >= 0 ? 1.0 : -1.0;
        break;
      }
      case Task::kLinearLoss:
        d.y = 0.0;
        break;
    }
    stream.data.push_back(std::move(d));
  }
  return stream;
}

std::unique_ptr<LossOracle> make_oracle(Task task) {
  switch (task) {
    case Task::kLinearRegression:
      return std::make_unique<SquaredErrorLoss>();
    case Task::kLogistic:
      return std::make_unique<LogisticLoss>();
    case Task::kLinearLoss:
      return std::make_unique<LinearLoss>();
  }
  throw InvalidInputError("gen_stream: bad task");
}

}  // namespace dpftrl
