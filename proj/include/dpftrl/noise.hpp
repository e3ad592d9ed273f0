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

#ifndef DPFTRL_NOISE_HPP_
#define DPFTRL_NOISE_HPP_

#include <cstdint>
#include <vector>

#include "dpftrl/vec.hpp"

namespace dpftrl {

// Counter-based Gaussian source: the draw for a given (seed, stream_index)
// is a pure function of those two values, so callers can materialize noise
// lazily (e.g. per tree node) and replay runs exactly. Distinct stream
// indices give independent samples. Thread-safe; all methods are const.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // dim i.i.d. N(0, std^2) entries; std == 0 yields the zero vector.
  Vector sample(std::uint64_t stream_index, std::size_t dim, double std) const;

  // A symmetric side x side Gaussian matrix (row-major, flattened): entries
  // on and above the diagonal are i.i.d. N(0, std^2) and mirrored below.
  Vector sample_symmetric(std::uint64_t stream_index, std::size_t side,
                          double std) const;

 private:
  std::uint64_t seed_;
};

}  // namespace dpftrl

#endif  // DPFTRL_NOISE_HPP_
