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

#include "dpftrl/noise.hpp"

#include <cmath>
#include <random>

#include "dpftrl/errors.hpp"

namespace dpftrl {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives the per-stream generator seed. mt19937_64 output is fully pinned
// by the standard, and the Box-Muller transform below avoids the
// implementation-defined std::normal_distribution, so samples are
// byte-identical across platforms.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_index) {
  return splitmix64(seed ^ splitmix64(stream_index + 0x9E3779B97F4A7C15ULL));
}

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa in (0, 1]; never 0 so log() is safe.
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

void fill_gaussian(std::mt19937_64& rng, double std, Vector& out) {
  std::size_t i = 0;
  while (i < out.size()) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[i++] = std * r * std::cos(kTwoPi * u2);
    if (i < out.size()) out[i++] = std * r * std::sin(kTwoPi * u2);
  }
}

}  // namespace

Vector NoiseSource::sample(std::uint64_t stream_index, std::size_t dim,
                           double std) const {
  if (std < 0) throw InvalidInputError("NoiseSource: std must be >= 0");
  Vector out(dim, 0.0);
  if (std == 0.0 || dim == 0) return out;
  std::mt19937_64 rng(stream_key(seed_, stream_index));
  fill_gaussian(rng, std, out);
  return out;
}

Vector NoiseSource::sample_symmetric(std::uint64_t stream_index,
                                     std::size_t side, double std) const {
  if (std < 0) throw InvalidInputError("NoiseSource: std must be >= 0");
  Vector out(side * side, 0.0);
  if (std == 0.0 || side == 0) return out;
  std::mt19937_64 rng(stream_key(seed_, stream_index));
  Vector upper(side * (side + 1) / 2, 0.0);
  fill_gaussian(rng, std, upper);
  std::size_t k = 0;
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = i; j < side; ++j) {
      out[i * side + j] = upper[k];
      out[j * side + i] = upper[k];
      ++k;
    }
  }
  return out;
}

}  // namespace dpftrl
