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

#ifndef DPFTRL_TREE_HPP_
#define DPFTRL_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dpftrl/noise.hpp"
#include "dpftrl/vec.hpp"

namespace dpftrl {

enum class Estimator {
  kVanilla,  // sum the O(log t) nodes selected by the binary representation
  kHonaker,  // variance-reduced combination of all estimates below them
};

// A noisy prefix-sum estimate. variance_multiplier is the per-coordinate
// variance of the additive noise in units of (clip_norm * sigma)^2:
// popcount(t) for the vanilla estimator, and the analytic value of the
// variance-reduction recursion for the Honaker estimator.
struct PrefixSumEstimate {
  Vector value;
  double variance_multiplier = 0.0;
};

// Per-step noise variance multiplier with unit node-noise variance.
double noise_variance_multiplier(std::size_t t, std::size_t capacity,
                                 Estimator mode);

// Binary aggregation tree over a stream of clipped vectors. Leaves are
// 1-based and must be appended strictly in order. Every node of the
// capacity-2^ceil(lg n) tree carries i.i.d. Gaussian noise of per-coordinate
// standard deviation clip_norm * sigma, derived lazily from the seed and the
// node index, so untouched subtrees never materialize.
//
// A tree instance needs exclusive access during add/complete; the sum
// queries are const and may run concurrently with each other.
class AggregationTree {
 public:
  // n >= 1 is the number of planned leaves; capacity rounds up to a power of
  // two. symmetric_side > 0 switches node noise to symmetric matrices of
  // that side (dim must equal side^2).
  AggregationTree(std::size_t n, double sigma, double clip_norm,
                  std::size_t dim, std::uint64_t seed, Estimator mode,
                  std::size_t symmetric_side = 0);

  std::size_t capacity() const { return capacity_; }
  std::size_t leaf_count() const { return leaf_count_; }
  std::size_t dim() const { return dim_; }
  double sigma() const { return sigma_; }
  double clip_norm() const { return clip_norm_; }
  Estimator mode() const { return mode_; }
  const std::vector<std::size_t>& virtual_leaves() const {
    return virtual_leaves_;
  }
  // Number of nodes holding a materialized running sum.
  std::size_t materialized_nodes() const { return data_.size(); }

  // Adds v to every node on the root-to-leaf path of leaf t. Requires
  // t == leaf_count() + 1 and ||v|| <= clip_norm * (1 + 1e-9).
  void add(std::size_t t, const Vector& v);

  // Appends zero-valued virtual leaves until leaf_count() == up_to and
  // records their positions for the privacy accountant.
  void complete(std::size_t up_to);

  // Estimate of the sum of leaves 1..t using the configured estimator.
  PrefixSumEstimate estimate(std::size_t t) const;

  // Vanilla estimator: one noisy node per set bit of t.
  PrefixSumEstimate sum(std::size_t t) const;

  // Variance-reduced estimator: combines, for each selected node, the
  // independent per-level estimates of its subtree. Only nodes whose
  // subtrees lie fully within leaves 1..t are read. Unbiased; exact when
  // sigma == 0.
  PrefixSumEstimate sum_reduced_variance(std::size_t t) const;

 private:
  struct Block {
    std::size_t first_leaf;  // 1-based
    std::size_t size;        // power of two
    Vector r_prime;          // combined estimate, before normalization
  };

  Vector node_value(std::size_t first_leaf, std::size_t size) const;
  Vector r_prime(std::size_t first_leaf, std::size_t size) const;
  std::size_t node_index(std::size_t first_leaf, std::size_t size) const;
  const Vector* node_data(std::size_t index) const;

  std::size_t capacity_;
  std::size_t leaf_count_ = 0;
  std::size_t dim_;
  double sigma_;
  double clip_norm_;
  Estimator mode_;
  std::size_t symmetric_side_;
  NoiseSource noise_;
  std::unordered_map<std::size_t, Vector> data_;
  std::vector<std::size_t> virtual_leaves_;
  // Completed dyadic blocks of [1..leaf_count], largest first; their
  // r-prime values are frozen once formed, giving O(1) amortized
  // variance-reduced sums at the current step.
  std::vector<Block> finished_;
};

}  // namespace dpftrl

#endif  // DPFTRL_TREE_HPP_
