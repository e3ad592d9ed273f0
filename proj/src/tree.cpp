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

#include "dpftrl/tree.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dpftrl/errors.hpp"

namespace dpftrl {
namespace {

constexpr double kClipSlack = 1e-9;

std::size_t next_pow2(std::size_t n) {
  std::size_t c = 1;
  while (c < n) c <<= 1;
  return c;
}

// Variance of the unnormalized combined estimate for a complete block of
// `size` leaves, with unit variance at every node:
//   V(1) = 1,  V(m) = 1 + V(m/2) / 2.
double r_prime_variance(std::size_t size) {
  double v = 1.0;
  for (std::size_t m = 2; m <= size; m <<= 1) v = 1.0 + v / 2.0;
  return v;
}

double block_normalizer(std::size_t size) {
  return 2.0 - 1.0 / static_cast<double>(size);
}

// Dyadic decomposition of [1..t]: block sizes are the set bits of t, most
// significant first.
std::vector<std::size_t> block_sizes(std::size_t t) {
  std::vector<std::size_t> sizes;
  for (int b = std::bit_width(t) - 1; b >= 0; --b) {
    if (t & (std::size_t{1} << b)) sizes.push_back(std::size_t{1} << b);
  }
  return sizes;
}

}  // namespace

double noise_variance_multiplier(std::size_t t, std::size_t capacity,
                                 Estimator mode) {
  if (t < 1 || t > capacity) {
    throw InvalidInputError("noise_variance_multiplier: t out of range");
  }
  if (mode == Estimator::kVanilla) {
    return static_cast<double>(std::popcount(t));
  }
  double nu = 0.0;
  for (std::size_t size : block_sizes(t)) {
    const double norm = block_normalizer(size);
    nu += r_prime_variance(size) / (norm * norm);
  }
  return nu;
}

AggregationTree::AggregationTree(std::size_t n, double sigma, double clip_norm,
                                 std::size_t dim, std::uint64_t seed,
                                 Estimator mode, std::size_t symmetric_side)
    : capacity_(0),
      dim_(dim),
      sigma_(sigma),
      clip_norm_(clip_norm),
      mode_(mode),
      symmetric_side_(symmetric_side),
      noise_(seed) {
  if (n < 1) throw InvalidInputError("AggregationTree: n must be >= 1");
  if (dim < 1) throw InvalidInputError("AggregationTree: dim must be >= 1");
  if (sigma < 0) throw InvalidInputError("AggregationTree: sigma must be >= 0");
  if (clip_norm <= 0) {
    throw InvalidInputError("AggregationTree: clip_norm must be > 0");
  }
  if (symmetric_side != 0 && symmetric_side * symmetric_side != dim) {
    throw InvalidInputError("AggregationTree: dim must equal side^2");
  }
  capacity_ = next_pow2(n);
}

std::size_t AggregationTree::node_index(std::size_t first_leaf,
                                        std::size_t size) const {
  // Heap order: root = 1, the level of size-`size` subtrees starts at
  // capacity / size.
  return capacity_ / size + (first_leaf - 1) / size;
}

const Vector* AggregationTree::node_data(std::size_t index) const {
  auto it = data_.find(index);
  return it == data_.end() ? nullptr : &it->second;
}

Vector AggregationTree::node_value(std::size_t first_leaf,
                                   std::size_t size) const {
  const std::size_t index = node_index(first_leaf, size);
  Vector value =
      symmetric_side_ == 0
          ? noise_.sample(index, dim_, clip_norm_ * sigma_)
          : noise_.sample_symmetric(index, symmetric_side_,
                                    clip_norm_ * sigma_);
  if (const Vector* d = node_data(index)) add_in_place(value, *d);
  return value;
}

void AggregationTree::add(std::size_t t, const Vector& v) {
  if (t != leaf_count_ + 1) {
    throw OrderingError("AggregationTree::add: leaf " + std::to_string(t) +
                        " out of order (expected " +
                        std::to_string(leaf_count_ + 1) + ")");
  }
  if (t > capacity_) throw OrderingError("AggregationTree::add: tree is full");
  if (v.size() != dim_) {
    throw InvalidInputError("AggregationTree::add: dimension mismatch");
  }
  require_finite(v, "AggregationTree::add");
  if (l2_norm(v) > clip_norm_ * (1.0 + kClipSlack)) {
    throw SensitivityViolationError(
        "AggregationTree::add: vector norm exceeds the clipping norm");
  }

  std::size_t index = capacity_ + t - 1;
  while (index >= 1) {
    auto [it, inserted] = data_.try_emplace(index, Vector(dim_, 0.0));
    add_in_place(it->second, v);
    if (index == 1) break;
    index /= 2;
  }
  leaf_count_ = t;

  // Binary-counter maintenance of the finished-block stack: the new leaf is
  // a block of size 1; equal-sized neighbors merge into their parent. A
  // block's r-prime is frozen once no future leaf can touch its subtree.
  finished_.push_back(Block{t, 1, node_value(t, 1)});
  while (finished_.size() >= 2 &&
         finished_[finished_.size() - 2].size == finished_.back().size) {
    Block right = std::move(finished_.back());
    finished_.pop_back();
    Block left = std::move(finished_.back());
    finished_.pop_back();
    Block parent;
    parent.first_leaf = left.first_leaf;
    parent.size = left.size * 2;
    parent.r_prime = node_value(parent.first_leaf, parent.size);
    for (std::size_t i = 0; i < dim_; ++i) {
      parent.r_prime[i] += (left.r_prime[i] + right.r_prime[i]) / 2.0;
    }
    finished_.push_back(std::move(parent));
  }
}

void AggregationTree::complete(std::size_t up_to) {
  if (up_to < leaf_count_ || up_to > capacity_) {
    throw InvalidInputError("AggregationTree::complete: bad target leaf count");
  }
  const Vector zero(dim_, 0.0);
  while (leaf_count_ < up_to) {
    virtual_leaves_.push_back(leaf_count_ + 1);
    add(leaf_count_ + 1, zero);
  }
}

PrefixSumEstimate AggregationTree::estimate(std::size_t t) const {
  return mode_ == Estimator::kVanilla ? sum(t) : sum_reduced_variance(t);
}

PrefixSumEstimate AggregationTree::sum(std::size_t t) const {
  if (t < 1 || t > leaf_count_) {
    throw InvalidInputError("AggregationTree::sum: t out of range");
  }
  PrefixSumEstimate out;
  out.value.assign(dim_, 0.0);
  std::size_t first = 1;
  for (std::size_t size : block_sizes(t)) {
    add_in_place(out.value, node_value(first, size));
    first += size;
  }
  out.variance_multiplier = noise_variance_multiplier(t, capacity_,
                                                      Estimator::kVanilla);
  return out;
}

// r' for the block [first_leaf : first_leaf + size - 1]:
//   r'(leaf)  = node value
//   r'(block) = node value + (r'(left half) + r'(right half)) / 2
// The normalized estimate r' / (2 - 1/size) is exact when sigma == 0.
Vector AggregationTree::r_prime(std::size_t first_leaf,
                                std::size_t size) const {
  Vector value = node_value(first_leaf, size);
  if (size > 1) {
    const Vector left = r_prime(first_leaf, size / 2);
    const Vector right = r_prime(first_leaf + size / 2, size / 2);
    for (std::size_t i = 0; i < dim_; ++i) {
      value[i] += (left[i] + right[i]) / 2.0;
    }
  }
  return value;
}

PrefixSumEstimate AggregationTree::sum_reduced_variance(std::size_t t) const {
  if (t < 1 || t > leaf_count_) {
    throw InvalidInputError(
        "AggregationTree::sum_reduced_variance: t out of range");
  }
  PrefixSumEstimate out;
  out.value.assign(dim_, 0.0);
  if (t == leaf_count_) {
    for (const Block& block : finished_) {
      axpy(1.0 / block_normalizer(block.size), block.r_prime, out.value);
    }
  } else {
    std::size_t first = 1;
    for (std::size_t size : block_sizes(t)) {
      axpy(1.0 / block_normalizer(size), r_prime(first, size), out.value);
      first += size;
    }
  }
  out.variance_multiplier = noise_variance_multiplier(t, capacity_,
                                                      Estimator::kHonaker);
  return out;
}

}  // namespace dpftrl
