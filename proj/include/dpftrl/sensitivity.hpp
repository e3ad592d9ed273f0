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

#ifndef DPFTRL_SENSITIVITY_HPP_
#define DPFTRL_SENSITIVITY_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dpftrl {

// One step of an explicit participation order: a positive sample/batch
// identifier, or a virtual zero-gradient step that carries no identifier
// and contributes no sensitivity.
struct OrderToken {
  static OrderToken sample(std::int64_t id) { return {id, false}; }
  static OrderToken virtual_step() { return {0, true}; }

  std::int64_t id = 0;
  bool is_virtual = false;
};

// Order-file format: one token per line, either a positive integer
// identifier or the single character '*' for a virtual step.
std::vector<OrderToken> read_order_file(const std::string& path);
std::vector<OrderToken> parse_order(const std::vector<std::string>& lines);

enum class SensitivityMethod { kLevelWise, kDynamicProgram, kGivenOrder };

struct SensitivityReport {
  SensitivityMethod method;
  // Max squared sensitivity over identifiers (or over placements for the
  // constraint-based methods).
  double zeta = 0.0;
  // Per-identifier squared sensitivity; populated for kGivenOrder only.
  std::map<std::int64_t, double> per_id;
};

// Level-by-level upper bound for a tree of capacity 2^ceil(lg T) under the
// (E, xi) participation constraints: each level contributes the maximum of
// sum c_i^2 subject to sum c_i <= E and 0 <= c_i <= ceil(2^height/(xi+1)).
SensitivityReport sensitivity_level_wise(std::size_t T, std::size_t E,
                                         std::size_t xi);

// Exact maximum of sum over tree nodes of c(node)^2 over all placements of
// at most E participations with minimum separation xi, via the memoized
// recursion on (contributions, start offset, end overflow, segment size).
// Throws ResourceLimitError past memo_budget entries.
SensitivityReport sensitivity_dp(std::size_t T, std::size_t E, std::size_t xi,
                                 std::size_t memo_budget = 50'000'000);

// Squared sensitivity of every identifier for an explicit order: layers are
// built by pairwise concatenation (dropping a trailing odd node), each node
// adds count^2 to every identifier it contains, and virtual steps are
// ignored. O(m log m).
SensitivityReport sensitivity_given_order(const std::vector<OrderToken>& order);

// Streaming version of the given-order accountant: appending a step updates
// exactly the dyadic blocks completed at that step, so a training loop can
// read the running zeta after every step at O(log t) amortized cost. The
// final values match sensitivity_given_order on the same prefix.
class OnlineOrderSensitivity {
 public:
  void append(const OrderToken& token);
  std::size_t steps() const { return steps_; }
  double zeta() const { return zeta_; }
  const std::map<std::int64_t, double>& per_id() const { return rho_; }
  SensitivityReport report() const;

 private:
  struct Block {
    std::size_t size;
    // Sorted (id, count) pairs; virtual steps are never stored.
    std::vector<std::pair<std::int64_t, std::int64_t>> counts;
  };

  void account(const Block& block);

  std::size_t steps_ = 0;
  double zeta_ = 0.0;
  std::map<std::int64_t, double> rho_;
  std::vector<Block> stack_;
};

}  // namespace dpftrl

#endif  // DPFTRL_SENSITIVITY_HPP_
