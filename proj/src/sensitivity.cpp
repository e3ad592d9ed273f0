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

#include "dpftrl/sensitivity.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "dpftrl/errors.hpp"

namespace dpftrl {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t next_pow2(std::size_t n) {
  std::size_t c = 1;
  while (c < n) c <<= 1;
  return c;
}

std::size_t floor_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{2} << k) <= n) ++k;
  return k;
}

using Counts = std::vector<std::pair<std::int64_t, std::int64_t>>;

Counts merge_counts(const Counts& a, const Counts& b) {
  Counts out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else if (b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return out;
}

// Exact maximizer of sum c_i^2 over k slots with sum c_i <= E and
// 0 <= c_i <= mu: fill floor(E/mu) slots to the cap, put the remainder in
// one more slot if any is left.
unsigned long long level_contribution(unsigned long long k,
                                      unsigned long long E,
                                      unsigned long long mu) {
  const unsigned long long k_star = std::min(k, E / mu);
  unsigned long long zeta = k_star * mu * mu;
  if (k_star < k) {
    const unsigned long long rest = E - k_star * mu;
    zeta += rest * rest;
  }
  return zeta;
}

struct DpContext {
  std::size_t xi;
  std::size_t T;
  std::size_t budget;
  std::unordered_map<std::uint64_t, double> memo;

  std::uint64_t key(std::size_t c, std::size_t start, std::size_t end,
                    std::size_t size) const {
    const std::uint64_t span = xi + 1;
    return ((static_cast<std::uint64_t>(c) * span + start) * span + end) *
               (T + 1) +
           size;
  }
};

// Maximum of sum over forest nodes of c(node)^2 when placing `contrib`
// participations in a segment of `size` leaves whose first `start` slots
// are blocked and whose trailing separation gap may overflow the segment by
// up to `end` slots. A non-power-of-two segment is the forest of complete
// trees given by its binary representation, largest first.
double dp_value(DpContext& ctx, std::size_t contrib, std::size_t start,
                std::size_t end, std::size_t size) {
  if (start + contrib * (ctx.xi + 1) > size + end) return kNegInf;
  if (contrib == 0) return 0.0;
  if (contrib == 1 && size == 1) return 1.0;
  // size == 1 with contrib >= 2 is always caught by the separation check.

  const std::uint64_t key = ctx.key(contrib, start, end, size);
  if (auto it = ctx.memo.find(key); it != ctx.memo.end()) return it->second;
  if (ctx.memo.size() >= ctx.budget) {
    throw ResourceLimitError("sensitivity_dp: memo budget exceeded");
  }

  const std::size_t k = std::size_t{1} << floor_log2(size - 1);  // largest 2^j < size
  const bool is_pow2 = (size & (size - 1)) == 0;
  double best = kNegInf;
  for (std::size_t i = 0; i <= contrib; ++i) {
    for (std::size_t j = 0; j <= ctx.xi; ++j) {
      const double left = dp_value(ctx, contrib - i, start, j, k);
      if (left == kNegInf) continue;
      const double right = dp_value(ctx, i, j, end, size - k);
      if (right == kNegInf) continue;
      best = std::max(best, left + right);
    }
  }
  double value = best;
  if (is_pow2 && best != kNegInf) {
    value += static_cast<double>(contrib) * static_cast<double>(contrib);
  }
  ctx.memo.emplace(key, value);
  return value;
}

}  // namespace

std::vector<OrderToken> parse_order(const std::vector<std::string>& lines) {
  std::vector<OrderToken> order;
  order.reserve(lines.size());
  for (const std::string& raw : lines) {
    std::string line = raw;
    line.erase(std::remove_if(line.begin(), line.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               line.end());
    if (line.empty()) continue;
    if (line == "*") {
      order.push_back(OrderToken::virtual_step());
      continue;
    }
    std::int64_t id = 0;
    try {
      std::size_t pos = 0;
      id = std::stoll(line, &pos);
      if (pos != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw InvalidInputError("order file: bad token '" + raw + "'");
    }
    if (id <= 0) {
      throw InvalidInputError("order file: identifiers must be positive");
    }
    order.push_back(OrderToken::sample(id));
  }
  return order;
}

std::vector<OrderToken> read_order_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open order file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_order(lines);
}

SensitivityReport sensitivity_level_wise(std::size_t T, std::size_t E,
                                         std::size_t xi) {
  if (T < 1) throw InvalidInputError("sensitivity_level_wise: T must be >= 1");
  const std::size_t capacity = next_pow2(T);
  unsigned long long rho = 0;
  for (std::size_t height = 0; (std::size_t{1} << height) <= capacity;
       ++height) {
    const unsigned long long k = capacity >> height;
    const unsigned long long leaves = std::size_t{1} << height;
    const unsigned long long mu = (leaves + xi) / (xi + 1);  // ceil
    rho += level_contribution(k, E, mu);
  }
  SensitivityReport report;
  report.method = SensitivityMethod::kLevelWise;
  report.zeta = static_cast<double>(rho);
  return report;
}

SensitivityReport sensitivity_dp(std::size_t T, std::size_t E, std::size_t xi,
                                 std::size_t memo_budget) {
  if (T < 1) throw InvalidInputError("sensitivity_dp: T must be >= 1");
  const long double key_span = static_cast<long double>(E + 1) *
                               (xi + 1.0L) * (xi + 1.0L) * (T + 1.0L);
  if (key_span > 9e18L) {
    throw ResourceLimitError("sensitivity_dp: parameter ranges too large");
  }
  DpContext ctx{xi, T, memo_budget, {}};
  double best = 0.0;
  for (std::size_t w = 0; w <= E; ++w) {
    best = std::max(best, dp_value(ctx, w, 0, xi, T));
  }
  SensitivityReport report;
  report.method = SensitivityMethod::kDynamicProgram;
  report.zeta = best;
  return report;
}

SensitivityReport sensitivity_given_order(
    const std::vector<OrderToken>& order) {
  if (order.empty()) {
    throw InvalidInputError("sensitivity_given_order: order is empty");
  }
  std::map<std::int64_t, double> rho;
  // Leaf layer: every non-virtual leaf contributes 1.
  std::vector<Counts> layer;
  layer.reserve(order.size());
  for (const OrderToken& token : order) {
    Counts node;
    if (!token.is_virtual) {
      node.emplace_back(token.id, 1);
      rho[token.id] += 1.0;
    }
    layer.push_back(std::move(node));
  }
  // Upper layers: pairwise concatenation, dropping a trailing odd node.
  const std::size_t num_layers = floor_log2(order.size()) + 1;
  for (std::size_t gamma = 2; gamma <= num_layers; ++gamma) {
    std::vector<Counts> next;
    next.reserve(layer.size() / 2);
    for (std::size_t j = 0; j + 1 < layer.size(); j += 2) {
      Counts node = merge_counts(layer[j], layer[j + 1]);
      for (const auto& [id, c] : node) {
        rho[id] += static_cast<double>(c) * static_cast<double>(c);
      }
      next.push_back(std::move(node));
    }
    layer = std::move(next);
  }
  SensitivityReport report;
  report.method = SensitivityMethod::kGivenOrder;
  report.per_id = std::move(rho);
  for (const auto& [id, value] : report.per_id) {
    report.zeta = std::max(report.zeta, value);
  }
  return report;
}

void OnlineOrderSensitivity::account(const Block& block) {
  for (const auto& [id, c] : block.counts) {
    double& r = rho_[id];
    r += static_cast<double>(c) * static_cast<double>(c);
    zeta_ = std::max(zeta_, r);
  }
}

void OnlineOrderSensitivity::append(const OrderToken& token) {
  Block leaf;
  leaf.size = 1;
  if (!token.is_virtual) leaf.counts.emplace_back(token.id, 1);
  account(leaf);
  stack_.push_back(std::move(leaf));
  while (stack_.size() >= 2 &&
         stack_[stack_.size() - 2].size == stack_.back().size) {
    Block right = std::move(stack_.back());
    stack_.pop_back();
    Block left = std::move(stack_.back());
    stack_.pop_back();
    Block parent;
    parent.size = left.size * 2;
    parent.counts = merge_counts(left.counts, right.counts);
    account(parent);
    stack_.push_back(std::move(parent));
  }
  ++steps_;
}

SensitivityReport OnlineOrderSensitivity::report() const {
  SensitivityReport out;
  out.method = SensitivityMethod::kGivenOrder;
  out.zeta = zeta_;
  out.per_id = rho_;
  return out;
}

}  // namespace dpftrl
