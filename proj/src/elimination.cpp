/*
 * Copyright (C) 2026 The isingdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "isingdyn/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "isingdyn/error.hpp"

namespace isingdyn {

namespace {

struct Factor {
  std::vector<std::uint32_t> scope; // sorted local variables
  std::vector<double> table;        // bit i of the index is scope[i]; 1 = '+'
};

void normalize(Factor &f) {
  double top = *std::max_element(f.table.begin(), f.table.end());
  if (top > 0.0) {
    for (double &x : f.table) {
      x /= top;
    }
  }
}

/// Multiplies every factor mentioning `var` and sums `var` out.
Factor eliminate(std::vector<Factor> &factors, std::uint32_t var) {
  std::vector<Factor> touching;
  for (auto it = factors.begin(); it != factors.end();) {
    if (std::binary_search(it->scope.begin(), it->scope.end(), var)) {
      touching.push_back(std::move(*it));
      it = factors.erase(it);
    } else {
      ++it;
    }
  }
  std::vector<std::uint32_t> joint{var};
  for (const auto &f : touching) {
    joint.insert(joint.end(), f.scope.begin(), f.scope.end());
  }
  std::sort(joint.begin(), joint.end());
  joint.erase(std::unique(joint.begin(), joint.end()), joint.end());

  auto pos_of = [&](std::uint32_t x) {
    return static_cast<std::uint32_t>(std::lower_bound(joint.begin(), joint.end(), x) - joint.begin());
  };
  std::vector<std::vector<std::uint32_t>> positions;
  for (const auto &f : touching) {
    std::vector<std::uint32_t> p;
    for (auto x : f.scope) {
      p.push_back(pos_of(x));
    }
    positions.push_back(std::move(p));
  }
  const std::uint32_t var_pos = pos_of(var);

  Factor out;
  for (auto x : joint) {
    if (x != var) {
      out.scope.push_back(x);
    }
  }
  out.table.assign(std::size_t{1} << out.scope.size(), 0.0);
  const std::size_t states = std::size_t{1} << joint.size();
  for (std::size_t a = 0; a < states; ++a) {
    double value = 1.0;
    for (std::size_t k = 0; k < touching.size(); ++k) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < positions[k].size(); ++i) {
        idx |= ((a >> positions[k][i]) & 1U) << i;
      }
      value *= touching[k].table[idx];
    }
    std::size_t low = a & ((std::size_t{1} << var_pos) - 1);
    std::size_t reduced = ((a >> (var_pos + 1)) << var_pos) | low;
    out.table[reduced] += value;
  }
  normalize(out);
  return out;
}

} // namespace

ClampedMarginal::ClampedMarginal(const Graph &g, double beta, Vertex target,
                                 const VertexSet &clamped)
    : beta_(beta) {
  const std::size_t n = g.num_vertices();
  require(target < n, "target vertex out of range");
  require(!clamped.contains(target), "target vertex is clamped");

  std::vector<std::int32_t> local(n, -1);
  std::queue<Vertex> frontier;
  frontier.push(target);
  local[target] = 0;
  region_.push_back(target);
  while (!frontier.empty()) {
    Vertex x = frontier.front();
    frontier.pop();
    for (const auto &inc : g.incident(x)) {
      Vertex y = inc.neighbor;
      if (!clamped.contains(y) && local[y] < 0) {
        local[y] = static_cast<std::int32_t>(region_.size());
        region_.push_back(y);
        frontier.push(y);
      }
    }
  }

  std::vector<std::set<std::uint32_t>> interaction(region_.size());
  for (const auto &e : g.edges()) {
    std::int32_t lu = local[e.u];
    std::int32_t lv = local[e.v];
    if (lu >= 0 && lv >= 0) {
      pairs_.push_back({static_cast<std::uint32_t>(lu), static_cast<std::uint32_t>(lv)});
      interaction[lu].insert(lv);
      interaction[lv].insert(lu);
    } else if (lu >= 0 && clamped.contains(e.v)) {
      fields_.push_back({static_cast<std::uint32_t>(lu), e.v});
    } else if (lv >= 0 && clamped.contains(e.u)) {
      fields_.push_back({static_cast<std::uint32_t>(lv), e.u});
    }
  }

  // Greedy min-degree order on the interaction graph, target last.
  std::vector<bool> gone(region_.size(), false);
  for (std::size_t round = 1; round < region_.size(); ++round) {
    std::uint32_t best = 0;
    std::size_t best_degree = SIZE_MAX;
    for (std::uint32_t x = 1; x < region_.size(); ++x) {
      if (!gone[x] && interaction[x].size() < best_degree) {
        best = x;
        best_degree = interaction[x].size();
      }
    }
    width_ = std::max(width_, best_degree);
    if (width_ > kMaxEliminationWidth) {
      fail(ErrorKind::SizeLimit, "conditional marginal needs an elimination factor over " +
                                     std::to_string(width_) + " free vertices (limit " +
                                     std::to_string(kMaxEliminationWidth) + ")");
    }
    std::vector<std::uint32_t> nbrs(interaction[best].begin(), interaction[best].end());
    for (auto a : nbrs) {
      interaction[a].erase(best);
      for (auto b : nbrs) {
        if (a != b) {
          interaction[a].insert(b);
        }
      }
    }
    interaction[best].clear();
    gone[best] = true;
    plan_.push_back(best);
  }
}

double ClampedMarginal::plus_probability(std::span<const std::int8_t> spins) const {
  std::vector<double> field(region_.size(), 0.0);
  for (const auto &f : fields_) {
    field[f.local] += spins[f.clamped];
  }
  std::vector<Factor> factors;
  factors.reserve(region_.size() + pairs_.size());
  for (std::uint32_t x = 0; x < region_.size(); ++x) {
    // Shifted by the larger exponent so the table stays in (0, 1].
    double h = std::abs(beta_ * field[x]);
    double plus = std::exp(beta_ * field[x] - h);
    double minus = std::exp(-beta_ * field[x] - h);
    factors.push_back({{x}, {minus, plus}});
  }
  const double disagree = std::exp(-2.0 * beta_);
  for (const auto &pr : pairs_) {
    auto [a, b] = std::minmax(pr.a, pr.b);
    factors.push_back({{a, b}, {1.0, disagree, disagree, 1.0}});
  }
  for (auto var : plan_) {
    factors.push_back(eliminate(factors, var));
  }
  double minus = 1.0;
  double plus = 1.0;
  for (const auto &f : factors) {
    if (f.scope.size() == 1) {
      minus *= f.table[0];
      plus *= f.table[1];
    }
  }
  return plus / (plus + minus);
}

} // namespace isingdyn
