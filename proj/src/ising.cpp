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

#include "isingdyn/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "isingdyn/elimination.hpp"
#include "isingdyn/error.hpp"

namespace isingdyn {

SpinConfig::SpinConfig(std::vector<std::int8_t> spins) : spins_(std::move(spins)) {
  for (auto s : spins_) {
    require(s == 1 || s == -1, "spins must be +1 or -1");
  }
}

SpinConfig SpinConfig::all_plus(std::size_t n) {
  return SpinConfig(std::vector<std::int8_t>(n, 1));
}

SpinConfig SpinConfig::all_minus(std::size_t n) {
  return SpinConfig(std::vector<std::int8_t>(n, -1));
}

SpinConfig SpinConfig::from_index(std::uint64_t index, std::size_t n) {
  require(n <= 63, "configuration index needs n <= 63");
  std::vector<std::int8_t> spins(n);
  for (std::size_t v = 0; v < n; ++v) {
    spins[v] = ((index >> v) & 1U) != 0 ? 1 : -1;
  }
  return SpinConfig(std::move(spins));
}

SpinConfig SpinConfig::from_string(const std::string &text) {
  std::vector<std::int8_t> spins;
  spins.reserve(text.size());
  for (char c : text) {
    if (c == '+') {
      spins.push_back(1);
    } else if (c == '-') {
      spins.push_back(-1);
    } else {
      fail(ErrorKind::Parse, "configuration strings use only '+' and '-'");
    }
  }
  return SpinConfig(std::move(spins));
}

std::uint64_t SpinConfig::index() const {
  require(spins_.size() <= 63, "configuration index needs n <= 63");
  std::uint64_t out = 0;
  for (std::size_t v = 0; v < spins_.size(); ++v) {
    if (spins_[v] > 0) {
      out |= std::uint64_t{1} << v;
    }
  }
  return out;
}

std::string SpinConfig::to_string() const {
  std::string out;
  out.reserve(spins_.size());
  for (auto s : spins_) {
    out.push_back(s > 0 ? '+' : '-');
  }
  return out;
}

bool leq(const SpinConfig &sigma, const SpinConfig &tau) {
  require(sigma.size() == tau.size(), "configurations have different lengths");
  for (std::size_t v = 0; v < sigma.size(); ++v) {
    if (sigma[v] > tau[v]) {
      return false;
    }
  }
  return true;
}

double beta_c(int degree) {
  if (degree <= 2) {
    fail(ErrorKind::InvalidArgument,
         "uniqueness threshold is infinite for degree " + std::to_string(degree));
  }
  return std::atanh(1.0 / (degree - 1));
}

int agreement_sum(const Graph &g, const SpinConfig &sigma) {
  require(sigma.size() == g.num_vertices(), "configuration size does not match graph");
  int sum = 0;
  for (const auto &e : g.edges()) {
    sum += sigma[e.u] * sigma[e.v];
  }
  return sum;
}

double log_weight(const Graph &g, double beta, const SpinConfig &sigma) {
  return beta * agreement_sum(g, sigma);
}

double weight(const Graph &g, double beta, const SpinConfig &sigma) {
  return std::exp(log_weight(g, beta, sigma));
}

GibbsTable gibbs_exact(const Graph &g, double beta) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxGibbsVertices) {
    fail(ErrorKind::SizeLimit, "exact Gibbs table needs n <= " +
                                   std::to_string(kMaxGibbsVertices) + ", got " +
                                   std::to_string(n));
  }
  const std::size_t states = std::size_t{1} << n;
  GibbsTable table;
  table.n = n;
  table.probs.resize(states);
  double top = -INFINITY;
  for (std::size_t s = 0; s < states; ++s) {
    int sum = 0;
    for (const auto &e : g.edges()) {
      bool same = (((s >> e.u) ^ (s >> e.v)) & 1U) == 0;
      sum += same ? 1 : -1;
    }
    table.probs[s] = beta * sum;
    top = std::max(top, table.probs[s]);
  }
  double acc = 0.0;
  for (double lw : table.probs) {
    acc += std::exp(lw - top);
  }
  table.log_z = top + std::log(acc);
  for (double &lw : table.probs) {
    lw = std::exp(lw - table.log_z);
  }
  return table;
}

double conditional_marginal(const Graph &g, double beta, Vertex v, const PartialConfig &boundary) {
  const std::size_t n = g.num_vertices();
  require(boundary.size() == n, "boundary must have one entry per vertex");
  require(v < n, "vertex out of range");
  require(boundary[v] == 0, "conditioned vertex lies in the boundary set");
  VertexSet clamped(n);
  for (Vertex u = 0; u < n; ++u) {
    require(boundary[u] >= -1 && boundary[u] <= 1, "boundary entries must be -1, 0 or +1");
    if (boundary[u] != 0) {
      clamped.insert(u);
    }
  }
  return ClampedMarginal(g, beta, v, clamped).plus_probability(boundary);
}

double UpSet::mass(std::span<const double> distribution) const {
  double total = 0.0;
  for (std::uint32_t c = 0; c < distribution.size(); ++c) {
    if (contains(c)) {
      total += distribution[c];
    }
  }
  return total;
}

bool is_up_set(std::uint32_t members, std::size_t n) {
  const std::uint32_t states = 1U << n;
  for (std::uint32_t c = 0; c < states; ++c) {
    if (((members >> c) & 1U) == 0) {
      continue;
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::uint32_t up = c | (1U << v);
      if (((members >> up) & 1U) == 0) {
        return false;
      }
    }
  }
  return true;
}

std::vector<UpSet> enumerate_up_sets(std::size_t n) {
  if (n > kMaxUpSetVertices) {
    fail(ErrorKind::SizeLimit, "up-set enumeration needs n <= " +
                                   std::to_string(kMaxUpSetVertices));
  }
  const std::uint32_t states = 1U << n;
  const std::uint64_t subsets = std::uint64_t{1} << states;
  std::vector<UpSet> out;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    auto members = static_cast<std::uint32_t>(mask);
    if (is_up_set(members, n)) {
      out.push_back({n, members});
    }
  }
  return out;
}

namespace {

std::size_t vertices_for(std::size_t states) {
  require(states > 0 && std::has_single_bit(states), "distribution size must be a power of two");
  return static_cast<std::size_t>(std::countr_zero(states));
}

} // namespace

bool stochastically_dominates(std::span<const double> nu1, std::span<const double> nu2,
                              double tol) {
  require(nu1.size() == nu2.size(), "distributions have different sizes");
  const std::size_t n = vertices_for(nu1.size());
  auto total = [](std::span<const double> d) {
    double s = 0.0;
    for (double x : d) {
      s += x;
    }
    return s;
  };
  require(std::abs(total(nu1) - 1.0) <= std::max(tol, 1e-9) &&
              std::abs(total(nu2) - 1.0) <= std::max(tol, 1e-9),
          "distributions must be normalized");
  for (const auto &u : enumerate_up_sets(n)) {
    if (u.mass(nu1) < u.mass(nu2) - tol) {
      return false;
    }
  }
  return true;
}

} // namespace isingdyn
