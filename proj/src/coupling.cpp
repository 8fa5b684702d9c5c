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

#include "isingdyn/coupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "isingdyn/error.hpp"

namespace isingdyn {

void grand_step_iv(const Graph &g, double beta, std::span<SpinConfig> states,
                   const StepRandomness &shared, const VertexSet &a) {
  for (auto &x : states) {
    x = iv_step(g, beta, x, shared, a);
  }
}

void grand_step_msw(const Graph &g, double beta, std::span<SpinConfig> states,
                    const StepRandomness &shared, const VertexSet &a) {
  for (auto &x : states) {
    x = msw_step_alt(g, beta, x, shared, a);
  }
}

namespace {

/// mu(v = + | spins off {v} ∪ rest), summing over the spins of `rest`.
double plus_marginalizing(const Graph &g, double beta, const SpinConfig &sigma, Vertex v,
                          std::span<const Vertex> rest) {
  std::vector<Vertex> vars{v};
  vars.insert(vars.end(), rest.begin(), rest.end());
  auto slot = [&vars](Vertex x) -> int {
    auto it = std::find(vars.begin(), vars.end(), x);
    return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
  };
  std::vector<int> field(vars.size(), 0);
  std::vector<std::pair<int, int>> inner;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (const auto &inc : g.incident(vars[i])) {
      int j = slot(inc.neighbor);
      if (j < 0) {
        field[i] += sigma[inc.neighbor];
      } else if (static_cast<std::size_t>(j) > i) {
        inner.emplace_back(static_cast<int>(i), j);
      }
    }
  }
  const std::size_t states = std::size_t{1} << vars.size();
  std::vector<double> lw(states);
  double top = -INFINITY;
  for (std::size_t s = 0; s < states; ++s) {
    int sum = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      sum += ((s >> i) & 1U) != 0 ? field[i] : -field[i];
    }
    for (const auto &[i, j] : inner) {
      sum += ((((s >> i) ^ (s >> j)) & 1U) == 0) ? 1 : -1;
    }
    lw[s] = beta * sum;
    top = std::max(top, lw[s]);
  }
  double plus = 0.0;
  double total = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    double w = std::exp(lw[s] - top);
    total += w;
    if ((s & 1U) != 0) {
      plus += w;
    }
  }
  return plus / total;
}

} // namespace

void grand_step_block(const Graph &g, double beta, std::span<SpinConfig> states,
                      std::span<const std::vector<Vertex>> blocks, const StepRandomness &shared,
                      const VertexSet &a) {
  require(!blocks.empty(), "block dynamics needs at least one block");
  const auto &block = blocks[shared.block_pick(static_cast<std::uint32_t>(blocks.size()))];
  std::vector<Vertex> order;
  for (Vertex v : block) {
    if (a.contains(v)) {
      order.push_back(v);
    }
  }
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  if (order.size() > kMaxBlockSize) {
    fail(ErrorKind::SizeLimit, "block exceeds the exact-sampling limit");
  }
  for (auto &x : states) {
    for (std::size_t j = 0; j < order.size(); ++j) {
      std::span<const Vertex> later(order.data() + j + 1, order.size() - j - 1);
      double plus = plus_marginalizing(g, beta, x, order[j], later);
      x.set(order[j], shared.vertex_uniform(order[j]) <= plus ? 1 : -1);
    }
  }
}

void grand_step_glauber(const Graph &g, double beta, std::span<SpinConfig> states,
                        const StepRandomness &shared, const VertexSet &a) {
  for (auto &x : states) {
    x = glauber_step(g, beta, x, shared, a);
  }
}

void grand_step(const Graph &g, double beta, const DynamicsSpec &spec,
                std::span<SpinConfig> states, const StepRandomness &shared) {
  const VertexSet a = spec.censor_set(g.num_vertices());
  switch (spec.kind) {
  case DynamicsKind::IsolatedVertex:
    grand_step_iv(g, beta, states, shared, a);
    return;
  case DynamicsKind::MonotoneSW:
    grand_step_msw(g, beta, states, shared, a);
    return;
  case DynamicsKind::Block:
    grand_step_block(g, beta, states, spec.blocks, shared, a);
    return;
  case DynamicsKind::Glauber:
    grand_step_glauber(g, beta, states, shared, a);
    return;
  case DynamicsKind::SwendsenWang:
    break;
  }
  fail(ErrorKind::Unsupported, "Swendsen-Wang dynamics has no monotone grand coupling");
}

CouplingTime coupling_time(const Graph &g, double beta, const DynamicsSpec &spec,
                           std::uint64_t seed, std::uint64_t t_max) {
  spec.validate(g);
  if (!spec.monotone()) {
    fail(ErrorKind::Unsupported, "coupling time needs a monotone grand coupling; sw has none");
  }
  const RandomStream stream(seed);
  const std::size_t n = g.num_vertices();
  CoupledPair pair{SpinConfig::all_plus(n), SpinConfig::all_minus(n), 0};
  std::array<SpinConfig, 2> states{pair.upper, pair.lower};
  while (pair.t < t_max) {
    grand_step(g, beta, spec, states, StepRandomness(stream, pair.t));
    ++pair.t;
    if (states[0] == states[1]) {
      return {pair.t, false};
    }
  }
  return {t_max, true};
}

std::uint64_t monotonicity_audit(const Graph &g, double beta, const DynamicsSpec &spec,
                                 std::uint64_t trials, std::uint64_t steps, std::uint64_t seed,
                                 CouplingMode mode) {
  spec.validate(g);
  if (!spec.monotone()) {
    fail(ErrorKind::Unsupported, "monotonicity audit needs a monotone grand coupling");
  }
  const std::size_t n = g.num_vertices();
  const RandomStream root(seed);
  std::uint64_t violations = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const RandomStream trial_stream = root.split(trial);
    std::vector<std::int8_t> hi(n);
    std::vector<std::int8_t> lo(n);
    for (Vertex v = 0; v < n; ++v) {
      hi[v] = static_cast<std::int8_t>(trial_stream.spin(0, StreamLabel::Auxiliary, v));
      bool drop = trial_stream.spin(1, StreamLabel::Auxiliary, v) < 0;
      lo[v] = drop ? std::int8_t{-1} : hi[v];
    }
    std::array<SpinConfig, 2> states{SpinConfig(hi), SpinConfig(lo)};
    const RandomStream shared = trial_stream.split(1);
    const RandomStream other = trial_stream.split(2);
    for (std::uint64_t t = 0; t < steps; ++t) {
      if (mode == CouplingMode::Shared) {
        grand_step(g, beta, spec, states, StepRandomness(shared, t));
      } else {
        grand_step(g, beta, spec, std::span(states).first(1), StepRandomness(shared, t));
        grand_step(g, beta, spec, std::span(states).last(1), StepRandomness(other, t));
      }
      if (!leq(states[1], states[0])) {
        ++violations;
      }
    }
  }
  return violations;
}

} // namespace isingdyn
