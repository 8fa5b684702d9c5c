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

#ifndef ISINGDYN_DYNAMICS_HPP
#define ISINGDYN_DYNAMICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isingdyn/graph.hpp"
#include "isingdyn/ising.hpp"
#include "isingdyn/random.hpp"

namespace isingdyn {

enum class DynamicsKind { Glauber, Block, SwendsenWang, IsolatedVertex, MonotoneSW };

std::string to_string(DynamicsKind kind);

/// Chain selector plus optional censor set A (absent means A = V).
struct DynamicsSpec {
  DynamicsKind kind = DynamicsKind::IsolatedVertex;
  std::vector<std::vector<Vertex>> blocks; // only for Block
  std::optional<std::vector<Vertex>> censor;

  static DynamicsSpec glauber() { return {DynamicsKind::Glauber, {}, std::nullopt}; }
  static DynamicsSpec sw() { return {DynamicsKind::SwendsenWang, {}, std::nullopt}; }
  static DynamicsSpec iv() { return {DynamicsKind::IsolatedVertex, {}, std::nullopt}; }
  static DynamicsSpec msw() { return {DynamicsKind::MonotoneSW, {}, std::nullopt}; }
  static DynamicsSpec block(std::vector<std::vector<Vertex>> blocks) {
    return {DynamicsKind::Block, std::move(blocks), std::nullopt};
  }
  DynamicsSpec censored(std::vector<Vertex> a) const {
    DynamicsSpec copy = *this;
    copy.censor = std::move(a);
    return copy;
  }
  DynamicsSpec uncensored() const {
    DynamicsSpec copy = *this;
    copy.censor.reset();
    return copy;
  }

  /// "iv", "iv_A", "block_A", ...
  std::string name() const;
  bool monotone() const { return kind != DynamicsKind::SwendsenWang; }

  /// Blocks must cover V, vertices must be in range, SW may not be censored.
  void validate(const Graph &g) const;
  VertexSet censor_set(std::size_t n) const;

  friend bool operator==(const DynamicsSpec &, const DynamicsSpec &) = default;
};

std::vector<std::vector<Vertex>> singleton_blocks(std::size_t n);
std::vector<std::vector<Vertex>> whole_block(std::size_t n);
/// One block B(v, radius) per vertex.
std::vector<std::vector<Vertex>> ball_blocks(const Graph &g, std::size_t radius);

/// JSON form {"kind": "...", "blocks": [[..],..]?, "censor": [..]?}. Besides
/// explicit lists, "blocks" accepts "singletons", "whole" and "ball:R",
/// resolved against g.
DynamicsSpec parse_dynamics(const std::string &json, const Graph &g);
std::string dynamics_to_json(const DynamicsSpec &spec);

struct ComponentPartition {
  std::vector<std::uint32_t> id;            // per vertex
  std::vector<std::vector<Vertex>> members; // sorted; ordered by smallest vertex
  std::size_t count() const { return members.size(); }
};

EdgeSubset agreeing_edges(const Graph &g, const SpinConfig &sigma);
/// Keeps e in E(sigma) iff uniforms[e] <= 1 - exp(-2 beta).
EdgeSubset percolate(const Graph &g, const SpinConfig &sigma, double beta,
                     std::span<const double> uniforms);
EdgeSubset percolate(const Graph &g, const SpinConfig &sigma, double beta,
                     const StepRandomness &rng);
ComponentPartition components(const Graph &g, const EdgeSubset &f);

/// Edge retention probability p = 1 - exp(-2 beta).
double bond_probability(double beta);

/// Heat-bath probability that v becomes + given the rest of sigma.
double heat_bath_plus(const Graph &g, double beta, const SpinConfig &sigma, Vertex v);

// One step of each chain. Randomness consumed per step:
//   r_t(e) per edge, s_t(v) per vertex, component decisions keyed by the
//   component's smallest vertex, u_t(v) heat-bath thresholds, k_t / v_t picks.
// Vertices outside the update set are copied from sigma unchanged.

SpinConfig sw_step(const Graph &g, double beta, const SpinConfig &sigma,
                   const StepRandomness &rng);
SpinConfig iv_step(const Graph &g, double beta, const SpinConfig &sigma,
                   const StepRandomness &rng, const VertexSet &a);
SpinConfig msw_step(const Graph &g, double beta, const SpinConfig &sigma,
                    const StepRandomness &rng, const VertexSet &a);
/// Per-vertex spin draws; a component C within A is recoloured iff all of
/// its draws agree. Same kernel as msw_step, and the rule the MSW grand
/// coupling uses.
SpinConfig msw_step_alt(const Graph &g, double beta, const SpinConfig &sigma,
                        const StepRandomness &rng, const VertexSet &a);
SpinConfig glauber_step(const Graph &g, double beta, const SpinConfig &sigma,
                        const StepRandomness &rng, const VertexSet &a);
/// Resamples A ∩ B_k from the exact conditional by enumerating its states.
SpinConfig block_step(const Graph &g, double beta, const SpinConfig &sigma,
                      std::span<const std::vector<Vertex>> blocks,
                      const StepRandomness &rng, const VertexSet &a);

inline constexpr std::size_t kMaxBlockSize = 20;

/// Dispatches on spec.kind with the spec's censor set.
SpinConfig step(const Graph &g, double beta, const DynamicsSpec &spec,
                const SpinConfig &sigma, const StepRandomness &rng);

/// Runs `steps` steps from `start` using stream times 0..steps-1.
SpinConfig run_chain(const Graph &g, double beta, const DynamicsSpec &spec,
                     SpinConfig start, const RandomStream &stream, std::uint64_t steps);

} // namespace isingdyn

#endif // ISINGDYN_DYNAMICS_HPP
