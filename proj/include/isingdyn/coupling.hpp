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

#ifndef ISINGDYN_COUPLING_HPP
#define ISINGDYN_COUPLING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "isingdyn/dynamics.hpp"

namespace isingdyn {

// Grand couplings: every state in `states` is advanced by one step driven by
// the same StepRandomness. Each copy is marginally a faithful step of the
// (censored) chain and the coordinatewise order is preserved.

void grand_step_iv(const Graph &g, double beta, std::span<SpinConfig> states,
                   const StepRandomness &shared, const VertexSet &a);
/// Uses the per-vertex spin draws s_t(v): a component C within A takes the
/// common draw iff all draws on C agree.
void grand_step_msw(const Graph &g, double beta, std::span<SpinConfig> states,
                    const StepRandomness &shared, const VertexSet &a);
/// Same block k_t for all copies; vertices of A ∩ B_k are updated in
/// increasing index order, each set to + iff u_t(v) <= mu(v = + | earlier
/// block vertices, outside of B_k).
void grand_step_block(const Graph &g, double beta, std::span<SpinConfig> states,
                      std::span<const std::vector<Vertex>> blocks,
                      const StepRandomness &shared, const VertexSet &a);
void grand_step_glauber(const Graph &g, double beta, std::span<SpinConfig> states,
                        const StepRandomness &shared, const VertexSet &a);

/// Dispatch on spec; throws ErrorKind::Unsupported for Swendsen-Wang.
void grand_step(const Graph &g, double beta, const DynamicsSpec &spec,
                std::span<SpinConfig> states, const StepRandomness &shared);

struct CoupledPair {
  SpinConfig upper;
  SpinConfig lower;
  std::uint64_t t = 0;
  bool coalesced() const { return upper == lower; }
};

inline constexpr std::uint64_t kDefaultCouplingSteps = 1'000'000;

struct CouplingTime {
  std::uint64_t steps = 0; // first t with upper == lower, or t_max on timeout
  bool timeout = false;
  friend bool operator==(const CouplingTime &, const CouplingTime &) = default;
};

/// Runs the pair from all-plus / all-minus until they meet.
CouplingTime coupling_time(const Graph &g, double beta, const DynamicsSpec &spec,
                           std::uint64_t seed, std::uint64_t t_max = kDefaultCouplingSteps);

enum class CouplingMode {
  Shared, // grand coupling
  Fresh,  // each copy gets its own randomness; a negative control
};

/// Counts (trial, step) pairs at which a comparable pair lost its order.
std::uint64_t monotonicity_audit(const Graph &g, double beta, const DynamicsSpec &spec,
                                 std::uint64_t trials, std::uint64_t steps,
                                 std::uint64_t seed,
                                 CouplingMode mode = CouplingMode::Shared);

} // namespace isingdyn

#endif // ISINGDYN_COUPLING_HPP
