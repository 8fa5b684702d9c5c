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

#ifndef ISINGDYN_ELIMINATION_HPP
#define ISINGDYN_ELIMINATION_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "isingdyn/graph.hpp"

namespace isingdyn {

inline constexpr std::size_t kMaxEliminationWidth = 20;

/// Exact single-site marginal of the Ising measure with a fixed set of
/// clamped vertices, computed by variable elimination.
///
/// Only the component of `target` in G minus the clamped set matters: the
/// clamped vertices separate it from the rest of the graph, so everything
/// else factors out of the conditional. The elimination order (greedy min
/// degree) depends only on the clamped set, so one instance can be
/// evaluated for many boundary configurations.
class ClampedMarginal {
public:
  /// Throws ErrorKind::SizeLimit when some intermediate factor would span
  /// more than kMaxEliminationWidth free vertices.
  ClampedMarginal(const Graph &g, double beta, Vertex target, const VertexSet &clamped);

  /// P(target = +) given the spins of the clamped vertices, read from
  /// `spins` (length n, only clamped entries are used).
  double plus_probability(std::span<const std::int8_t> spins) const;

  /// Free vertices that interact with target, including target.
  const std::vector<Vertex> &region() const { return region_; }
  std::size_t width() const { return width_; }

private:
  struct Pair {
    std::uint32_t a; // positions into region_
    std::uint32_t b;
  };
  struct Field {
    std::uint32_t local;
    Vertex clamped;
  };

  double beta_;
  std::vector<Vertex> region_;
  std::vector<Pair> pairs_;
  std::vector<Field> fields_;
  std::vector<std::uint32_t> plan_; // elimination order, target excluded
  std::size_t width_ = 0;
};

} // namespace isingdyn

#endif // ISINGDYN_ELIMINATION_HPP
