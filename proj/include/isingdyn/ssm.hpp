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

#ifndef ISINGDYN_SSM_HPP
#define ISINGDYN_SSM_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "isingdyn/graph.hpp"

namespace isingdyn {

/// Boundary configurations are enumerated up to exchangeability: sphere
/// vertices with the same free neighbours only matter through how many of
/// them are +. This bounds the number of such classes.
inline constexpr std::size_t kMaxBoundaryClasses = std::size_t{1} << 20;

struct Influence {
  Vertex u;
  double a_u;
};

struct InfluenceTable {
  Vertex v = 0;
  std::size_t radius = 0;
  std::vector<Influence> entries; // one per u in S(v, R), increasing u
  double total = 0.0;
  bool pass = false; // total <= 1/4
};

/// a_u: largest change of mu(v = + | S(v,R) = tau) when only the spin of u
/// flips, maximised over all tau. Everything off the sphere is marginalised.
double influence_au(const Graph &g, double beta, Vertex v, std::size_t radius, Vertex u);

InfluenceTable assm_check(const Graph &g, double beta, Vertex v, std::size_t radius);

struct AssmSearch {
  std::optional<std::size_t> radius;
  std::vector<InfluenceTable> tables; // per vertex at the returned radius
  /// Vertex/radius pairs skipped because enumeration was out of bounds.
  std::vector<std::string> infeasible;
};

/// First R in 0..r_max for which every vertex passes.
AssmSearch find_assm_radius(const Graph &g, double beta, std::size_t r_max);

std::string to_json(const InfluenceTable &table);

} // namespace isingdyn

#endif // ISINGDYN_SSM_HPP
