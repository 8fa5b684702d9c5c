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

#include "isingdyn/ssm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "isingdyn/elimination.hpp"
#include "isingdyn/error.hpp"

namespace isingdyn {

namespace {

/// Sphere vertices grouped by their neighbours in the free region of v.
/// Vertices with no such neighbour do not influence v at all.
struct BoundaryClasses {
  std::vector<std::vector<Vertex>> groups;
  std::vector<std::size_t> radix; // |group| + 1
  std::size_t count = 1;          // product of radix
};

/// m(c) = mu(v = + | S = tau) where tau has c_j plus spins in group j.
/// Index c in mixed radix.
struct BoundaryMarginals {
  BoundaryClasses classes;
  std::vector<double> m;
};

BoundaryMarginals boundary_marginals(const Graph &g, double beta, Vertex v,
                                     const VertexSet &sphere_set) {
  const ClampedMarginal marginal(g, beta, v, sphere_set);
  VertexSet region(g.num_vertices());
  for (auto w : marginal.region()) {
    region.insert(w);
  }
  std::map<std::vector<Vertex>, std::vector<Vertex>> by_key;
  for (auto s : sphere_set.members()) {
    std::vector<Vertex> key;
    for (const auto &inc : g.incident(s)) {
      if (region.contains(inc.neighbor)) {
        key.push_back(inc.neighbor);
      }
    }
    if (!key.empty()) {
      std::sort(key.begin(), key.end());
      by_key[key].push_back(s);
    }
  }
  BoundaryMarginals out;
  auto &cls = out.classes;
  for (auto &[key, members] : by_key) {
    cls.radix.push_back(members.size() + 1);
    cls.groups.push_back(std::move(members));
    if (cls.count > kMaxBoundaryClasses / cls.radix.back()) {
      fail(ErrorKind::SizeLimit, "sphere S(" + std::to_string(v) +
                                     ", R) has more than " +
                                     std::to_string(kMaxBoundaryClasses) + " boundary classes");
    }
    cls.count *= cls.radix.back();
  }

  std::vector<std::int8_t> spins(g.num_vertices(), -1);
  std::vector<std::size_t> c(cls.groups.size(), 0);
  out.m.resize(cls.count);
  for (std::size_t idx = 0; idx < cls.count; ++idx) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      const auto &grp = cls.groups[j];
      for (std::size_t k = 0; k < grp.size(); ++k) {
        spins[grp[k]] = k < c[j] ? 1 : -1;
      }
    }
    out.m[idx] = marginal.plus_probability(spins);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (++c[j] < cls.radix[j]) {
        break;
      }
      c[j] = 0;
    }
  }
  return out;
}

/// Largest change of m when one more vertex of group j turns +.
double max_flip_difference(const BoundaryMarginals &bm, std::size_t j) {
  const auto &cls = bm.classes;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < j; ++k) {
    stride *= cls.radix[k];
  }
  double worst = 0.0;
  for (std::size_t idx = 0; idx < cls.count; ++idx) {
    if ((idx / stride) % cls.radix[j] + 1 < cls.radix[j]) {
      worst = std::max(worst, std::abs(bm.m[idx + stride] - bm.m[idx]));
    }
  }
  return std::clamp(worst, 0.0, 1.0);
}

/// a_u for every u in the sphere, in increasing u.
std::vector<Influence> influences(const Graph &g, double beta, Vertex v,
                                  const VertexSet &sphere_set) {
  const auto bm = boundary_marginals(g, beta, v, sphere_set);
  std::map<Vertex, double> a;
  for (auto u : sphere_set.members()) {
    a[u] = 0.0;
  }
  for (std::size_t j = 0; j < bm.classes.groups.size(); ++j) {
    const double d = max_flip_difference(bm, j);
    for (auto u : bm.classes.groups[j]) {
      a[u] = d;
    }
  }
  std::vector<Influence> out;
  for (const auto &[u, value] : a) {
    out.push_back({u, value});
  }
  return out;
}

void check_center(const Graph &g, Vertex v) {
  if (v >= g.num_vertices()) {
    fail(ErrorKind::InvalidArgument, "vertex " + std::to_string(v) + " out of range");
  }
}

} // namespace

double influence_au(const Graph &g, double beta, Vertex v, std::size_t radius, Vertex u) {
  check_center(g, v);
  const VertexSet s = sphere(g, v, radius);
  if (u >= g.num_vertices() || !s.contains(u)) {
    fail(ErrorKind::InvalidArgument, "u = " + std::to_string(u) + " is not in S(v, R)");
  }
  for (const auto &entry : influences(g, beta, v, s)) {
    if (entry.u == u) {
      return entry.a_u;
    }
  }
  return 0.0;
}

InfluenceTable assm_check(const Graph &g, double beta, Vertex v, std::size_t radius) {
  check_center(g, v);
  InfluenceTable table;
  table.v = v;
  table.radius = radius;
  const VertexSet s = sphere(g, v, radius);
  if (!s.empty()) {
    table.entries = influences(g, beta, v, s);
    for (const auto &e : table.entries) {
      table.total += e.a_u;
    }
  }
  table.pass = table.total <= 0.25;
  return table;
}

AssmSearch find_assm_radius(const Graph &g, double beta, std::size_t r_max) {
  AssmSearch result;
  for (std::size_t r = 0; r <= r_max; ++r) {
    std::vector<InfluenceTable> tables;
    std::vector<std::string> skipped;
    bool failed = false;
    for (Vertex v = 0; v < g.num_vertices() && !failed; ++v) {
      try {
        tables.push_back(assm_check(g, beta, v, r));
        failed = !tables.back().pass;
      } catch (const Error &e) {
        if (e.kind() != ErrorKind::SizeLimit) {
          throw;
        }
        skipped.push_back("v=" + std::to_string(v) + " R=" + std::to_string(r) + ": " +
                          e.what());
      }
    }
    if (failed) {
      continue;
    }
    if (!skipped.empty()) {
      // Every checkable vertex passed, but R cannot be confirmed.
      result.infeasible.insert(result.infeasible.end(), skipped.begin(), skipped.end());
      continue;
    }
    result.radius = r;
    result.tables = std::move(tables);
    return result;
  }
  return result;
}

std::string to_json(const InfluenceTable &table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &e : table.entries) {
    entries.push_back({{"u", e.u}, {"a_u", e.a_u}});
  }
  nlohmann::json out = {{"v", table.v},
                        {"R", table.radius},
                        {"entries", entries},
                        {"total", table.total},
                        {"pass", table.pass}};
  return out.dump();
}

} // namespace isingdyn
