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

#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "isingdyn/error.hpp"
#include "isingdyn/ssm.hpp"
#include "oracle.hpp"

using namespace isingdyn;

namespace {

/// Brute-force a_u: flip u on the sphere, everything else on the sphere fixed,
/// and condition only on the sphere.
double oracle_au(const Graph &g, double beta, Vertex v, std::size_t radius, Vertex u) {
  std::vector<Vertex> s;
  auto dist = distances_from(g, v);
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    if (dist[w] == radius + 1) {
      s.push_back(w);
    }
  }
  double best = 0.0;
  for (std::uint32_t tau = 0; tau < (1U << s.size()); ++tau) {
    std::vector<std::int8_t> boundary(g.num_vertices(), 0);
    std::size_t ui = s.size();
    for (std::size_t i = 0; i < s.size(); ++i) {
      boundary[s[i]] = ((tau >> i) & 1U) != 0 ? 1 : -1;
      if (s[i] == u) {
        ui = i;
      }
    }
    if (ui == s.size() || boundary[u] < 0) {
      continue;
    }
    double plus = oracle::conditional(g, beta, v, boundary);
    boundary[u] = -1;
    double minus = oracle::conditional(g, beta, v, boundary);
    best = std::max(best, std::abs(plus - minus));
  }
  return best;
}

} // namespace

TEST_CASE("influence on a path matches brute force") {
  Graph g = path(4);
  for (double beta : {0.2, 0.5, 1.3}) {
    CHECK(std::abs(influence_au(g, beta, 0, 1, 2) - oracle_au(g, beta, 0, 1, 2)) < 1e-12);
    // Closed form for a path: tanh(beta)^2.
    CHECK(std::abs(influence_au(g, beta, 0, 1, 2) - std::pow(std::tanh(beta), 2)) < 1e-12);
  }
}

TEST_CASE("influences against brute force on small graphs") {
  for (const Graph &g : {cycle(6), grid(3, 3), complete_tree(3, 2), random_regular(10, 3, 2)}) {
    for (double beta : {0.3, 0.9}) {
      for (Vertex v : {Vertex{0}, Vertex{4}}) {
        for (std::size_t r = 0; r <= 1; ++r) {
          auto table = assm_check(g, beta, v, r);
          double sum = 0.0;
          for (const auto &e : table.entries) {
            CHECK(std::abs(e.a_u - oracle_au(g, beta, v, r, e.u)) < 1e-12);
            sum += e.a_u;
          }
          CHECK(std::abs(sum - table.total) < 1e-12);
          CHECK(table.pass == (table.total <= 0.25));
          CHECK(std::is_sorted(table.entries.begin(), table.entries.end(),
                               [](const Influence &a, const Influence &b) { return a.u < b.u; }));
        }
      }
    }
  }
}

TEST_CASE("influence edge cases") {
  Graph g = cycle(8);
  CHECK(influence_au(g, 0.0, 0, 1, 2) == 0.0);
  for (double beta : {0.1, 0.5, 2.0}) {
    CHECK(influence_au(g, 0.0, 0, 1, 6) <= influence_au(g, beta, 0, 1, 6));
  }
  // Vertices in another component never reach the sphere.
  Graph two(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  auto table = assm_check(two, 0.7, 0, 0);
  REQUIRE(table.entries.size() == 1);
  CHECK(table.entries[0].u == 1);
  CHECK(table.entries[0].a_u == doctest::Approx(std::tanh(0.7)));
  // Isolated vertex: empty sphere.
  auto lone = assm_check(edgeless(3), 1.0, 1, 2);
  CHECK(lone.entries.empty());
  CHECK(lone.total == 0.0);
  CHECK(lone.pass);
  CHECK_THROWS_AS(influence_au(g, 0.5, 0, 1, 5), Error); // 5 is not on S(0,1)
}

TEST_CASE("radius search") {
  auto zero = find_assm_radius(complete_tree(3, 3), 0.0, 4);
  REQUIRE(zero.radius.has_value());
  CHECK(*zero.radius == 0);

  auto cyc = find_assm_radius(cycle(12), 0.3, 4);
  REQUIRE(cyc.radius.has_value());
  // Two sphere vertices each contribute tanh(beta)^(R+1) (up to boundary
  // correlations), so R = 1 is the first passing radius.
  CHECK(*cyc.radius == 1);
  CHECK(cyc.tables.size() == 12);
  for (const auto &t : cyc.tables) {
    CHECK(t.pass);
  }

  auto none = find_assm_radius(random_regular(8, 3, 1), 3.0, 1);
  CHECK_FALSE(none.radius.has_value());
}

TEST_CASE("table json") {
  auto table = assm_check(path(4), 0.5, 0, 1);
  auto j = nlohmann::json::parse(to_json(table));
  CHECK(j["v"] == 0);
  CHECK(j["R"] == 1);
  REQUIRE(j["entries"].size() == 1);
  CHECK(j["entries"][0]["u"] == 2);
  CHECK(j["entries"][0]["a_u"].get<double>() == doctest::Approx(std::pow(std::tanh(0.5), 2)));
  CHECK(j["total"].get<double>() == doctest::Approx(table.total));
  CHECK(j["pass"] == true);
}

TEST_CASE("enumeration bound") {
  // The sphere of the grid centre has 24 vertices with pairwise distinct
  // free neighbourhoods, so 2^24 boundary classes.
  Graph g = grid(13, 13);
  CHECK_THROWS_AS(assm_check(g, 0.2, 6 * 13 + 6, 5), Error);
  auto search = find_assm_radius(g, 0.05, 1);
  REQUIRE(search.radius.has_value());
  CHECK(*search.radius == 0);
}
