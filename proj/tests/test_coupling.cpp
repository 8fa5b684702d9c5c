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

#include <algorithm>
#include <cmath>

#include "isingdyn/coupling.hpp"
#include "isingdyn/error.hpp"
#include "isingdyn/exact.hpp"

using namespace isingdyn;

namespace {

/// One-step law of a single coupled copy started at sigma.
std::vector<double> coupled_law(const Graph &g, double beta, const DynamicsSpec &spec,
                                const SpinConfig &sigma, std::uint64_t samples) {
  RandomStream stream(31);
  std::vector<double> counts(std::size_t{1} << g.num_vertices(), 0.0);
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::array<SpinConfig, 1> states{sigma};
    grand_step(g, beta, spec, states, StepRandomness(stream, t));
    counts[states[0].index()] += 1.0;
  }
  for (auto &c : counts) {
    c /= static_cast<double>(samples);
  }
  return counts;
}

} // namespace

TEST_CASE("each coupled copy is a faithful step") {
  const std::uint64_t samples = 200000;
  for (const Graph &g : {path(3), cycle(4)}) {
    const std::size_t n = g.num_vertices();
    const std::vector<Vertex> a{1, 2};
    std::vector<DynamicsSpec> specs{DynamicsSpec::iv(),
                                    DynamicsSpec::iv().censored(a),
                                    DynamicsSpec::msw(),
                                    DynamicsSpec::msw().censored(a),
                                    DynamicsSpec::glauber(),
                                    DynamicsSpec::block(ball_blocks(g, 1)),
                                    DynamicsSpec::block(ball_blocks(g, 1)).censored(a),
                                    DynamicsSpec::block(whole_block(n))};
    for (const auto &spec : specs) {
      auto tm = transition_matrix(g, 0.6, spec);
      for (std::uint64_t start : {std::uint64_t{0}, std::uint64_t{0b101},
                                  (std::uint64_t{1} << n) - 1}) {
        auto law = coupled_law(g, 0.6, spec, SpinConfig::from_index(start, n), samples);
        double tv = 0.0;
        for (std::size_t y = 0; y < law.size(); ++y) {
          tv += std::abs(law[y] - tm.p(static_cast<Eigen::Index>(start),
                                       static_cast<Eigen::Index>(y)));
        }
        INFO(spec.name() << " start=" << start);
        CHECK(0.5 * tv <= 0.01);
      }
    }
  }
}

TEST_CASE("equal states stay equal and A empty freezes everything") {
  Graph g = cycle(8);
  RandomStream s(4);
  VertexSet all = VertexSet::full(8);
  VertexSet none(8);
  std::array<SpinConfig, 3> states{SpinConfig::from_string("++-+--+-"),
                                   SpinConfig::from_string("++-+--+-"),
                                   SpinConfig::from_string("+-------")};
  const auto frozen = states;
  for (std::uint64_t t = 0; t < 200; ++t) {
    StepRandomness r(s, t);
    grand_step_iv(g, 0.4, states, r, all);
    CHECK(states[0] == states[1]);
  }
  auto copy = frozen;
  for (std::uint64_t t = 0; t < 50; ++t) {
    StepRandomness r(s, t);
    grand_step_iv(g, 0.4, copy, r, none);
    grand_step_msw(g, 0.4, copy, r, none);
    grand_step_block(g, 0.4, copy, ball_blocks(g, 1), r, none);
  }
  CHECK(copy == frozen);
}

TEST_CASE("zero temperature coupling coalesces at once") {
  Graph g = cycle(8);
  RandomStream s(12);
  std::array<SpinConfig, 2> states{SpinConfig::all_plus(8), SpinConfig::all_minus(8)};
  grand_step_msw(g, 0.0, states, StepRandomness(s, 0), VertexSet::full(8));
  CHECK(states[0] == states[1]);
  CHECK(coupling_time(g, 0.0, DynamicsSpec::iv(), 5).steps == 1);
  CHECK(coupling_time(edgeless(1), 0.8, DynamicsSpec::iv(), 5).steps == 1);
  CHECK(coupling_time(edgeless(1), 0.8, DynamicsSpec::msw(), 5).steps == 1);
  CHECK(coupling_time(edgeless(1), 0.8, DynamicsSpec::block(whole_block(1)), 5).steps == 1);
}

TEST_CASE("forced region of the block coupling") {
  Graph g = path(3);
  const double beta = 0.1;
  const double forced = 0.5 * std::exp(-2.0 * beta * 2);
  RandomStream s(21);
  auto blocks = whole_block(3);
  int hits = 0;
  for (std::uint64_t t = 0; t < 5000; ++t) {
    StepRandomness r(s, t);
    bool all_forced = true;
    for (Vertex v = 0; v < 3; ++v) {
      all_forced = all_forced && r.vertex_uniform(v) <= forced;
    }
    if (!all_forced) {
      continue;
    }
    ++hits;
    std::array<SpinConfig, 3> states{SpinConfig::all_minus(3), SpinConfig::from_string("+-+"),
                                     SpinConfig::all_plus(3)};
    grand_step_block(g, beta, states, blocks, r, VertexSet::full(3));
    for (const auto &st : states) {
      CHECK(st == SpinConfig::all_plus(3));
    }
  }
  CHECK(hits > 0);
  // The whole-block update ignores the old state, so one step suffices.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(coupling_time(g, 0.9, DynamicsSpec::block(blocks), seed).steps == 1);
  }
}

TEST_CASE("sandwich and absorption") {
  Graph g = random_regular(8, 3, 2);
  for (const auto &spec : {DynamicsSpec::iv(), DynamicsSpec::msw(),
                           DynamicsSpec::block(ball_blocks(g, 1)), DynamicsSpec::glauber()}) {
    for (std::uint64_t run = 0; run < 2500; ++run) {
      RandomStream s(run);
      std::array<SpinConfig, 3> states{
          SpinConfig::all_plus(8),
          SpinConfig::from_index(s.bits64(0, StreamLabel::Auxiliary, 0) & 0xff, 8),
          SpinConfig::all_minus(8)};
      bool met = false;
      for (std::uint64_t t = 0; t < 20; ++t) {
        grand_step(g, 0.4, spec, states, StepRandomness(s, t));
        CHECK(leq(states[1], states[0]));
        CHECK(leq(states[2], states[1]));
        if (met) {
          CHECK(states[0] == states[2]);
        }
        met = states[0] == states[2];
      }
    }
  }
}

TEST_CASE("monotonicity audits") {
  Graph ring = cycle(8);
  Graph reg = random_regular(8, 3, 1);
  CHECK(monotonicity_audit(ring, 0.4, DynamicsSpec::iv(), 2000, 100, 1) == 0);
  CHECK(monotonicity_audit(reg, 0.4, DynamicsSpec::msw(), 2000, 100, 1) == 0);
  CHECK(monotonicity_audit(ring, 0.4, DynamicsSpec::block(ball_blocks(ring, 1)), 500, 100, 1) ==
        0);
  CHECK(monotonicity_audit(ring, 0.4, DynamicsSpec::iv().censored({0, 1, 2}), 500, 100, 1) == 0);
  CHECK(monotonicity_audit(ring, 0.4, DynamicsSpec::iv(), 200, 100, 1, CouplingMode::Fresh) > 0);
  CHECK_THROWS_AS(monotonicity_audit(ring, 0.4, DynamicsSpec::sw(), 1, 1, 1), Error);
}

TEST_CASE("coupling times") {
  Graph g = cycle(64);
  std::vector<std::uint64_t> times;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto ct = coupling_time(g, 0.3, DynamicsSpec::iv(), seed, 100000);
    CHECK_FALSE(ct.timeout);
    times.push_back(ct.steps);
  }
  std::sort(times.begin(), times.end());
  CHECK(times[100] <= 100000);
  CHECK(coupling_time(g, 0.3, DynamicsSpec::iv(), 7) == coupling_time(g, 0.3, DynamicsSpec::iv(), 7));

  // A fully censored chain never moves, so the pair times out.
  auto stuck = coupling_time(cycle(4), 0.3, DynamicsSpec::iv().censored({}), 1, 50);
  CHECK(stuck.timeout);
  CHECK(stuck.steps == 50);
  try {
    coupling_time(g, 0.3, DynamicsSpec::sw(), 1);
    FAIL("sw must be rejected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}
