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
#include <set>

#include "isingdyn/random.hpp"

using namespace isingdyn;

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors of the Philox4x32-10 reference implementation.
TEST_CASE("philox known answers") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
        Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("draws are pure functions of their coordinates") {
  RandomStream a(42);
  RandomStream b(42);
  for (std::uint64_t t = 0; t < 100; ++t) {
    CHECK(a.bits64(t, StreamLabel::EdgeUniform, 3) == b.bits64(t, StreamLabel::EdgeUniform, 3));
  }
  CHECK(a.bits64(0, StreamLabel::EdgeUniform, 0) != a.bits64(0, StreamLabel::VertexSpin, 0));
  CHECK(a.bits64(0, StreamLabel::EdgeUniform, 0) != a.bits64(1, StreamLabel::EdgeUniform, 0));
  CHECK(a.bits64(0, StreamLabel::EdgeUniform, 0) != a.bits64(0, StreamLabel::EdgeUniform, 1));
  CHECK(a.bits64(1ULL << 33, StreamLabel::EdgeUniform, 0) !=
        a.bits64(0, StreamLabel::EdgeUniform, 0));
  CHECK(RandomStream(1).bits64(0, StreamLabel::Auxiliary, 0) !=
        RandomStream(2).bits64(0, StreamLabel::Auxiliary, 0));
}

TEST_CASE("split streams differ from each other and the parent") {
  RandomStream root(7);
  std::set<std::uint64_t> firsts{root.bits64(0, StreamLabel::Auxiliary, 0)};
  for (std::uint64_t c = 0; c < 200; ++c) {
    firsts.insert(root.split(c).bits64(0, StreamLabel::Auxiliary, 0));
  }
  CHECK(firsts.size() == 201);
  CHECK(root.split(3).seed() == RandomStream(7).split(3).seed());
}

TEST_CASE("uniform, spin and below have the right laws") {
  RandomStream s(2024);
  const int draws = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  int plus = 0;
  std::array<int, 7> buckets{};
  for (int i = 0; i < draws; ++i) {
    double u = s.uniform(static_cast<std::uint64_t>(i), StreamLabel::VertexUniform, 0);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum_sq += u * u;
    plus += s.spin(static_cast<std::uint64_t>(i), StreamLabel::VertexSpin, 0) > 0 ? 1 : 0;
    std::uint32_t k = s.below(static_cast<std::uint64_t>(i), StreamLabel::BlockPick, 0, 7);
    REQUIRE(k < 7);
    ++buckets[k];
  }
  // Means within 5 standard errors.
  CHECK(std::abs(sum / draws - 0.5) < 5 * std::sqrt(1.0 / 12 / draws));
  CHECK(std::abs(sum_sq / draws - 1.0 / 3) < 5 * std::sqrt(4.0 / 45 / draws));
  CHECK(std::abs(plus / double(draws) - 0.5) < 5 * std::sqrt(0.25 / draws));
  double chi2 = 0.0;
  for (int b : buckets) {
    double expected = draws / 7.0;
    chi2 += (b - expected) * (b - expected) / expected;
  }
  CHECK(chi2 < 30.0); // 6 degrees of freedom
}

TEST_CASE("step randomness reads the labelled fields") {
  RandomStream s(9);
  StepRandomness r(s, 17);
  CHECK(r.step() == 17);
  CHECK(r.edge_uniform(4) == s.uniform(17, StreamLabel::EdgeUniform, 4));
  CHECK(r.vertex_spin(2) == s.spin(17, StreamLabel::VertexSpin, 2));
  CHECK(r.vertex_uniform(2) == s.uniform(17, StreamLabel::VertexUniform, 2));
  CHECK(r.component_coin(5) == s.uniform(17, StreamLabel::ComponentCoin, 5));
  CHECK(r.block_pick(3) == s.below(17, StreamLabel::BlockPick, 0, 3));
  CHECK(r.vertex_pick(10) == s.below(17, StreamLabel::VertexPick, 0, 10));
}
