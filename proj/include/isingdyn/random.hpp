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

#ifndef ISINGDYN_RANDOM_HPP
#define ISINGDYN_RANDOM_HPP

#include <array>
#include <cstdint>

namespace isingdyn {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure function of
/// counter and key, so any draw can be recomputed in O(1) on any platform.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Stream labels separate the random fields consumed inside one step.
enum class StreamLabel : std::uint32_t {
  EdgeUniform = 1,   // r_t(e)
  VertexSpin = 2,    // s_t(v)
  VertexUniform = 3, // u_t(v), heat-bath thresholds
  BlockPick = 4,     // k_t
  VertexPick = 5,    // v_t
  ComponentCoin = 6, // MSW resample decision, keyed by smallest vertex
  BlockSample = 7,   // inverse-CDF draw of an uncoupled block update
  Auxiliary = 8,     // generators, start states, pair construction
};

/// Keyed counter-based random source. Draw (t, label, index) is a fixed
/// function of the seed: copies of a chain built from the same stream see
/// identical randomness, which is what every grand coupling here relies on.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent stream for sub-task `child` (chain number, trial, ...).
  RandomStream split(std::uint64_t child) const {
    return RandomStream(splitmix64(seed_ ^ splitmix64(child + 0x5bd1e995ULL)));
  }

  std::uint64_t bits64(std::uint64_t t, StreamLabel label, std::uint32_t index) const;

  /// Uniform on [0,1) with 53 random bits.
  double uniform(std::uint64_t t, StreamLabel label, std::uint32_t index) const {
    return static_cast<double>(bits64(t, label, index) >> 11) * 0x1.0p-53;
  }
  /// +1 or -1 with probability 1/2 each.
  int spin(std::uint64_t t, StreamLabel label, std::uint32_t index) const {
    return (bits64(t, label, index) >> 63) != 0 ? 1 : -1;
  }
  /// Uniform integer in [0, bound); bias is below bound / 2^64.
  std::uint32_t below(std::uint64_t t, StreamLabel label, std::uint32_t index,
                      std::uint32_t bound) const {
    unsigned __int128 wide =
        static_cast<unsigned __int128>(bits64(t, label, index)) * bound;
    return static_cast<std::uint32_t>(wide >> 64);
  }

private:
  std::uint64_t seed_;
};

/// The random fields of one step t of a chain: r_t(e), s_t(v), u_t(v), k_t,
/// v_t. Shared verbatim between coupled copies.
class StepRandomness {
public:
  StepRandomness(RandomStream stream, std::uint64_t t) : stream_(stream), t_(t) {}

  std::uint64_t step() const { return t_; }
  const RandomStream &stream() const { return stream_; }

  double edge_uniform(std::uint32_t e) const {
    return stream_.uniform(t_, StreamLabel::EdgeUniform, e);
  }
  int vertex_spin(std::uint32_t v) const {
    return stream_.spin(t_, StreamLabel::VertexSpin, v);
  }
  double vertex_uniform(std::uint32_t v) const {
    return stream_.uniform(t_, StreamLabel::VertexUniform, v);
  }
  double component_coin(std::uint32_t smallest_vertex) const {
    return stream_.uniform(t_, StreamLabel::ComponentCoin, smallest_vertex);
  }
  double block_sample() const { return stream_.uniform(t_, StreamLabel::BlockSample, 0); }
  std::uint32_t block_pick(std::uint32_t blocks) const {
    return stream_.below(t_, StreamLabel::BlockPick, 0, blocks);
  }
  std::uint32_t vertex_pick(std::uint32_t n) const {
    return stream_.below(t_, StreamLabel::VertexPick, 0, n);
  }

private:
  RandomStream stream_;
  std::uint64_t t_;
};

} // namespace isingdyn

#endif // ISINGDYN_RANDOM_HPP
