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

#ifndef ISINGDYN_ISING_HPP
#define ISINGDYN_ISING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isingdyn/graph.hpp"

namespace isingdyn {

/// Assignment of +1/-1 to every vertex. The exact engines address Omega by
/// index(): bit v is set iff spin v is +.
class SpinConfig {
public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<std::int8_t> spins);

  static SpinConfig all_plus(std::size_t n);
  static SpinConfig all_minus(std::size_t n);
  static SpinConfig from_index(std::uint64_t index, std::size_t n);
  /// Parses "+-+..." strings.
  static SpinConfig from_string(const std::string &text);

  std::size_t size() const { return spins_.size(); }
  int operator[](std::size_t v) const { return spins_[v]; }
  void set(std::size_t v, int spin) { spins_[v] = static_cast<std::int8_t>(spin > 0 ? 1 : -1); }
  std::span<const std::int8_t> spins() const { return spins_; }

  /// Requires size() <= 63.
  std::uint64_t index() const;
  std::string to_string() const;

  friend bool operator==(const SpinConfig &, const SpinConfig &) = default;

private:
  std::vector<std::int8_t> spins_;
};

/// Coordinatewise order: sigma <= tau iff sigma(v) <= tau(v) for all v.
bool leq(const SpinConfig &sigma, const SpinConfig &tau);

/// Tree uniqueness threshold: atanh(1/(d-1)). Throws for d <= 2.
double beta_c(int degree);

/// Sum over edges of sigma(u) sigma(v).
int agreement_sum(const Graph &g, const SpinConfig &sigma);
double log_weight(const Graph &g, double beta, const SpinConfig &sigma);
double weight(const Graph &g, double beta, const SpinConfig &sigma);

struct GibbsTable {
  std::size_t n = 0;
  std::vector<double> probs; // indexed by SpinConfig::index()
  double log_z = 0.0;
};

inline constexpr std::size_t kMaxGibbsVertices = 20;

GibbsTable gibbs_exact(const Graph &g, double beta);

/// Spins on a subset W of vertices; 0 marks a free vertex.
using PartialConfig = std::vector<std::int8_t>;

/// mu(sigma(v) = + | sigma agrees with boundary on W), W = nonzero entries.
double conditional_marginal(const Graph &g, double beta, Vertex v,
                            const PartialConfig &boundary);

/// Upward-closed subset of {+,-}^n for n <= 4, as a bitmask over indices.
struct UpSet {
  std::size_t n = 0;
  std::uint32_t members = 0;

  bool contains(std::uint32_t config) const { return ((members >> config) & 1U) != 0; }
  double mass(std::span<const double> distribution) const;
  friend bool operator==(const UpSet &, const UpSet &) = default;
};

inline constexpr std::size_t kMaxUpSetVertices = 4;

bool is_up_set(std::uint32_t members, std::size_t n);
std::vector<UpSet> enumerate_up_sets(std::size_t n);

inline constexpr double kDominanceTolerance = 1e-10;

/// nu1 dominates nu2 iff nu1(U) >= nu2(U) - tol for every up-set U.
bool stochastically_dominates(std::span<const double> nu1, std::span<const double> nu2,
                              double tol = kDominanceTolerance);

} // namespace isingdyn

#endif // ISINGDYN_ISING_HPP
