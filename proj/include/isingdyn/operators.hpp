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

#ifndef ISINGDYN_OPERATORS_HPP
#define ISINGDYN_OPERATORS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>

#include "isingdyn/exact.hpp"

namespace isingdyn {

// Lifted state spaces used to factor the percolation chains:
//   Omega      spin configurations sigma
//   Omega_J    pairs (F, sigma), F any edge subset        index (F << n) | sigma
//   Omega_J^m  triples (F, sigma, marked components)      see MarkedSpace
// Edge subsets and component sets are bitmasks, so these spaces only exist
// for small graphs.

enum class Space { Spins, Joint, Marked };

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr std::size_t kMaxJointBits = 20; // n + |E|
inline constexpr std::size_t kMaxMarkedEdges = 6;

struct JointSpace {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t size() const { return std::size_t{1} << (n + m); }
  std::size_t index(std::uint32_t f, std::uint32_t sigma) const {
    return (static_cast<std::size_t>(f) << n) | sigma;
  }
};

JointSpace joint_space(const Graph &g);

/// Components of (V, F) as vertex bitmasks, ordered by smallest vertex.
std::vector<std::uint32_t> component_masks(const Graph &g, std::uint32_t f);
/// E(sigma) as an edge bitmask.
std::uint32_t agreeing_mask(const Graph &g, std::uint32_t sigma);

class MarkedSpace {
public:
  explicit MarkedSpace(const Graph &g);

  std::size_t n() const { return n_; }
  std::size_t size() const { return size_; }
  std::size_t num_edge_subsets() const { return comps_.size(); }
  const std::vector<std::uint32_t> &components(std::uint32_t f) const { return comps_[f]; }
  /// `marked` is a bitmask over components(f).
  std::size_t index(std::uint32_t f, std::uint32_t marked, std::uint32_t sigma) const {
    return offset_[f] + ((static_cast<std::size_t>(marked) << n_) | sigma);
  }

private:
  std::size_t n_ = 0;
  std::size_t size_ = 0;
  std::vector<std::vector<std::uint32_t>> comps_;
  std::vector<std::size_t> offset_;
};

/// Sparse matrix from `rows` to `cols`, each with the measure that makes the
/// L2 pairings meaningful (mu, nu or nu_m).
struct OperatorMatrix {
  SparseMatrix m;
  Space rows = Space::Spins;
  Space cols = Space::Spins;
  Vector row_measure;
  Vector col_measure;
};

/// Edwards-Sokal measure nu(F, sigma) ∝ p^|F| (1-p)^|E\F| 1(F ⊆ E(sigma)).
Vector es_measure(const Graph &g, double beta);
/// nu_m(F, sigma, C) = nu(F, sigma) * prod over components of the marking odds.
Vector marked_measure(const Graph &g, double beta, const MarkedSpace &space);

/// Omega -> Omega_J: add each agreeing edge with probability p.
OperatorMatrix build_T(const Graph &g, double beta);
/// Omega_J -> Omega: forget F.
OperatorMatrix build_Tstar(const Graph &g, double beta);
/// Omega_J -> Omega_J: resample isolated vertices of (V,F) that lie in A.
OperatorMatrix build_Q(const Graph &g, double beta, const VertexSet &a);
/// Omega_J -> Omega_J^m: mark each component C with probability 2^-(|C|-1).
OperatorMatrix build_S(const Graph &g, double beta, const MarkedSpace &space);
/// Omega_J^m -> Omega_J: drop marks.
OperatorMatrix build_Sstar(const Graph &g, double beta, const MarkedSpace &space);
/// Omega_J^m -> Omega_J^m: recolour marked components contained in A.
OperatorMatrix build_K(const Graph &g, double beta, const MarkedSpace &space,
                       const VertexSet &a);

SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b);
double max_abs_difference(const SparseMatrix &a, const SparseMatrix &b);
double max_abs_difference(const Matrix &a, const SparseMatrix &b);
/// max |M^2 - M|.
double idempotence_residual(const SparseMatrix &m);
/// max |nu(x) M(x,y) - nu(y) M(y,x)|: M equals its own adjoint in L2(nu).
double self_adjoint_residual(const SparseMatrix &m, const Vector &measure);
/// max |mu_r(x) A(x,y) - mu_c(y) B(y,x)|: B is the adjoint of A.
double adjoint_residual(const OperatorMatrix &a, const OperatorMatrix &b);
/// max over random f, g of |<f, A g>_rows - <B f, g>_cols|.
double pairing_residual(const OperatorMatrix &a, const OperatorMatrix &b,
                        std::uint64_t seed, int trials);

struct DecompositionResiduals {
  double iv = 0.0;  // max |IV_A - T Q_A T*|
  double msw = 0.0; // max |MSW_A - T S K_A S* T*|
};

DecompositionResiduals verify_decompositions(const Graph &g, double beta, const VertexSet &a);

} // namespace isingdyn

#endif // ISINGDYN_OPERATORS_HPP
