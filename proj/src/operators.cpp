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

#include "isingdyn/operators.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include "isingdyn/error.hpp"
#include "isingdyn/random.hpp"

namespace isingdyn {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet> &t) {
  SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::uint32_t vertex_mask(const VertexSet &a) {
  std::uint32_t out = 0;
  for (auto v : a.members()) {
    out |= 1U << v;
  }
  return out;
}

/// Probability that S marks a component of the given size: 2^-(|C|-1).
double mark_probability(std::uint32_t component) {
  return std::ldexp(1.0, 1 - std::popcount(component));
}

double marking_weight(const std::vector<std::uint32_t> &comps, std::uint32_t marked) {
  double w = 1.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    double q = mark_probability(comps[c]);
    w *= ((marked >> c) & 1U) != 0 ? q : 1.0 - q;
  }
  return w;
}

} // namespace

JointSpace joint_space(const Graph &g) {
  if (g.num_vertices() + g.num_edges() > kMaxJointBits) {
    fail(ErrorKind::SizeLimit, "joint space needs n + |E| <= " + std::to_string(kMaxJointBits));
  }
  return {g.num_vertices(), g.num_edges()};
}

std::uint32_t agreeing_mask(const Graph &g, std::uint32_t sigma) {
  std::uint32_t out = 0;
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    if ((((sigma >> g.edge(e).u) ^ (sigma >> g.edge(e).v)) & 1U) == 0) {
      out |= 1U << e;
    }
  }
  return out;
}

std::vector<std::uint32_t> component_masks(const Graph &g, std::uint32_t f) {
  const std::size_t n = g.num_vertices();
  require(n <= 31 && g.num_edges() <= 32, "bitmask components need a small graph");
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0U);
  auto find = [&parent](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::uint32_t bits = f; bits != 0; bits &= bits - 1) {
    const auto &e = g.edge(static_cast<EdgeIndex>(std::countr_zero(bits)));
    std::uint32_t a = find(e.u);
    std::uint32_t b = find(e.v);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Roots are the smallest vertex of their component, so scanning roots in
  // increasing order yields components ordered by smallest vertex.
  std::vector<std::uint32_t> slot(n, UINT32_MAX);
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t r = find(v);
    if (slot[r] == UINT32_MAX) {
      slot[r] = static_cast<std::uint32_t>(out.size());
      out.push_back(0);
    }
    out[slot[r]] |= 1U << v;
  }
  return out;
}

MarkedSpace::MarkedSpace(const Graph &g) : n_(g.num_vertices()) {
  if (g.num_edges() > kMaxMarkedEdges || n_ > kMaxExactVertices) {
    fail(ErrorKind::SizeLimit, "marked joint space needs |E| <= " +
                                   std::to_string(kMaxMarkedEdges) + " and n <= " +
                                   std::to_string(kMaxExactVertices));
  }
  const std::size_t subsets = std::size_t{1} << g.num_edges();
  comps_.reserve(subsets);
  offset_.reserve(subsets);
  for (std::uint32_t f = 0; f < subsets; ++f) {
    comps_.push_back(component_masks(g, f));
    offset_.push_back(size_);
    size_ += (std::size_t{1} << comps_.back().size()) << n_;
  }
}

Vector es_measure(const Graph &g, double beta) {
  const JointSpace js = joint_space(g);
  const double p = bond_probability(beta);
  Vector nu = Vector::Zero(static_cast<Eigen::Index>(js.size()));
  const std::uint32_t edge_subsets = 1U << js.m;
  const std::uint32_t configs = 1U << js.n;
  for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
    const std::uint32_t agree = agreeing_mask(g, sigma);
    for (std::uint32_t f = 0; f < edge_subsets; ++f) {
      if ((f & ~agree) != 0) {
        continue;
      }
      const int kept = std::popcount(f);
      nu[static_cast<Eigen::Index>(js.index(f, sigma))] =
          std::pow(p, kept) * std::pow(1.0 - p, static_cast<int>(js.m) - kept);
    }
  }
  return nu / nu.sum();
}

Vector marked_measure(const Graph &g, double beta, const MarkedSpace &space) {
  const JointSpace js = joint_space(g);
  const Vector nu = es_measure(g, beta);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  const std::uint32_t configs = 1U << js.n;
  for (std::uint32_t f = 0; f < space.num_edge_subsets(); ++f) {
    const auto &comps = space.components(f);
    const std::uint32_t markings = 1U << comps.size();
    for (std::uint32_t marked = 0; marked < markings; ++marked) {
      const double w = marking_weight(comps, marked);
      for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
        out[static_cast<Eigen::Index>(space.index(f, marked, sigma))] =
            nu[static_cast<Eigen::Index>(js.index(f, sigma))] * w;
      }
    }
  }
  return out;
}

OperatorMatrix build_T(const Graph &g, double beta) {
  const JointSpace js = joint_space(g);
  const double p = bond_probability(beta);
  const std::uint32_t configs = 1U << js.n;
  std::vector<Triplet> t;
  for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
    const std::uint32_t agree = agreeing_mask(g, sigma);
    const int agree_count = std::popcount(agree);
    for (std::uint32_t f = agree;; f = (f - 1) & agree) {
      const int kept = std::popcount(f);
      const double w = std::pow(p, kept) * std::pow(1.0 - p, agree_count - kept);
      if (w != 0.0) {
        t.emplace_back(sigma, static_cast<int>(js.index(f, sigma)), w);
      }
      if (f == 0) {
        break;
      }
    }
  }
  return {from_triplets(configs, js.size(), t), Space::Spins, Space::Joint,
          gibbs_vector(g, beta), es_measure(g, beta)};
}

OperatorMatrix build_Tstar(const Graph &g, double beta) {
  const JointSpace js = joint_space(g);
  const std::uint32_t configs = 1U << js.n;
  std::vector<Triplet> t;
  for (std::uint32_t f = 0; f < (1U << js.m); ++f) {
    for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
      t.emplace_back(static_cast<int>(js.index(f, sigma)), sigma, 1.0);
    }
  }
  return {from_triplets(js.size(), configs, t), Space::Joint, Space::Spins,
          es_measure(g, beta), gibbs_vector(g, beta)};
}

OperatorMatrix build_Q(const Graph &g, double beta, const VertexSet &a) {
  const JointSpace js = joint_space(g);
  const std::uint32_t configs = 1U << js.n;
  const std::uint32_t amask = vertex_mask(a);
  std::vector<Triplet> t;
  for (std::uint32_t f = 0; f < (1U << js.m); ++f) {
    std::uint32_t touched = 0;
    for (std::uint32_t bits = f; bits != 0; bits &= bits - 1) {
      const auto &e = g.edge(static_cast<EdgeIndex>(std::countr_zero(bits)));
      touched |= (1U << e.u) | (1U << e.v);
    }
    const std::uint32_t iso = amask & ~touched & (configs - 1);
    const double share = std::ldexp(1.0, -std::popcount(iso));
    for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
      if ((f & ~agreeing_mask(g, sigma)) != 0) {
        continue;
      }
      for (std::uint32_t s = iso;; s = (s - 1) & iso) {
        std::uint32_t tau = (sigma & ~iso) | s;
        t.emplace_back(static_cast<int>(js.index(f, sigma)), static_cast<int>(js.index(f, tau)),
                       share);
        if (s == 0) {
          break;
        }
      }
    }
  }
  Vector nu = es_measure(g, beta);
  return {from_triplets(js.size(), js.size(), t), Space::Joint, Space::Joint, nu, nu};
}

OperatorMatrix build_S(const Graph &g, double beta, const MarkedSpace &space) {
  const JointSpace js = joint_space(g);
  const std::uint32_t configs = 1U << js.n;
  std::vector<Triplet> t;
  for (std::uint32_t f = 0; f < space.num_edge_subsets(); ++f) {
    const auto &comps = space.components(f);
    for (std::uint32_t marked = 0; marked < (1U << comps.size()); ++marked) {
      const double w = marking_weight(comps, marked);
      if (w == 0.0) {
        continue;
      }
      for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
        t.emplace_back(static_cast<int>(js.index(f, sigma)),
                       static_cast<int>(space.index(f, marked, sigma)), w);
      }
    }
  }
  return {from_triplets(js.size(), space.size(), t), Space::Joint, Space::Marked,
          es_measure(g, beta), marked_measure(g, beta, space)};
}

OperatorMatrix build_Sstar(const Graph &g, double beta, const MarkedSpace &space) {
  const JointSpace js = joint_space(g);
  const std::uint32_t configs = 1U << js.n;
  std::vector<Triplet> t;
  for (std::uint32_t f = 0; f < space.num_edge_subsets(); ++f) {
    const auto &comps = space.components(f);
    for (std::uint32_t marked = 0; marked < (1U << comps.size()); ++marked) {
      for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
        t.emplace_back(static_cast<int>(space.index(f, marked, sigma)),
                       static_cast<int>(js.index(f, sigma)), 1.0);
      }
    }
  }
  return {from_triplets(space.size(), js.size(), t), Space::Marked, Space::Joint,
          marked_measure(g, beta, space), es_measure(g, beta)};
}

OperatorMatrix build_K(const Graph &g, double beta, const MarkedSpace &space, const VertexSet &a) {
  const std::uint32_t configs = 1U << space.n();
  const std::uint32_t amask = vertex_mask(a);
  std::vector<Triplet> t;
  for (std::uint32_t f = 0; f < space.num_edge_subsets(); ++f) {
    const auto &comps = space.components(f);
    for (std::uint32_t marked = 0; marked < (1U << comps.size()); ++marked) {
      std::vector<std::uint32_t> free;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        if (((marked >> c) & 1U) != 0 && (comps[c] & ~amask) == 0) {
          free.push_back(comps[c]);
        }
      }
      std::uint32_t free_mask = 0;
      for (auto c : free) {
        free_mask |= c;
      }
      const double share = std::ldexp(1.0, -static_cast<int>(free.size()));
      for (std::uint32_t sigma = 0; sigma < configs; ++sigma) {
        if ((f & ~agreeing_mask(g, sigma)) != 0) {
          continue;
        }
        for (std::uint32_t pat = 0; pat < (1U << free.size()); ++pat) {
          std::uint32_t tau = sigma & ~free_mask;
          for (std::size_t c = 0; c < free.size(); ++c) {
            if (((pat >> c) & 1U) != 0) {
              tau |= free[c];
            }
          }
          t.emplace_back(static_cast<int>(space.index(f, marked, sigma)),
                         static_cast<int>(space.index(f, marked, tau)), share);
        }
      }
    }
  }
  Vector nu_m = marked_measure(g, beta, space);
  return {from_triplets(space.size(), space.size(), t), Space::Marked, Space::Marked, nu_m, nu_m};
}

SparseMatrix multiply(const SparseMatrix &a, const SparseMatrix &b) {
  SparseMatrix out = a * b;
  out.prune(0.0);
  return out;
}

double max_abs_difference(const SparseMatrix &a, const SparseMatrix &b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shapes differ");
  SparseMatrix d = a - b;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

double max_abs_difference(const Matrix &a, const SparseMatrix &b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shapes differ");
  return (a - Matrix(b)).cwiseAbs().maxCoeff();
}

double idempotence_residual(const SparseMatrix &m) {
  return max_abs_difference(multiply(m, m), m);
}

double self_adjoint_residual(const SparseMatrix &m, const Vector &measure) {
  SparseMatrix weighted = measure.asDiagonal() * m;
  SparseMatrix transposed = weighted.transpose();
  return max_abs_difference(weighted, transposed);
}

double adjoint_residual(const OperatorMatrix &a, const OperatorMatrix &b) {
  require(a.m.rows() == b.m.cols() && a.m.cols() == b.m.rows(), "operators are not transposed");
  SparseMatrix lhs = a.row_measure.asDiagonal() * a.m;
  SparseMatrix rhs_t = b.row_measure.asDiagonal() * b.m;
  SparseMatrix rhs = rhs_t.transpose();
  return max_abs_difference(lhs, rhs);
}

double pairing_residual(const OperatorMatrix &a, const OperatorMatrix &b, std::uint64_t seed,
                        int trials) {
  const RandomStream stream(seed);
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Vector f(a.m.rows());
    Vector h(a.m.cols());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      f[i] = 2.0 * stream.uniform(static_cast<std::uint64_t>(trial), StreamLabel::Auxiliary,
                                  static_cast<std::uint32_t>(i)) - 1.0;
    }
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      h[i] = 2.0 * stream.uniform(static_cast<std::uint64_t>(trial), StreamLabel::VertexUniform,
                                  static_cast<std::uint32_t>(i)) - 1.0;
    }
    Vector ah = a.m * h;
    Vector bf = b.m * f;
    double lhs = inner(f, ah, a.row_measure);
    double rhs = inner(bf, h, a.col_measure);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

DecompositionResiduals verify_decompositions(const Graph &g, double beta, const VertexSet &a) {
  const MarkedSpace space(g);
  const auto t = build_T(g, beta);
  const auto tstar = build_Tstar(g, beta);
  const auto q = build_Q(g, beta, a);
  const auto s = build_S(g, beta, space);
  const auto sstar = build_Sstar(g, beta, space);
  const auto k = build_K(g, beta, space, a);

  const std::vector<Vertex> members = a.members();
  const auto iv = transition_matrix(g, beta, DynamicsSpec::iv().censored(members));
  const auto msw = transition_matrix(g, beta, DynamicsSpec::msw().censored(members));

  SparseMatrix iv_product = multiply(multiply(t.m, q.m), tstar.m);
  SparseMatrix msw_product =
      multiply(multiply(multiply(multiply(t.m, s.m), k.m), sstar.m), tstar.m);
  return {max_abs_difference(iv.p, iv_product), max_abs_difference(msw.p, msw_product)};
}

} // namespace isingdyn
