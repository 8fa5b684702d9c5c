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

#include "isingdyn/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "isingdyn/error.hpp"
#include "isingdyn/operators.hpp"

namespace isingdyn {

Vector gibbs_vector(const Graph &g, double beta) {
  auto table = gibbs_exact(g, beta);
  return Eigen::Map<const Vector>(table.probs.data(), static_cast<Eigen::Index>(table.probs.size()));
}

namespace {

struct MaskGraph {
  std::size_t n = 0;
  std::vector<std::uint32_t> edge_u;
  std::vector<std::uint32_t> edge_v;
  std::vector<std::uint32_t> incident; // per vertex: edge bitmask
};

MaskGraph mask_graph(const Graph &g) {
  MaskGraph mg;
  mg.n = g.num_vertices();
  mg.incident.assign(mg.n, 0);
  for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
    mg.edge_u.push_back(g.edge(e).u);
    mg.edge_v.push_back(g.edge(e).v);
    mg.incident[g.edge(e).u] |= 1U << e;
    mg.incident[g.edge(e).v] |= 1U << e;
  }
  return mg;
}

std::uint32_t vertex_mask(const VertexSet &a) {
  std::uint32_t out = 0;
  for (auto v : a.members()) {
    out |= 1U << v;
  }
  return out;
}

/// Heat-bath resampling of the vertices in `free` (bitmask) from sigma,
/// accumulated into row with weight `scale`.
void add_heat_bath(const Graph &g, double beta, std::uint32_t sigma, std::uint32_t free,
                   double scale, Vector &row) {
  std::vector<Vertex> vars;
  for (std::uint32_t bits = free; bits != 0; bits &= bits - 1) {
    vars.push_back(static_cast<Vertex>(std::countr_zero(bits)));
  }
  const std::size_t states = std::size_t{1} << vars.size();
  std::vector<double> lw(states);
  double top = -INFINITY;
  for (std::size_t s = 0; s < states; ++s) {
    std::uint32_t tau = sigma & ~free;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (((s >> i) & 1U) != 0) {
        tau |= 1U << vars[i];
      }
    }
    int sum = 0;
    for (const auto &e : g.edges()) {
      if ((((free >> e.u) | (free >> e.v)) & 1U) == 0) {
        continue;
      }
      sum += ((((tau >> e.u) ^ (tau >> e.v)) & 1U) == 0) ? 1 : -1;
    }
    lw[s] = beta * sum;
    top = std::max(top, lw[s]);
  }
  double total = 0.0;
  for (double &x : lw) {
    x = std::exp(x - top);
    total += x;
  }
  for (std::size_t s = 0; s < states; ++s) {
    std::uint32_t tau = sigma & ~free;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (((s >> i) & 1U) != 0) {
        tau |= 1U << vars[i];
      }
    }
    row[tau] += scale * lw[s] / total;
  }
}

void check_exact_bounds(const Graph &g, const DynamicsSpec &spec) {
  if (g.num_vertices() > kMaxExactVertices) {
    fail(ErrorKind::SizeLimit, "exact transition matrix needs n <= " +
                                   std::to_string(kMaxExactVertices));
  }
  bool percolation = spec.kind == DynamicsKind::SwendsenWang ||
                     spec.kind == DynamicsKind::IsolatedVertex ||
                     spec.kind == DynamicsKind::MonotoneSW;
  if (percolation && g.num_edges() > kMaxExactEdges) {
    fail(ErrorKind::SizeLimit, "exact percolation kernel needs |E| <= " +
                                   std::to_string(kMaxExactEdges));
  }
}

} // namespace

TransitionMatrix transition_matrix(const Graph &g, double beta, const DynamicsSpec &spec) {
  spec.validate(g);
  check_exact_bounds(g, spec);
  const std::size_t n = g.num_vertices();
  const std::size_t states = std::size_t{1} << n;
  const MaskGraph mg = mask_graph(g);
  const std::uint32_t a = vertex_mask(spec.censor_set(n));
  const double p = bond_probability(beta);

  TransitionMatrix out;
  out.mu = gibbs_vector(g, beta);
  out.p = Matrix::Zero(static_cast<Eigen::Index>(states), static_cast<Eigen::Index>(states));
  Vector row(static_cast<Eigen::Index>(states));

  for (std::uint32_t sigma = 0; sigma < states; ++sigma) {
    row.setZero();
    switch (spec.kind) {
    case DynamicsKind::Glauber: {
      const SpinConfig config = SpinConfig::from_index(sigma, n);
      for (Vertex v = 0; v < n; ++v) {
        if (((a >> v) & 1U) == 0) {
          row[sigma] += 1.0 / static_cast<double>(n);
          continue;
        }
        double plus = heat_bath_plus(g, beta, config, v);
        row[sigma | (1U << v)] += plus / static_cast<double>(n);
        row[sigma & ~(1U << v)] += (1.0 - plus) / static_cast<double>(n);
      }
      break;
    }
    case DynamicsKind::Block: {
      const double scale = 1.0 / static_cast<double>(spec.blocks.size());
      for (const auto &block : spec.blocks) {
        std::uint32_t free = 0;
        for (Vertex v : block) {
          free |= 1U << v;
        }
        free &= a;
        if (free == 0) {
          row[sigma] += scale;
        } else {
          add_heat_bath(g, beta, sigma, free, scale, row);
        }
      }
      break;
    }
    case DynamicsKind::SwendsenWang:
    case DynamicsKind::IsolatedVertex:
    case DynamicsKind::MonotoneSW: {
      std::uint32_t agree = agreeing_mask(g, sigma);
      const int agree_count = std::popcount(agree);
      // Submasks of E(sigma), including the empty set.
      for (std::uint32_t f = agree;; f = (f - 1) & agree) {
        const int kept = std::popcount(f);
        const double w = std::pow(p, kept) * std::pow(1.0 - p, agree_count - kept);
        if (w > 0.0) {
          if (spec.kind == DynamicsKind::IsolatedVertex) {
            std::uint32_t touched = 0;
            for (std::uint32_t bits = f; bits != 0; bits &= bits - 1) {
              auto e = static_cast<std::size_t>(std::countr_zero(bits));
              touched |= (1U << mg.edge_u[e]) | (1U << mg.edge_v[e]);
            }
            std::uint32_t iso = a & ~touched & static_cast<std::uint32_t>(states - 1);
            const double share = w * std::ldexp(1.0, -std::popcount(iso));
            for (std::uint32_t s = iso;; s = (s - 1) & iso) {
              row[(sigma & ~iso) | s] += share;
              if (s == 0) {
                break;
              }
            }
          } else {
            auto comps = component_masks(g, f);
            if (spec.kind == DynamicsKind::SwendsenWang) {
              const double share = w * std::ldexp(1.0, -static_cast<int>(comps.size()));
              const std::size_t patterns = std::size_t{1} << comps.size();
              for (std::size_t pat = 0; pat < patterns; ++pat) {
                std::uint32_t tau = 0;
                for (std::size_t c = 0; c < comps.size(); ++c) {
                  if (((pat >> c) & 1U) != 0) {
                    tau |= comps[c];
                  }
                }
                row[tau] += share;
              }
            } else {
              // Each component inside A flips with probability 2^-|C|
              // (resampled with prob 2^-(|C|-1), new spin differs w.p. 1/2).
              std::vector<std::uint32_t> movable;
              std::vector<double> flip;
              for (auto c : comps) {
                if ((c & ~a) == 0) {
                  movable.push_back(c);
                  flip.push_back(std::ldexp(1.0, -std::popcount(c)));
                }
              }
              const std::size_t patterns = std::size_t{1} << movable.size();
              for (std::size_t pat = 0; pat < patterns; ++pat) {
                std::uint32_t tau = sigma;
                double prob = w;
                for (std::size_t c = 0; c < movable.size(); ++c) {
                  if (((pat >> c) & 1U) != 0) {
                    tau ^= movable[c];
                    prob *= flip[c];
                  } else {
                    prob *= 1.0 - flip[c];
                  }
                }
                row[tau] += prob;
              }
            }
          }
        }
        if (f == 0) {
          break;
        }
      }
      break;
    }
    }
    out.p.row(sigma) = row.transpose();
  }
  return out;
}

double row_sum_residual(const Matrix &p) {
  return (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double stationarity_residual(const Matrix &p, const Vector &mu) {
  Vector moved = p.transpose() * mu;
  return (moved - mu).cwiseAbs().maxCoeff();
}

double check_reversibility(const Matrix &p, const Vector &mu) {
  require(p.rows() == p.cols() && p.rows() == mu.size(), "matrix and measure sizes differ");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
      worst = std::max(worst, std::abs(mu[i] * p(i, j) - mu[j] * p(j, i)));
    }
  }
  return worst;
}

double inner(const Vector &f, const Vector &g, const Vector &mu) {
  return (f.array() * g.array() * mu.array()).sum();
}

SpectralReport spectral_report(const Matrix &p, const Vector &mu, double tol) {
  const double residual = check_reversibility(p, mu);
  if (residual > tol) {
    fail(ErrorKind::InvalidArgument,
         "spectral report needs a reversible kernel; detailed-balance residual " +
             std::to_string(residual));
  }
  Vector root = mu.array().sqrt();
  Matrix s = root.asDiagonal() * p * root.cwiseInverse().asDiagonal();
  Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::InvalidArgument, "symmetric eigenvalue solver did not converge");
  }
  SpectralReport report;
  const Vector &vals = solver.eigenvalues();
  report.eigenvalues.assign(vals.data(), vals.data() + vals.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), std::greater<>());
  if (report.eigenvalues.size() > 1) {
    report.lambda_star = std::max(std::abs(report.eigenvalues[1]),
                                  std::abs(report.eigenvalues.back()));
  }
  report.gap = 1.0 - report.lambda_star;
  if (report.gap <= 1e-12) {
    report.gap = std::max(report.gap, 0.0);
    report.relaxation_infinite = true;
    report.relaxation_time = INFINITY;
  } else {
    report.relaxation_time = 1.0 / report.gap;
  }
  return report;
}

double tv_distance(const Vector &a, const Vector &b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

MixingTime tv_mixing_time(const Matrix &p, const Vector &mu, double eps, std::uint64_t cap) {
  require(eps > 0.0 && eps < 1.0, "epsilon must lie in (0,1)");
  if (static_cast<std::size_t>(p.rows()) > kMaxMixingStates) {
    fail(ErrorKind::SizeLimit, "mixing time needs at most " +
                                   std::to_string(kMaxMixingStates) + " states");
  }
  auto worst = [&mu](const Matrix &power) {
    double w = 0.0;
    for (Eigen::Index i = 0; i < power.rows(); ++i) {
      w = std::max(w, tv_distance(power.row(i).transpose(), mu));
    }
    return w;
  };
  Matrix power = Matrix::Identity(p.rows(), p.cols());
  for (std::uint64_t t = 0; t <= cap; ++t) {
    if (worst(power) <= eps) {
      return {t, false};
    }
    power = power * p;
  }
  return {cap, true};
}

double dirichlet_form(const Matrix &p, const Vector &mu, const Vector &f, const Vector &g) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      total += mu[i] * p(i, j) * (f[i] - f[j]) * (g[i] - g[j]);
    }
  }
  return 0.5 * total;
}

double censoring_order_margin(const Matrix &p, const Matrix &q, const Vector &mu, std::size_t n) {
  require(p.rows() == q.rows() && p.rows() == mu.size() &&
              static_cast<std::size_t>(p.rows()) == (std::size_t{1} << n),
          "matrix sizes do not match the configuration space");
  const auto ups = enumerate_up_sets(n);
  std::vector<Vector> indicators;
  for (const auto &u : ups) {
    Vector ind = Vector::Zero(mu.size());
    for (Eigen::Index c = 0; c < mu.size(); ++c) {
      ind[c] = u.contains(static_cast<std::uint32_t>(c)) ? 1.0 : 0.0;
    }
    indicators.push_back(std::move(ind));
  }
  double margin = INFINITY;
  for (const auto &fu : indicators) {
    Vector diff = (q - p) * fu;
    for (const auto &fw : indicators) {
      margin = std::min(margin, inner(diff, fw, mu));
    }
  }
  return margin;
}

bool order_holds(const Matrix &p, const Matrix &q, const Vector &mu, std::size_t n, double tol) {
  return censoring_order_margin(p, q, mu, n) >= -tol;
}

bool check_censoring_order(const Graph &g, double beta, const DynamicsSpec &family,
                           const std::vector<Vertex> &a, double tol) {
  if (g.num_vertices() > kMaxUpSetVertices) {
    fail(ErrorKind::SizeLimit, "censoring order check needs n <= " +
                                   std::to_string(kMaxUpSetVertices));
  }
  require(family.kind != DynamicsKind::SwendsenWang, "Swendsen-Wang dynamics has no censoring");
  auto plain = transition_matrix(g, beta, family.uncensored());
  auto censored = transition_matrix(g, beta, family.censored(a));
  return order_holds(plain.p, censored.p, plain.mu, g.num_vertices(), tol);
}

bool ratio_is_increasing(const Vector &nu, const Vector &mu, std::size_t n, double tol) {
  const std::uint32_t states = 1U << n;
  for (std::uint32_t s = 0; s < states; ++s) {
    double r = nu[s] / mu[s];
    for (std::size_t v = 0; v < n; ++v) {
      std::uint32_t up = s | (1U << v);
      if (up == s) {
        continue;
      }
      double r_up = nu[up] / mu[up];
      if (r_up < r - tol * std::max(1.0, std::abs(r))) {
        return false;
      }
    }
  }
  return true;
}

Vector point_mass(std::size_t n, std::uint64_t index) {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  out[static_cast<Eigen::Index>(index)] = 1.0;
  return out;
}

DominanceReport censored_dominance_schedule(const Graph &g, double beta,
                                            const DynamicsSpec &family,
                                            const std::vector<std::vector<Vertex>> &schedule,
                                            const Vector &nu0, double tol) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxUpSetVertices) {
    fail(ErrorKind::SizeLimit, "censored dominance needs n <= " +
                                   std::to_string(kMaxUpSetVertices));
  }
  require(family.kind != DynamicsKind::SwendsenWang, "Swendsen-Wang dynamics has no censoring");
  require(nu0.size() == static_cast<Eigen::Index>(std::size_t{1} << n),
          "start distribution has the wrong size");
  require(std::abs(nu0.sum() - 1.0) <= 1e-9, "start distribution must be normalized");
  auto plain = transition_matrix(g, beta, family.uncensored());
  if (!ratio_is_increasing(nu0, plain.mu, n)) {
    fail(ErrorKind::InvalidArgument, "start distribution nu0 / mu is not increasing");
  }
  std::map<std::vector<Vertex>, Matrix> censored_cache;
  DominanceReport report;
  Eigen::RowVectorXd x = nu0.transpose();
  Eigen::RowVectorXd y = nu0.transpose();
  auto record = [&] {
    Vector xv = x.transpose();
    Vector yv = y.transpose();
    report.tv_uncensored.push_back(tv_distance(xv, plain.mu));
    report.tv_censored.push_back(tv_distance(yv, plain.mu));
    std::vector<double> xs(xv.data(), xv.data() + xv.size());
    std::vector<double> ys(yv.data(), yv.data() + yv.size());
    report.dominates = report.dominates && stochastically_dominates(ys, xs);
    report.tv_ordered =
        report.tv_ordered && report.tv_censored.back() >= report.tv_uncensored.back() - tol;
  };
  record();
  for (const auto &step_set : schedule) {
    std::vector<Vertex> key = step_set;
    std::sort(key.begin(), key.end());
    auto it = censored_cache.find(key);
    if (it == censored_cache.end()) {
      it = censored_cache.emplace(key, transition_matrix(g, beta, family.censored(key)).p).first;
    }
    x = x * plain.p;
    y = y * it->second;
    record();
  }
  return report;
}

DominanceReport censored_dominance(const Graph &g, double beta, const DynamicsSpec &family,
                                   const std::vector<Vertex> &a, const Vector &nu0,
                                   std::size_t t, double tol) {
  return censored_dominance_schedule(g, beta, family, std::vector<std::vector<Vertex>>(t, a), nu0,
                                     tol);
}

} // namespace isingdyn
