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

#ifndef ISINGDYN_EXACT_HPP
#define ISINGDYN_EXACT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "isingdyn/dynamics.hpp"
#include "isingdyn/ising.hpp"

namespace isingdyn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Row-stochastic matrix over Omega = {+,-}^V, rows and columns indexed by
/// SpinConfig::index(), with the Gibbs table it is meant to preserve.
struct TransitionMatrix {
  Matrix p;
  Vector mu;
};

inline constexpr std::size_t kMaxExactVertices = 10;
inline constexpr std::size_t kMaxExactEdges = 14;

/// Exact kernel. Percolation-based chains sum over F within E(sigma).
TransitionMatrix transition_matrix(const Graph &g, double beta, const DynamicsSpec &spec);

Vector gibbs_vector(const Graph &g, double beta);

double row_sum_residual(const Matrix &p);
/// max |mu^T P - mu^T|.
double stationarity_residual(const Matrix &p, const Vector &mu);
/// max |mu(s) P(s,t) - mu(t) P(t,s)|.
double check_reversibility(const Matrix &p, const Vector &mu);

/// <f, g>_mu.
double inner(const Vector &f, const Vector &g, const Vector &mu);

struct SpectralReport {
  std::vector<double> eigenvalues; // descending
  double lambda_star = 0.0;        // max(|lambda_2|, |lambda_min|)
  double gap = 0.0;                // 1 - lambda_star
  double relaxation_time = 0.0;    // 1 / gap; meaningless when infinite
  bool relaxation_infinite = false;
};

inline constexpr double kReversibilityTolerance = 1e-9;

/// Eigenvalues of D^{1/2} P D^{-1/2}, D = diag(mu). Throws when P is not
/// reversible within tol.
SpectralReport spectral_report(const Matrix &p, const Vector &mu,
                               double tol = kReversibilityTolerance);

double tv_distance(const Vector &a, const Vector &b);

struct MixingTime {
  std::uint64_t steps = 0;
  bool timeout = false;
};

inline constexpr std::size_t kMaxMixingStates = 1024;

/// Smallest t with max over starts of ||P^t(x,.) - mu||_TV <= eps.
MixingTime tv_mixing_time(const Matrix &p, const Vector &mu, double eps,
                          std::uint64_t cap = 10'000);

/// 1/2 sum mu(s) P(s,t) (f(s)-f(t)) (g(s)-g(t)).
double dirichlet_form(const Matrix &p, const Vector &mu, const Vector &f, const Vector &g);

// Censoring order P <= Q: <P f, g>_mu <= <Q f, g>_mu for increasing positive
// f, g. Every such function is a nonnegative combination of up-set
// indicators (level sets, Omega included), so checking indicator pairs is
// enough by bilinearity.

/// Smallest value of <Q 1_U, 1_W> - <P 1_U, 1_W> over up-set pairs.
double censoring_order_margin(const Matrix &p, const Matrix &q, const Vector &mu,
                              std::size_t n);
bool order_holds(const Matrix &p, const Matrix &q, const Vector &mu, std::size_t n,
                 double tol);

/// Builds P (spec uncensored) and P_A and checks P <= P_A.
bool check_censoring_order(const Graph &g, double beta, const DynamicsSpec &family,
                           const std::vector<Vertex> &a, double tol);

/// nu / mu is coordinatewise increasing (where it matters, within tol).
bool ratio_is_increasing(const Vector &nu, const Vector &mu, std::size_t n, double tol = 1e-12);

struct DominanceReport {
  bool dominates = true;   // censored law dominates the uncensored one at every t
  bool tv_ordered = true;  // TV(censored) >= TV(uncensored) - tol at every t
  std::vector<double> tv_uncensored;
  std::vector<double> tv_censored;
};

/// Evolves nu0 under P^t and under the censored schedule
/// P_{A_1} P_{A_2} ... P_{A_t}. Throws when nu0/mu is not increasing.
DominanceReport censored_dominance_schedule(const Graph &g, double beta,
                                            const DynamicsSpec &family,
                                            const std::vector<std::vector<Vertex>> &schedule,
                                            const Vector &nu0, double tol = 1e-12);
/// Constant schedule A_1 = ... = A_t = A.
DominanceReport censored_dominance(const Graph &g, double beta, const DynamicsSpec &family,
                                   const std::vector<Vertex> &a, const Vector &nu0,
                                   std::size_t t, double tol = 1e-12);

Vector point_mass(std::size_t n, std::uint64_t index);

} // namespace isingdyn

#endif // ISINGDYN_EXACT_HPP
