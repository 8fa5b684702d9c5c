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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed; nothing here is tuned to the outcome.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "isingdyn/coupling.hpp"
#include "isingdyn/error.hpp"
#include "isingdyn/exact.hpp"
#include "isingdyn/operators.hpp"
#include "isingdyn/ssm.hpp"

using namespace isingdyn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

VertexSet as_set(std::size_t n, const std::vector<Vertex> &a) {
  VertexSet s(n);
  for (auto v : a) {
    s.insert(v);
  }
  return s;
}

std::vector<Vertex> all_vertices(std::size_t n) {
  std::vector<Vertex> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = static_cast<Vertex>(i);
  }
  return v;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome stationarity_and_reversibility() {
  const std::vector<Graph> graphs{path(2), path(3), cycle(3), complete_tree(3, 1), cycle(4)};
  double worst_rev = 0.0;
  double worst_stat = 0.0;
  std::size_t kernels = 0;
  for (const auto &g : graphs) {
    const std::size_t n = g.num_vertices();
    std::vector<Vertex> rest = all_vertices(n);
    rest.erase(rest.begin());
    for (double beta : {0.2, 0.5, 1.0}) {
      for (const std::vector<Vertex> &a : {std::vector<Vertex>{0}, rest}) {
        const std::vector<DynamicsSpec> specs{DynamicsSpec::glauber(),
                                              DynamicsSpec::block(singleton_blocks(n)),
                                              DynamicsSpec::block(whole_block(n)),
                                              DynamicsSpec::sw(),
                                              DynamicsSpec::iv(),
                                              DynamicsSpec::msw(),
                                              DynamicsSpec::iv().censored(a),
                                              DynamicsSpec::msw().censored(a),
                                              DynamicsSpec::block(singleton_blocks(n)).censored(a)};
        for (const auto &spec : specs) {
          auto tm = transition_matrix(g, beta, spec);
          worst_rev = std::max(worst_rev, check_reversibility(tm.p, tm.mu));
          worst_stat = std::max(worst_stat, stationarity_residual(tm.p, tm.mu));
          ++kernels;
        }
      }
    }
  }
  return {worst_rev <= 1e-10 && worst_stat <= 1e-10,
          std::to_string(kernels) + " kernels, max detailed-balance residual " + fmt(worst_rev) +
              ", max stationarity residual " + fmt(worst_stat)};
}

std::vector<std::vector<Vertex>> decomposition_sets(std::size_t n) {
  return {{}, {0}, all_vertices(n)};
}

Outcome decompositions() {
  double worst = 0.0;
  for (const Graph &g : {path(2), path(3)}) {
    for (double beta : {0.3, 0.8}) {
      for (const auto &a : decomposition_sets(g.num_vertices())) {
        auto r = verify_decompositions(g, beta, as_set(g.num_vertices(), a));
        worst = std::max({worst, r.iv, r.msw});
      }
    }
  }
  return {worst <= 1e-10, "max entrywise residual " + fmt(worst)};
}

Outcome operator_algebra() {
  double worst = 0.0;
  for (const Graph &g : {path(2), path(3)}) {
    const std::size_t n = g.num_vertices();
    MarkedSpace space(g);
    for (double beta : {0.3, 0.8}) {
      const Vector nu = es_measure(g, beta);
      const Vector num = marked_measure(g, beta, space);
      const auto q = build_Q(g, beta, VertexSet::full(n));
      const auto k = build_K(g, beta, space, VertexSet::full(n));
      const SparseMatrix k2 = multiply(k.m, k.m);
      worst = std::max({worst, idempotence_residual(q.m), self_adjoint_residual(q.m, nu)});
      for (const auto &a : decomposition_sets(n)) {
        const VertexSet as = as_set(n, a);
        const auto qa = build_Q(g, beta, as);
        const auto ka = build_K(g, beta, space, as);
        worst = std::max({worst, idempotence_residual(qa.m), self_adjoint_residual(qa.m, nu),
                          max_abs_difference(multiply(multiply(qa.m, q.m), qa.m), q.m),
                          idempotence_residual(ka.m), self_adjoint_residual(ka.m, num),
                          max_abs_difference(multiply(multiply(ka.m, k2), ka.m), k.m)});
      }
      const auto t = build_T(g, beta);
      const auto ts = build_Tstar(g, beta);
      const auto s = build_S(g, beta, space);
      const auto ss = build_Sstar(g, beta, space);
      worst = std::max({worst, adjoint_residual(t, ts), adjoint_residual(s, ss),
                        pairing_residual(t, ts, 1, 32), pairing_residual(s, ss, 2, 32)});
    }
  }
  return {worst <= 1e-12, "max residual " + fmt(worst)};
}

Outcome censoring_order() {
  std::size_t checked = 0;
  std::size_t failed = 0;
  for (const Graph &g : {edgeless(1), path(2), edgeless(2), path(3), cycle(3)}) {
    const std::size_t n = g.num_vertices();
    for (double beta : {0.2, 0.5, 1.0}) {
      for (const auto &family : {DynamicsSpec::iv(), DynamicsSpec::msw(),
                                 DynamicsSpec::block(singleton_blocks(n))}) {
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
          std::vector<Vertex> a;
          for (Vertex v = 0; v < n; ++v) {
            if ((mask >> v) & 1U) {
              a.push_back(v);
            }
          }
          ++checked;
          failed += check_censoring_order(g, beta, family, a, 1e-12) ? 0 : 1;
        }
      }
    }
  }
  // Negative control: swap the censored chain for the one-step sampler
  // Pi(x, .) = mu, which lies below the positively correlated IV kernel.
  auto p = transition_matrix(path(2), 0.5, DynamicsSpec::iv());
  Matrix pi = p.mu.transpose().replicate(p.p.rows(), 1);
  const bool control_detected = !order_holds(p.p, pi, p.mu, 2, 1e-12);
  const double control_margin = censoring_order_margin(p.p, pi, p.mu, 2);
  return {failed == 0 && control_detected,
          std::to_string(checked) + " (family, A) checks, " + std::to_string(failed) +
              " failed; negative control " + (control_detected ? "detected" : "NOT detected") +
              " (margin " + fmt(control_margin) + ")"};
}

Outcome dominance() {
  Graph g = path(3);
  const Vector top = point_mass(3, 7);
  double worst_gap = 0.0; // min over t of TV(censored) - TV(uncensored)
  bool ok = true;
  for (const auto &family : {DynamicsSpec::iv(), DynamicsSpec::msw(),
                             DynamicsSpec::block(singleton_blocks(3))}) {
    for (const std::vector<Vertex> &a : {std::vector<Vertex>{0}, std::vector<Vertex>{0, 1}}) {
      for (double beta : {0.2, 0.5, 1.0}) {
        auto rep = censored_dominance(g, beta, family, a, top, 10);
        ok = ok && rep.dominates && rep.tv_ordered;
        for (std::size_t t = 1; t < rep.tv_censored.size(); ++t) {
          worst_gap = std::min(worst_gap, rep.tv_censored[t] - rep.tv_uncensored[t]);
        }
      }
    }
  }
  return {ok, "iv, msw, block on path(3), t = 1..10; min TV(censored) - TV(uncensored) " +
                  fmt(worst_gap)};
}

Outcome monotonicity() {
  std::uint64_t violations = 0;
  std::string detail;
  for (const Graph &g : {cycle(8), random_regular(8, 3, 1)}) {
    for (const auto &spec :
         {DynamicsSpec::iv(), DynamicsSpec::msw(), DynamicsSpec::block(ball_blocks(g, 1))}) {
      violations += monotonicity_audit(g, 0.4, spec, 10000, 100, 2024);
    }
  }
  const std::uint64_t fresh =
      monotonicity_audit(cycle(8), 0.4, DynamicsSpec::iv(), 10000, 100, 2024, CouplingMode::Fresh);
  return {violations == 0 && fresh >= 1, std::to_string(violations) +
                                             " violations in 6 x 1e4 x 100 coupled steps; "
                                             "fresh-randomness control " +
                                             std::to_string(fresh)};
}

Outcome comparison() {
  double worst = 1.0;
  std::vector<Graph> graphs;
  for (std::size_t n = 4; n <= 8; ++n) {
    graphs.push_back(cycle(n));
  }
  for (std::size_t n = 3; n <= 8; ++n) {
    graphs.push_back(path(n));
  }
  for (const auto &g : graphs) {
    for (double beta : {0.3, 0.6}) {
      auto sw = transition_matrix(g, beta, DynamicsSpec::sw());
      auto iv = transition_matrix(g, beta, DynamicsSpec::iv());
      const double diff =
          spectral_report(sw.p, sw.mu).gap - spectral_report(iv.p, iv.mu).gap;
      worst = std::min(worst, diff);
    }
  }
  return {worst >= -1e-9, "min gap(SW) - gap(IV) " + fmt(worst)};
}

Outcome relaxation_proxy() {
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t n = 4; n <= 10; ++n) {
    auto iv = transition_matrix(cycle(n), 0.3, DynamicsSpec::iv());
    const double gap = spectral_report(iv.p, iv.mu).gap;
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "gap(IV) in [%.6f, %.6f], max/min = %.6f", lo, hi, hi / lo);
  return {hi / lo <= 2.0, buf};
}

double median_coupling(std::size_t n) {
  Graph g = cycle(n);
  std::vector<double> t;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto c = coupling_time(g, 0.3, DynamicsSpec::iv(), seed);
    if (c.timeout) {
      return INFINITY;
    }
    t.push_back(static_cast<double>(c.steps));
  }
  std::sort(t.begin(), t.end());
  return 0.5 * (t[99] + t[100]);
}

Outcome mixing_proxy() {
  std::string detail = "median coalescence";
  double t16 = 0.0;
  double t1024 = 0.0;
  for (std::size_t n : {16, 64, 256, 1024}) {
    const double m = median_coupling(n);
    detail += " n=" + std::to_string(n) + ":" + fmt(m);
    if (n == 16) {
      t16 = m;
    }
    if (n == 1024) {
      t1024 = m;
    }
  }
  const double ratio = t1024 / t16;
  detail += "; t(1024)/t(16) = " + fmt(ratio);
  return {ratio <= 5.0, detail};
}

Outcome assm_radius() {
  auto hot = find_assm_radius(complete_tree(3, 4), 0.4, 6);
  auto free = find_assm_radius(complete_tree(3, 4), 0.0, 6);
  const bool ok = hot.radius && *hot.radius <= 6 && free.radius && *free.radius == 0;
  std::string detail = "tree(3,4): beta 0.4 -> R = " +
                       (hot.radius ? std::to_string(*hot.radius) : std::string("none")) +
                       ", beta 0 -> R = " +
                       (free.radius ? std::to_string(*free.radius) : std::string("none"));
  if (!hot.infeasible.empty()) {
    detail += ", " + std::to_string(hot.infeasible.size()) + " infeasible";
  }
  return {ok, detail};
}

Outcome sampling() {
  Graph g = path(2);
  const double beta = 0.5;
  const Vector mu = gibbs_vector(g, beta);
  double worst = 0.0;
  std::string detail;
  std::uint64_t seed = 11;
  for (const auto &spec : {DynamicsSpec::sw(), DynamicsSpec::msw(), DynamicsSpec::iv()}) {
    RandomStream stream(seed++);
    SpinConfig sigma = SpinConfig::all_plus(2);
    std::uint64_t t = 0;
    for (; t < 100; ++t) {
      sigma = step(g, beta, spec, sigma, StepRandomness(stream, t));
    }
    std::vector<double> counts(4, 0.0);
    const std::uint64_t samples = 1'000'000;
    for (std::uint64_t i = 0; i < samples; ++i, ++t) {
      sigma = step(g, beta, spec, sigma, StepRandomness(stream, t));
      counts[sigma.index()] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t x = 0; x < 4; ++x) {
      tv += std::abs(counts[x] / static_cast<double>(samples) - mu[static_cast<Eigen::Index>(x)]);
    }
    tv *= 0.5;
    worst = std::max(worst, tv);
    detail += (detail.empty() ? "" : ", ") + spec.name() + " TV " + fmt(tv);
  }
  return {worst <= 0.005, detail};
}

Outcome critical_beta() {
  const double b3 = beta_c(3);
  bool threw = false;
  try {
    (void)beta_c(2);
  } catch (const Error &) {
    threw = true;
  }
  return {std::abs(b3 - std::atanh(0.5)) <= 1e-9 && threw,
          "beta_c(3) = " + fmt(b3) + (threw ? ", beta_c(2) rejected" : ", beta_c(2) accepted")};
}

} // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"stationarity and reversibility", stationarity_and_reversibility},
      {"decomposition identities", decompositions},
      {"operator algebra", operator_algebra},
      {"censoring order", censoring_order},
      {"censored dominance", dominance},
      {"monotone grand couplings", monotonicity},
      {"SW gap dominates IV gap", comparison},
      {"IV gap bounded across cycles", relaxation_proxy},
      {"IV coalescence grows logarithmically", mixing_proxy},
      {"ASSM radius", assm_radius},
      {"sampling correctness", sampling},
      {"uniqueness threshold", critical_beta},
  };
  int failures = 0;
  int index = 0;
  for (const auto &[name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-4s %2d %-38s %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", index, name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", index - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
