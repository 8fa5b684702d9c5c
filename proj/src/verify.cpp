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

#include "isingdyn/verify.hpp"

#include <cmath>
#include <optional>

#include <json.hpp>

#include "isingdyn/error.hpp"
#include "isingdyn/exact.hpp"
#include "isingdyn/operators.hpp"

namespace isingdyn {

namespace {

constexpr double kKernelTol = 1e-10;
constexpr double kOrderTol = 1e-12;
constexpr std::size_t kMaxCensoringVertices = 4;

struct Kernel {
  std::string label;
  DynamicsSpec spec;
};

std::vector<Vertex> all_vertices(std::size_t n) {
  std::vector<Vertex> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    out[v] = static_cast<Vertex>(v);
  }
  return out;
}

std::vector<std::vector<Vertex>> censor_choices(std::size_t n) {
  std::vector<std::vector<Vertex>> out{{0}};
  if (n >= 2) {
    std::vector<Vertex> rest;
    for (Vertex v = 1; v < n; ++v) {
      rest.push_back(v);
    }
    out.push_back(rest);
  }
  return out;
}

std::vector<Kernel> kernel_family(std::size_t n) {
  std::vector<Kernel> out{
      {"glauber", DynamicsSpec::glauber()},
      {"block(singletons)", DynamicsSpec::block(singleton_blocks(n))},
      {"block(whole)", DynamicsSpec::block(whole_block(n))},
      {"sw", DynamicsSpec::sw()},
      {"iv", DynamicsSpec::iv()},
      {"msw", DynamicsSpec::msw()},
  };
  for (const auto &a : censor_choices(n)) {
    out.push_back({"iv_A", DynamicsSpec::iv().censored(a)});
    out.push_back({"msw_A", DynamicsSpec::msw().censored(a)});
    out.push_back({"block_A", DynamicsSpec::block(singleton_blocks(n)).censored(a)});
  }
  return out;
}

/// Moves half of the all-plus -> flip(0) probability onto the diagonal:
/// rows stay stochastic but detailed balance breaks.
void inject_fault(Matrix &p) {
  const Eigen::Index top = p.rows() - 1;
  const Eigen::Index flipped = top ^ 1;
  const double moved = 0.5 * p(top, flipped);
  p(top, flipped) -= moved;
  p(top, top) += moved;
}

CheckResult skipped(std::string check, std::string kernel, std::string why) {
  CheckResult r;
  r.check = std::move(check);
  r.kernel = std::move(kernel);
  r.skipped = true;
  r.note = std::move(why);
  return r;
}

CheckResult residual_check(std::string check, std::string kernel, std::vector<Vertex> a,
                           double value, double tol) {
  CheckResult r;
  r.check = std::move(check);
  r.kernel = std::move(kernel);
  r.a = std::move(a);
  r.value = value;
  r.tol = tol;
  r.pass = std::isfinite(value) && value <= tol;
  return r;
}

void kernel_checks(const Graph &g, double beta, const VerifyOptions &options,
                   std::vector<CheckResult> &out) {
  const std::size_t n = g.num_vertices();
  for (const auto &k : kernel_family(n)) {
    const std::vector<Vertex> a = k.spec.censor.value_or(std::vector<Vertex>{});
    TransitionMatrix tm = transition_matrix(g, beta, k.spec);
    if (options.inject_fault && k.spec.kind == DynamicsKind::Glauber && !k.spec.censor) {
      inject_fault(tm.p);
    }
    out.push_back(residual_check("row_sums", k.label, a, row_sum_residual(tm.p), kKernelTol));
    out.push_back(residual_check("stationarity", k.label, a,
                                 stationarity_residual(tm.p, tm.mu), kKernelTol));
    out.push_back(residual_check("reversibility", k.label, a,
                                 check_reversibility(tm.p, tm.mu), kKernelTol));
    if (k.spec.censor) {
      continue; // censored kernels are not ergodic
    }
    CheckResult spectral;
    spectral.check = "spectral_gap";
    spectral.kernel = k.label;
    spectral.measure = "gap";
    std::optional<SpectralReport> rep;
    try {
      rep = spectral_report(tm.p, tm.mu);
      spectral.value = rep->gap;
      spectral.pass = rep->gap > 0.0 && std::abs(rep->eigenvalues.front() - 1.0) <= 1e-9 &&
                      rep->eigenvalues.back() >= -1.0 - 1e-9;
    } catch (const Error &e) {
      spectral.pass = false;
      spectral.note = e.what();
    }
    out.push_back(spectral);
    if (tm.p.rows() > static_cast<Eigen::Index>(kMaxMixingStates)) {
      out.push_back(skipped("mixing_time", k.label, "state space too large"));
      continue;
    }
    const MixingTime mt = tv_mixing_time(tm.p, tm.mu, options.eps);
    CheckResult mixing;
    mixing.check = "mixing_time";
    mixing.kernel = k.label;
    mixing.measure = "steps";
    mixing.value = static_cast<double>(mt.steps);
    mixing.tol = options.eps;
    mixing.pass = !mt.timeout;
    if (mt.timeout) {
      mixing.note = "TV did not drop below eps within the step cap";
    }
    out.push_back(mixing);
    if (rep && !mt.timeout && !rep->relaxation_infinite) {
      // (T_rel - 1) log(1 / (2 eps)) <= T_mix
      CheckResult bound;
      bound.check = "relaxation_mixing_bound";
      bound.kernel = k.label;
      bound.measure = "margin";
      bound.value = static_cast<double>(mt.steps) -
                    (rep->relaxation_time - 1.0) * std::log(1.0 / (2.0 * options.eps));
      bound.tol = 1e-9;
      bound.pass = bound.value >= -bound.tol;
      out.push_back(bound);
    }
  }
}

void decomposition_checks(const Graph &g, double beta, std::vector<CheckResult> &out) {
  const std::size_t n = g.num_vertices();
  if (g.num_edges() > kMaxMarkedEdges) {
    out.push_back(skipped("decomposition", "", "marked joint space needs |E| <= " +
                                                   std::to_string(kMaxMarkedEdges)));
    return;
  }
  for (const auto &a : {std::vector<Vertex>{}, std::vector<Vertex>{0}, all_vertices(n)}) {
    VertexSet set(n);
    for (auto v : a) {
      set.insert(v);
    }
    const DecompositionResiduals res = verify_decompositions(g, beta, set);
    out.push_back(residual_check("decomposition", "iv_A", a, res.iv, kKernelTol));
    out.push_back(residual_check("decomposition", "msw_A", a, res.msw, kKernelTol));
  }
}

std::vector<std::pair<std::string, DynamicsSpec>> monotone_families(std::size_t n) {
  return {{"iv", DynamicsSpec::iv()},
          {"msw", DynamicsSpec::msw()},
          {"block(singletons)", DynamicsSpec::block(singleton_blocks(n))}};
}

void censoring_checks(const Graph &g, double beta, std::vector<CheckResult> &out) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxCensoringVertices) {
    out.push_back(skipped("censoring_order", "", "up-set enumeration needs n <= " +
                                                     std::to_string(kMaxCensoringVertices)));
  } else {
    for (const auto &[label, family] : monotone_families(n)) {
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        std::vector<Vertex> a;
        for (Vertex v = 0; v < n; ++v) {
          if (((mask >> v) & 1U) != 0) {
            a.push_back(v);
          }
        }
        const TransitionMatrix p = transition_matrix(g, beta, family);
        const TransitionMatrix pa = transition_matrix(g, beta, family.censored(a));
        CheckResult r;
        r.check = "censoring_order";
        r.kernel = label;
        r.a = a;
        r.measure = "margin";
        r.value = censoring_order_margin(p.p, pa.p, p.mu, n);
        r.tol = kOrderTol;
        r.pass = r.value >= -kOrderTol;
        out.push_back(r);
      }
    }
  }
  if (n > kMaxCensoringVertices) {
    out.push_back(skipped("censored_dominance", "", "up-set enumeration needs n <= " +
                                                        std::to_string(kMaxCensoringVertices)));
    return;
  }
  const Vector start = point_mass(n, (std::uint64_t{1} << n) - 1);
  for (const auto &[label, family] : monotone_families(n)) {
    const DominanceReport rep = censored_dominance(g, beta, family, {0}, start, 10);
    CheckResult r;
    r.check = "censored_dominance";
    r.kernel = label;
    r.a = {0};
    r.measure = "steps";
    r.value = 10;
    r.tol = kOrderTol;
    r.pass = rep.dominates && rep.tv_ordered;
    if (!r.pass) {
      r.note = rep.dominates ? "TV order violated" : "stochastic order violated";
    }
    out.push_back(r);
  }
}

} // namespace

VerifyReport run_verification(const Graph &g, double beta, const VerifyOptions &options) {
  require(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0");
  require(options.eps > 0.0 && options.eps < 1.0, "eps must lie in (0, 1)");
  if (g.num_vertices() > kMaxExactVertices || g.num_edges() > kMaxExactEdges) {
    fail(ErrorKind::SizeLimit, "exact verification needs n <= " +
                                   std::to_string(kMaxExactVertices) + " and |E| <= " +
                                   std::to_string(kMaxExactEdges));
  }
  VerifyReport report;
  kernel_checks(g, beta, options, report.checks);
  decomposition_checks(g, beta, report.checks);
  censoring_checks(g, beta, report.checks);
  for (const auto &c : report.checks) {
    if (!c.skipped && !c.pass) {
      report.all_pass = false;
    }
  }
  return report;
}

std::string to_json(const VerifyReport &report, const std::string &graph, double beta) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto &c : report.checks) {
    nlohmann::json j = {{"check", c.check}, {"graph", graph}, {"beta", beta}};
    if (!c.kernel.empty()) {
      j["dynamics"] = c.kernel;
    }
    if (c.skipped) {
      j["skipped"] = true;
      j["reason"] = c.note;
      checks.push_back(j);
      continue;
    }
    j["A"] = c.a;
    j[c.measure] = c.value;
    j["tolerance"] = c.tol;
    j["pass"] = c.pass;
    if (!c.note.empty()) {
      j["note"] = c.note;
    }
    checks.push_back(j);
  }
  return nlohmann::json{{"checks", checks}, {"all_pass", report.all_pass}}.dump(2);
}

} // namespace isingdyn
