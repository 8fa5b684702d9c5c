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

#include "isingdyn.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "isingdyn/coupling.hpp"
#include "isingdyn/error.hpp"
#include "isingdyn/exact.hpp"
#include "isingdyn/ssm.hpp"
#include "isingdyn/verify.hpp"

struct isd_graph {
  isingdyn::Graph g;
};

struct isd_dynamics {
  isingdyn::DynamicsSpec spec;
  std::size_t n;
};

struct isd_chain {
  isingdyn::Graph g;
  double beta;
  isingdyn::DynamicsSpec spec;
  isingdyn::RandomStream stream;
  isingdyn::SpinConfig state;
  std::uint64_t t;
};

namespace {

thread_local std::string last_error;

isd_status status_of(isingdyn::ErrorKind kind) {
  switch (kind) {
  case isingdyn::ErrorKind::InvalidArgument:
    return ISD_ERR_INVALID_ARGUMENT;
  case isingdyn::ErrorKind::Parse:
    return ISD_ERR_PARSE;
  case isingdyn::ErrorKind::Io:
    return ISD_ERR_IO;
  case isingdyn::ErrorKind::SizeLimit:
    return ISD_ERR_SIZE_LIMIT;
  case isingdyn::ErrorKind::Unsupported:
    return ISD_ERR_UNSUPPORTED;
  }
  return ISD_ERR_INTERNAL;
}

isd_status set_error(isd_status status, const char *message) {
  last_error = message;
  return status;
}

template <typename F> isd_status guarded(F &&body) {
  try {
    last_error.clear();
    body();
    return ISD_OK;
  } catch (const isingdyn::Error &e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc &) {
    return set_error(ISD_ERR_SIZE_LIMIT, "out of memory");
  } catch (const std::exception &e) {
    return set_error(ISD_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(ISD_ERR_INTERNAL, "unknown error");
  }
}

void need(bool cond, const char *what) {
  if (!cond) {
    isingdyn::fail(isingdyn::ErrorKind::InvalidArgument, what);
  }
}

void check_beta(double beta) { need(std::isfinite(beta) && beta >= 0.0, "beta must be finite and >= 0"); }

char *copy_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) {
    throw std::bad_alloc();
  }
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

} // namespace

extern "C" {

const char *isd_last_error(void) { return last_error.c_str(); }

const char *isd_status_name(isd_status status) {
  switch (status) {
  case ISD_OK:
    return "ok";
  case ISD_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case ISD_ERR_PARSE:
    return "parse error";
  case ISD_ERR_IO:
    return "I/O error";
  case ISD_ERR_SIZE_LIMIT:
    return "size limit exceeded";
  case ISD_ERR_UNSUPPORTED:
    return "unsupported";
  case ISD_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *isd_version(void) { return "0.1.0"; }

void isd_string_free(char *s) { std::free(s); }

isd_status isd_graph_from_spec(const char *spec, isd_graph **out) {
  return guarded([&] {
    need(spec != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new isd_graph{isingdyn::graph_from_spec(spec)};
  });
}

isd_status isd_graph_from_edges(size_t n, const uint32_t *edges, size_t num_edges,
                                isd_graph **out) {
  return guarded([&] {
    need(out != nullptr && (edges != nullptr || num_edges == 0), "null argument");
    *out = nullptr;
    std::vector<isingdyn::Edge> list;
    for (size_t e = 0; e < num_edges; ++e) {
      list.push_back({edges[2 * e], edges[2 * e + 1]});
    }
    *out = new isd_graph{isingdyn::Graph(n, std::move(list))};
  });
}

void isd_graph_free(isd_graph *g) { delete g; }

size_t isd_graph_num_vertices(const isd_graph *g) { return g == nullptr ? 0 : g->g.num_vertices(); }
size_t isd_graph_num_edges(const isd_graph *g) { return g == nullptr ? 0 : g->g.num_edges(); }
size_t isd_graph_max_degree(const isd_graph *g) { return g == nullptr ? 0 : g->g.max_degree(); }

isd_status isd_dynamics_parse(const isd_graph *g, const char *json, isd_dynamics **out) {
  return guarded([&] {
    need(g != nullptr && json != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto spec = isingdyn::parse_dynamics(json, g->g);
    *out = new isd_dynamics{std::move(spec), g->g.num_vertices()};
  });
}

void isd_dynamics_free(isd_dynamics *d) { delete d; }

isd_status isd_dynamics_name(const isd_dynamics *d, char **out) {
  return guarded([&] {
    need(d != nullptr && out != nullptr, "null argument");
    *out = copy_string(d->spec.name());
  });
}

int isd_dynamics_is_monotone(const isd_dynamics *d) {
  return d != nullptr && d->spec.monotone() ? 1 : 0;
}

isd_status isd_chain_new(const isd_graph *g, double beta, const isd_dynamics *d, uint64_t seed,
                         const char *start, isd_chain **out) {
  return guarded([&] {
    need(g != nullptr && d != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    check_beta(beta);
    need(d->n == g->g.num_vertices(), "dynamics was parsed for a different graph");
    const std::size_t n = g->g.num_vertices();
    isingdyn::SpinConfig state = start == nullptr ? isingdyn::SpinConfig::all_plus(n)
                                                  : isingdyn::SpinConfig::from_string(start);
    need(state.size() == n, "start configuration length differs from n");
    *out = new isd_chain{g->g, beta, d->spec, isingdyn::RandomStream(seed), std::move(state), 0};
  });
}

void isd_chain_free(isd_chain *c) { delete c; }

isd_status isd_chain_advance(isd_chain *c, uint64_t steps) {
  return guarded([&] {
    need(c != nullptr, "null argument");
    for (uint64_t i = 0; i < steps; ++i) {
      c->state = isingdyn::step(c->g, c->beta, c->spec, c->state,
                                isingdyn::StepRandomness(c->stream, c->t));
      ++c->t;
    }
  });
}

uint64_t isd_chain_time(const isd_chain *c) { return c == nullptr ? 0 : c->t; }

isd_status isd_chain_state(const isd_chain *c, char *buf, size_t len) {
  return guarded([&] {
    need(c != nullptr && buf != nullptr, "null argument");
    const std::string s = c->state.to_string();
    need(len > s.size(), "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

isd_status isd_gibbs(const isd_graph *g, double beta, double *probs, size_t len) {
  return guarded([&] {
    need(g != nullptr && probs != nullptr, "null argument");
    check_beta(beta);
    const auto table = isingdyn::gibbs_exact(g->g, beta);
    need(len == table.probs.size(), "probability buffer must hold 2^n entries");
    std::copy(table.probs.begin(), table.probs.end(), probs);
  });
}

isd_status isd_coupling_time(const isd_graph *g, double beta, const isd_dynamics *d,
                             uint64_t seed, uint64_t t_max, uint64_t *steps, int *timeout) {
  return guarded([&] {
    need(g != nullptr && d != nullptr && steps != nullptr && timeout != nullptr,
         "null argument");
    check_beta(beta);
    need(d->n == g->g.num_vertices(), "dynamics was parsed for a different graph");
    const auto result = isingdyn::coupling_time(g->g, beta, d->spec, seed, t_max);
    *steps = result.steps;
    *timeout = result.timeout ? 1 : 0;
  });
}

isd_status isd_verify(const isd_graph *g, const char *label, double beta, double eps,
                      unsigned flags, char **report_json, int *all_pass) {
  return guarded([&] {
    need(g != nullptr && report_json != nullptr && all_pass != nullptr, "null argument");
    *report_json = nullptr;
    isingdyn::VerifyOptions options;
    options.eps = eps;
    options.inject_fault = (flags & ISD_VERIFY_INJECT_FAULT) != 0;
    const auto report = isingdyn::run_verification(g->g, beta, options);
    *report_json = copy_string(isingdyn::to_json(report, label == nullptr ? "" : label, beta));
    *all_pass = report.all_pass ? 1 : 0;
  });
}

isd_status isd_gap(const isd_graph *g, double beta, isd_gap_report *out) {
  return guarded([&] {
    need(g != nullptr && out != nullptr, "null argument");
    check_beta(beta);
    auto report_for = [&](const isingdyn::DynamicsSpec &spec) {
      const auto tm = isingdyn::transition_matrix(g->g, beta, spec);
      return isingdyn::spectral_report(tm.p, tm.mu);
    };
    const auto sw = report_for(isingdyn::DynamicsSpec::sw());
    const auto iv = report_for(isingdyn::DynamicsSpec::iv());
    out->gap_sw = sw.gap;
    out->gap_iv = iv.gap;
    out->trel_sw = sw.relaxation_infinite ? 0.0 : sw.relaxation_time;
    out->trel_iv = iv.relaxation_infinite ? 0.0 : iv.relaxation_time;
    out->trel_sw_infinite = sw.relaxation_infinite ? 1 : 0;
    out->trel_iv_infinite = iv.relaxation_infinite ? 1 : 0;
  });
}

isd_status isd_assm(const isd_graph *g, double beta, size_t r_max, char **report_json,
                    int *found, size_t *radius) {
  return guarded([&] {
    need(g != nullptr && report_json != nullptr && found != nullptr && radius != nullptr,
         "null argument");
    *report_json = nullptr;
    check_beta(beta);
    const auto search = isingdyn::find_assm_radius(g->g, beta, r_max);
    nlohmann::json tables = nlohmann::json::array();
    for (const auto &t : search.tables) {
      tables.push_back(nlohmann::json::parse(isingdyn::to_json(t)));
    }
    nlohmann::json doc = {{"radius", nullptr},
                          {"pass", search.radius.has_value()},
                          {"tables", tables},
                          {"infeasible", search.infeasible}};
    if (search.radius) {
      doc["radius"] = *search.radius;
    } else {
      doc["radius"] = "none";
    }
    *found = search.radius ? 1 : 0;
    *radius = search.radius.value_or(0);
    *report_json = copy_string(doc.dump(2));
  });
}

isd_status isd_beta_c(unsigned d, double *out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    *out = isingdyn::beta_c(static_cast<int>(d));
  });
}

} // extern "C"
