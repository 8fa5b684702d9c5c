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

#ifndef ISINGDYN_H
#define ISINGDYN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define ISD_API __attribute__((visibility("default")))
#else
#define ISD_API
#endif

typedef enum isd_status {
  ISD_OK = 0,
  ISD_ERR_INVALID_ARGUMENT = 1,
  ISD_ERR_PARSE = 2,
  ISD_ERR_IO = 3,
  ISD_ERR_SIZE_LIMIT = 4,
  ISD_ERR_UNSUPPORTED = 5,
  ISD_ERR_INTERNAL = 6
} isd_status;

typedef struct isd_graph isd_graph;
typedef struct isd_dynamics isd_dynamics;
typedef struct isd_chain isd_chain;

/* Message for the last failing call on this thread; "" if none. */
ISD_API const char *isd_last_error(void);
ISD_API const char *isd_status_name(isd_status status);
ISD_API const char *isd_version(void);
/* Frees strings returned through char** out-parameters. */
ISD_API void isd_string_free(char *s);

/* Graphs. `spec` is a generator (cycle:8, path:3, tree:3,4, regular:8,3,1,
 * grid:3x3, star:3, triangle, edge, edgeless:N) or an edge-list file. */
ISD_API isd_status isd_graph_from_spec(const char *spec, isd_graph **out);
/* `edges` holds 2*num_edges vertex indices. */
ISD_API isd_status isd_graph_from_edges(size_t n, const uint32_t *edges, size_t num_edges,
                                        isd_graph **out);
ISD_API void isd_graph_free(isd_graph *g);
ISD_API size_t isd_graph_num_vertices(const isd_graph *g);
ISD_API size_t isd_graph_num_edges(const isd_graph *g);
ISD_API size_t isd_graph_max_degree(const isd_graph *g);

/* Dynamics from JSON, e.g. {"kind":"iv","censor":[0,1]} or
 * {"kind":"block","blocks":"ball:1"}. Validated against `g`. */
ISD_API isd_status isd_dynamics_parse(const isd_graph *g, const char *json, isd_dynamics **out);
ISD_API void isd_dynamics_free(isd_dynamics *d);
/* glauber, block, sw, iv, msw, with "_A" appended when censored. */
ISD_API isd_status isd_dynamics_name(const isd_dynamics *d, char **out);
ISD_API int isd_dynamics_is_monotone(const isd_dynamics *d);

/* A single chain. Step t consumes the randomness of (seed, t), so two
 * chains with equal arguments produce identical trajectories. `start` is a
 * "+-" string of length n, or NULL for all-plus. */
ISD_API isd_status isd_chain_new(const isd_graph *g, double beta, const isd_dynamics *d,
                                 uint64_t seed, const char *start, isd_chain **out);
ISD_API void isd_chain_free(isd_chain *c);
ISD_API isd_status isd_chain_advance(isd_chain *c, uint64_t steps);
ISD_API uint64_t isd_chain_time(const isd_chain *c);
/* Writes the state as n characters plus a terminating NUL; `len` >= n + 1. */
ISD_API isd_status isd_chain_state(const isd_chain *c, char *buf, size_t len);

/* Exact Gibbs probabilities, indexed by configuration (bit v set iff
 * vertex v is +). `len` must be 2^n. */
ISD_API isd_status isd_gibbs(const isd_graph *g, double beta, double *probs, size_t len);

/* Grand-coupled run from all-plus and all-minus. On timeout *steps = t_max. */
ISD_API isd_status isd_coupling_time(const isd_graph *g, double beta, const isd_dynamics *d,
                                     uint64_t seed, uint64_t t_max, uint64_t *steps,
                                     int *timeout);

enum {
  ISD_VERIFY_DEFAULT = 0,
  /* Replaces the Glauber kernel with one that breaks spin-flip symmetry. */
  ISD_VERIFY_INJECT_FAULT = 1
};

/* Runs the exact check suite and returns a JSON report; `label` names the
 * graph in every entry and may be NULL. */
ISD_API isd_status isd_verify(const isd_graph *g, const char *label, double beta, double eps,
                              unsigned flags, char **report_json, int *all_pass);

typedef struct isd_gap_report {
  double gap_sw;
  double gap_iv;
  double trel_sw; /* 0 when infinite */
  double trel_iv;
  int trel_sw_infinite;
  int trel_iv_infinite;
} isd_gap_report;

ISD_API isd_status isd_gap(const isd_graph *g, double beta, isd_gap_report *out);

/* Smallest R <= r_max at which every vertex passes. JSON holds the
 * per-vertex tables and any vertex/radius pairs too large to evaluate. */
ISD_API isd_status isd_assm(const isd_graph *g, double beta, size_t r_max, char **report_json,
                            int *found, size_t *radius);

/* atanh(1/(d-1)); d <= 2 is an error. */
ISD_API isd_status isd_beta_c(unsigned d, double *out);

#ifdef __cplusplus
}
#endif

#endif /* ISINGDYN_H */
