#ifndef HCPLACE_H
#define HCPLACE_H

#pragma once

/* Generated by cbindgen from crates/ffi/src. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcpSolver {
  HCP_SOLVER_EXACT = 0,
  HCP_SOLVER_EXACT_BNB = 1,
  HCP_SOLVER_BPSO = 2,
  HCP_SOLVER_GA = 3,
  HCP_SOLVER_GREEDY = 4,
} HcpSolver;

typedef enum HcpStatus {
  HCP_STATUS_OK = 0,
  HCP_STATUS_NULL_POINTER = 1,
  HCP_STATUS_INVALID_INPUT = 2,
  HCP_STATUS_INSTANCE_TOO_LARGE = 3,
  HCP_STATUS_INFEASIBLE = 4,
  HCP_STATUS_IO = 5,
  HCP_STATUS_PARSE = 6,
  HCP_STATUS_PANIC = 7,
} HcpStatus;

// Opaque service graph.
typedef struct HcpGraph HcpGraph;

// Opaque solver outcome.
typedef struct HcpResult HcpResult;

// Pricing coefficients and offload threshold, in hosting units.
typedef struct HcpParams {
  double alpha;
  double beta1;
  double beta2;
  double hq;
} HcpParams;

typedef struct HcpCost {
  double hosting;
  double public_comm;
  double hybrid_comm;
  double total;
} HcpCost;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL if none.
// The pointer stays valid until the next failing call on the same thread.
const char *hcp_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *hcp_version(void);

// Builds a graph from `n_nodes` hosting values and `n_edges` edges given as
// parallel arrays of endpoints and rates.
//
// # Safety
// Every non-null array must hold at least the stated number of elements, and
// `out` must be valid for a pointer write.
enum HcpStatus hcp_graph_new(const double *hosting,
                             size_t n_nodes,
                             const size_t *edge_a,
                             const size_t *edge_b,
                             const double *rates,
                             size_t n_edges,
                             struct HcpGraph **out);

// Reads a graph file (JSON or edge list).
//
// # Safety
// `path` must be a NUL-terminated string and `out` valid for a pointer write.
enum HcpStatus hcp_graph_from_file(const char *path, struct HcpGraph **out);

// Releases a graph. NULL is ignored.
//
// # Safety
// `graph` must come from this library and not be used afterwards.
void hcp_graph_free(struct HcpGraph *graph);

// Node count, or 0 for NULL.
//
// # Safety
// `graph` must be NULL or a live handle.
size_t hcp_graph_node_count(const struct HcpGraph *graph);

// Edge count, or 0 for NULL.
//
// # Safety
// `graph` must be NULL or a live handle.
size_t hcp_graph_edge_count(const struct HcpGraph *graph);

// Sum of hosting units, or 0 for NULL.
//
// # Safety
// `graph` must be NULL or a live handle.
double hcp_graph_total_hosting(const struct HcpGraph *graph);

// Cost breakdown of `placement` (length `len`, which must equal the node count).
//
// # Safety
// Pointers must be live and `placement` must hold `len` bytes.
enum HcpStatus hcp_evaluate_cost(const struct HcpGraph *graph,
                                 const struct HcpParams *params,
                                 const uint8_t *placement,
                                 size_t len,
                                 struct HcpCost *out);

// Whether `placement` offloads at least `params->hq` hosting units.
//
// # Safety
// Pointers must be live and `placement` must hold `len` bytes.
enum HcpStatus hcp_is_feasible(const struct HcpGraph *graph,
                               const struct HcpParams *params,
                               const uint8_t *placement,
                               size_t len,
                               bool *out);

// Solves with the chosen solver using its default configuration. `seed` is
// ignored by the deterministic solvers.
//
// # Safety
// Pointers must be live and `out` valid for a pointer write.
enum HcpStatus hcp_solve(const struct HcpGraph *graph,
                         const struct HcpParams *params,
                         enum HcpSolver solver,
                         uint64_t seed,
                         struct HcpResult **out);

// Releases a result. NULL is ignored.
//
// # Safety
// `result` must come from this library and not be used afterwards.
void hcp_result_free(struct HcpResult *result);

// # Safety
// `result` must be live and `out` valid for a write.
enum HcpStatus hcp_result_cost(const struct HcpResult *result, struct HcpCost *out);

// Copies the placement into `buf`, which must hold exactly the node count.
//
// # Safety
// `result` must be live and `buf` writable for `len` bytes.
enum HcpStatus hcp_result_placement(const struct HcpResult *result, uint8_t *buf, size_t len);

// Placement length, or 0 for NULL.
//
// # Safety
// `result` must be NULL or a live handle.
size_t hcp_result_node_count(const struct HcpResult *result);

// False for NULL and for results on infeasible instances.
//
// # Safety
// `result` must be NULL or a live handle.
bool hcp_result_feasible(const struct HcpResult *result);

// Cost evaluations the solver performed, or 0 for NULL.
//
// # Safety
// `result` must be NULL or a live handle.
uint64_t hcp_result_evaluations(const struct HcpResult *result);

// Solve time in seconds, or 0 for NULL.
//
// # Safety
// `result` must be NULL or a live handle.
double hcp_result_wall_time(const struct HcpResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HCPLACE_H */
