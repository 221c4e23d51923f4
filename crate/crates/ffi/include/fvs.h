#ifndef FVS_H
#define FVS_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FvsStatus {
  FVS_STATUS_OK = 0,
  // The instance has no solution within the requested budget.
  FVS_STATUS_NO = 1,
  FVS_STATUS_NULL_POINTER = 2,
  FVS_STATUS_INVALID_ARGUMENT = 3,
  FVS_STATUS_PARSE = 4,
  FVS_STATUS_TOO_LARGE = 5,
  FVS_STATUS_PANIC = 6,
} FvsStatus;

typedef enum FvsPrune {
  FVS_PRUNE_OFF = 0,
  FVS_PRUNE_WEAK = 1,
  FVS_PRUNE_STRONG = 2,
} FvsPrune;

// A multigraph together with its set of undeletable vertices.
typedef struct FvsGraph FvsGraph;

typedef struct FvsParams FvsParams;

typedef struct FvsSolution FvsSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *fvs_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void fvs_string_free(char *s);

// A graph with vertices `0..n` and no edges, or null if `n` is too large.
struct FvsGraph *fvs_graph_new(uint32_t n);

// Parses the text graph format (`p fvs n m`, `e u v`, `f v`, 1-based ids).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum FvsStatus fvs_graph_parse(const char *text, struct FvsGraph **out);

// # Safety
// `g` must be null or a graph handle not yet freed.
void fvs_graph_free(struct FvsGraph *g);

// Adds one copy of edge `{u, v}`; `u == v` adds a self-loop.
//
// # Safety
// `g` must be a live graph handle.
enum FvsStatus fvs_graph_add_edge(struct FvsGraph *g, uint32_t u, uint32_t v);

// Marks `v` as undeletable.
//
// # Safety
// `g` must be a live graph handle.
enum FvsStatus fvs_graph_set_undeletable(struct FvsGraph *g, uint32_t v);

// # Safety
// `g` must be a live graph handle.
size_t fvs_graph_vertex_count(const struct FvsGraph *g);

// # Safety
// `g` must be a live graph handle.
size_t fvs_graph_edge_count(const struct FvsGraph *g);

// Minimum solution avoiding the undeletable vertices. Returns `FVS_STATUS_NO` when
// the undeletable vertices already contain a cycle; `*out` is then untouched.
//
// # Safety
// `g` must be a live graph handle and `out` a writable pointer.
enum FvsStatus fvs_solve_minimum(const struct FvsGraph *g,
                                 enum FvsPrune prune,
                                 struct FvsSolution **out);

// A solution of size at most `k`, or `FVS_STATUS_NO` if none exists.
//
// # Safety
// `g` must be a live graph handle and `out` a writable pointer.
enum FvsStatus fvs_solve_decision(const struct FvsGraph *g,
                                  int64_t k,
                                  enum FvsPrune prune,
                                  struct FvsSolution **out);

// Minimum solution by exhaustive enumeration; `FVS_STATUS_TOO_LARGE` above 24
// deletable vertices.
//
// # Safety
// `g` must be a live graph handle and `out` a writable pointer.
enum FvsStatus fvs_oracle_minimum(const struct FvsGraph *g, struct FvsSolution **out);

// # Safety
// `s` must be a live solution handle.
size_t fvs_solution_len(const struct FvsSolution *s);

// Copies up to `cap` vertex ids in ascending order into `buf` and returns
// the solution size.
//
// # Safety
// `s` must be a live solution handle and `buf` valid for `cap` writes.
size_t fvs_solution_vertices(const struct FvsSolution *s, uint32_t *buf, size_t cap);

// Branch nodes visited by the search that produced `s`; 0 for oracle results.
//
// # Safety
// `s` must be a live solution handle.
uint64_t fvs_solution_branch_nodes(const struct FvsSolution *s);

// # Safety
// `s` must be null or a solution handle not yet freed.
void fvs_solution_free(struct FvsSolution *s);

// Measure parameters by preset name: `"mc"` or `"simple"`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a writable pointer.
enum FvsStatus fvs_params_preset(const char *name, struct FvsParams **out);

// Parameters from the text format (`alpha=`, `c=`, `beta <d> <value>`).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum FvsStatus fvs_params_parse(const char *text, struct FvsParams **out);

// # Safety
// `p` must be null or a parameter handle not yet freed.
void fvs_params_free(struct FvsParams *p);

// Runs every certificate check. `*passed` receives the overall verdict; if
// `report_json` is non-null it receives the full report as JSON, to be
// released with [`fvs_string_free`].
//
// # Safety
// `p` must be a live parameter handle, `passed` writable, and `report_json`
// null or writable.
enum FvsStatus fvs_verify(const struct FvsParams *p, bool *passed, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FVS_H */
