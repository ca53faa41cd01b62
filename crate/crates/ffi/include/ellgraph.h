#ifndef ELLGRAPH_H
#define ELLGRAPH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EgStatus {
  EG_STATUS_OK = 0,
  EG_STATUS_NULL_POINTER = 1,
  EG_STATUS_INVALID_UTF8 = 2,
  EG_STATUS_PARSE = 3,
  EG_STATUS_INVALID_INPUT = 4,
  EG_STATUS_PANIC = 5,
} EgStatus;

typedef enum EgFormat {
  EG_FORMAT_TEXT = 0,
  EG_FORMAT_JSON = 1,
  EG_FORMAT_LATEX = 2,
} EgFormat;

/**
 * Opaque decorated graph.
 */
typedef struct EgGraph EgGraph;

/**
 * Opaque element of the ring of almost-holomorphic modular forms.
 */
typedef struct EgRing EgRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next call on this thread.
 */
const char *eg_last_error(void);

/**
 * Library version as a static string.
 */
const char *eg_version(void);

/**
 * Parses a graph in the text format or, if it starts with `{`, JSON.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum EgStatus eg_graph_parse(const char *src, struct EgGraph **out);

/**
 * # Safety
 * `g` must be NULL or a live handle; it is invalid afterwards.
 */
void eg_graph_free(struct EgGraph *g);

/**
 * Serializes a graph as JSON (`EG_FORMAT_JSON`) or text (other formats).
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum EgStatus eg_graph_to_string(const struct EgGraph *g, enum EgFormat format, char **out);

/**
 * Evaluates the regularized integral of a graph with decorations >= 0.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum EgStatus eg_graph_evaluate(const struct EgGraph *g, struct EgRing **out);

/**
 * Checks `d_Y W(g) = W(delta g)`. `lhs` and `rhs` may be NULL if the two
 * sides are not wanted.
 *
 * # Safety
 * `g` must be a live handle; `equal` must be writable; `lhs`, `rhs` NULL or
 * writable.
 */
enum EgStatus eg_graph_check_anomaly(const struct EgGraph *g,
                                     bool *equal,
                                     struct EgRing **lhs,
                                     struct EgRing **rhs);

/**
 * Value of the 2-vertex banana by the closed formula.
 *
 * # Safety
 * `decs` must point to `len` values; `out` must be writable.
 */
enum EgStatus eg_banana_closed_form(const uint32_t *decs, size_t len, struct EgRing **out);

/**
 * Value of the 2-vertex banana by Laurent-series residues.
 *
 * # Safety
 * `decs` must point to `len` values; `out` must be writable.
 */
enum EgStatus eg_banana_oracle(const uint32_t *decs, size_t len, struct EgRing **out);

/**
 * `W_k`, the value of a single loop of decoration `k >= 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EgStatus eg_loop_value(int32_t k, struct EgRing **out);

/**
 * Parses a ring element from text or JSON (LaTeX is output only).
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum EgStatus eg_ring_parse(const char *src, enum EgFormat format, struct EgRing **out);

/**
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum EgStatus eg_ring_to_string(const struct EgRing *r, enum EgFormat format, char **out);

/**
 * `d/dY`, acting as `(3/pi^2) d/dE2h`.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum EgStatus eg_ring_partial_y(const struct EgRing *r, struct EgRing **out);

/**
 * Exact equality; false if either handle is NULL.
 *
 * # Safety
 * Handles must be NULL or live.
 */
bool eg_ring_equal(const struct EgRing *a, const struct EgRing *b);

/**
 * # Safety
 * `r` must be a live handle.
 */
bool eg_ring_is_zero(const struct EgRing *r);

/**
 * # Safety
 * `r` must be NULL or a live handle; it is invalid afterwards.
 */
void eg_ring_free(struct EgRing *r);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void eg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELLGRAPH_H */
