#ifndef PADIC_ITER_H
#define PADIC_ITER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The nonzero values match the command-line exit codes.
 */
typedef enum PadicStatus {
  PADIC_STATUS_OK = 0,
  /**
   * Hypothesis failure, certificate violation or other mathematical refusal.
   */
  PADIC_STATUS_MATH_ERROR = 1,
  /**
   * Malformed input, unknown prime, dimension mismatch.
   */
  PADIC_STATUS_INPUT_ERROR = 2,
  /**
   * Precision exhausted or degree cap exceeded.
   */
  PADIC_STATUS_PRECISION_ERROR = 3,
  PADIC_STATUS_NULL_POINTER = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  PADIC_STATUS_INTERNAL = 5,
} PadicStatus;

/**
 * Opaque interpolated flow `g(x, n)`.
 */
typedef struct PadicFlow PadicFlow;

/**
 * Opaque analytic map `Z_p^d -> Z_p^d`.
 */
typedef struct PadicMap PadicMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library.
 */
const char *padic_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void padic_string_free(char *s);

/**
 * Parse a map from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PadicStatus padic_map_from_json(const char *json, struct PadicMap **out);

/**
 * # Safety
 * `map` must be null or a handle from [`padic_map_from_json`].
 */
void padic_map_free(struct PadicMap *map);

/**
 * Dimension `d` of the map, 0 for null.
 *
 * # Safety
 * `map` must be null or a live handle.
 */
size_t padic_map_dim(const struct PadicMap *map);

/**
 * Contraction level `c` and whether `c > 1/(p-1)`. `c` is `UINT32_MAX`
 * for the identity map.
 *
 * # Safety
 * `map` must be a live handle; `c` and `satisfied` must be writable.
 */
enum PadicStatus padic_map_check(const struct PadicMap *map, uint32_t *c, bool *satisfied);

/**
 * Interpolate the iterates of `map` modulo `p^precision`.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum PadicStatus padic_interpolate(const struct PadicMap *map,
                                   uint32_t precision,
                                   struct PadicFlow **out);

/**
 * # Safety
 * `flow` must be null or a handle from [`padic_interpolate`].
 */
void padic_flow_free(struct PadicFlow *flow);

/**
 * Guaranteed precision of the flow, 0 for null.
 *
 * # Safety
 * `flow` must be null or a live handle.
 */
uint32_t padic_flow_precision(const struct PadicFlow *flow);

/**
 * Canonical JSON of the flow, the same bytes `padic-iter interpolate` writes.
 *
 * # Safety
 * `flow` must be a live handle; `out` must be writable.
 */
enum PadicStatus padic_flow_to_json(const struct PadicFlow *flow, char **out);

/**
 * Evaluate `g(x0, n)` from the symbolic flow. Coordinates and `n` are
 * integer or `a/b` literals. The result is JSON
 * `{"p", "guaranteed_precision", "point": [{"p","precision","residue"}]}`.
 *
 * # Safety
 * `x0` must point to `len` NUL-terminated strings; `n` must be a
 * NUL-terminated string; `out` must be writable.
 */
enum PadicStatus padic_flow_eval(const struct PadicFlow *flow,
                                 const char *const *x0,
                                 size_t len,
                                 const char *n,
                                 char **out);

/**
 * Evaluate `f^n(x0)` modulo `p^precision` from the orbit of `x0`, without
 * building the symbolic flow. Same JSON output as [`padic_flow_eval`].
 *
 * # Safety
 * As for [`padic_flow_eval`], with `map` a live handle.
 */
enum PadicStatus padic_map_eval(const struct PadicMap *map,
                                const char *const *x0,
                                size_t len,
                                const char *n,
                                uint32_t precision,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_ITER_H */
