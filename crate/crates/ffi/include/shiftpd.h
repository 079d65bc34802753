#ifndef SHIFTPD_H
#define SHIFTPD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShiftpdStatus {
  SHIFTPD_STATUS_OK = 0,
  SHIFTPD_STATUS_INVALID_ARGUMENT = 1,
  SHIFTPD_STATUS_PARSE_ERROR = 2,
  SHIFTPD_STATUS_BUDGET_EXCEEDED = 3,
  SHIFTPD_STATUS_PRECONDITION_FAILED = 4,
  SHIFTPD_STATUS_NULL_POINTER = 5,
  SHIFTPD_STATUS_INTERNAL = 6,
} ShiftpdStatus;

/**
 * The result of one run of the restriction procedure.
 */
typedef struct ShiftpdOutcome ShiftpdOutcome;

/**
 * A polynomial with exact rational coefficients.
 */
typedef struct ShiftpdPolynomial ShiftpdPolynomial;

/**
 * Shifted-partials query; `m = 0` allows every shift support and
 * `num_vars = 0` infers the variable space from the polynomial.
 */
typedef struct ShiftpdMeasureQuery {
  uint32_t r;
  uint32_t ell;
  uint32_t m;
  uint32_t num_vars;
} ShiftpdMeasureQuery;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *shiftpd_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *shiftpd_version(void);

/**
 * `a·b` in the standard GF(2^k).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_gf_mul(uint32_t k, uint32_t a, uint32_t b, uint32_t *out);

/**
 * Parse the text polynomial format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_poly_parse(const char *text, struct ShiftpdPolynomial **out);

/**
 * `NW_d` over the `2^k × 2^k` grid.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_nw_generate(uint32_t k,
                                       uint32_t d,
                                       uint64_t budget,
                                       struct ShiftpdPolynomial **out);

/**
 * Number of terms, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t shiftpd_poly_term_count(const struct ShiftpdPolynomial *p);

/**
 * Canonical text; free the result with [`shiftpd_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_poly_to_string(const struct ShiftpdPolynomial *p, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void shiftpd_string_free(char *s);

/**
 * # Safety
 * `p` must be null or a live handle, which is invalid afterwards.
 */
void shiftpd_poly_free(struct ShiftpdPolynomial *p);

/**
 * Exact shifted-partials dimension.
 *
 * # Safety
 * `p` and `q` must be live; `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_measure_dim(const struct ShiftpdPolynomial *p,
                                       const struct ShiftpdMeasureQuery *q,
                                       uint64_t budget,
                                       uint64_t *out);

/**
 * Run the restriction with `ε = eps_num/eps_den`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_restrict_run(uint32_t k,
                                        uint32_t d,
                                        uint64_t eps_num,
                                        uint64_t eps_den,
                                        uint64_t seed,
                                        struct ShiftpdOutcome **out);

/**
 * Rank of the constraint matrix, or 0 for a null handle.
 *
 * # Safety
 * `o` must be null or a live handle.
 */
size_t shiftpd_outcome_rank(const struct ShiftpdOutcome *o);

/**
 * `log2 |A_n|`, or 0 for a null handle.
 *
 * # Safety
 * `o` must be null or a live handle.
 */
size_t shiftpd_outcome_log2_an_size(const struct ShiftpdOutcome *o);

/**
 * Whether the 0-based variable `(row, col)` was set to zero.
 *
 * # Safety
 * `o` must be live; `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_outcome_is_killed(const struct ShiftpdOutcome *o,
                                             uint32_t row,
                                             uint32_t col,
                                             bool *out);

/**
 * JSON record; free with [`shiftpd_string_free`].
 *
 * # Safety
 * `o` must be live; `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_outcome_to_json(const struct ShiftpdOutcome *o, char **out);

/**
 * # Safety
 * `o` must be null or a live handle, which is invalid afterwards.
 */
void shiftpd_outcome_free(struct ShiftpdOutcome *o);

/**
 * log2 of the top fan-in ratio at one parameter point, `N = n²`. With
 * `checked`, constraint violations fail with `PreconditionFailed`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShiftpdStatus shiftpd_topfanin_log2(uint64_t n,
                                         uint64_t d,
                                         uint64_t r,
                                         uint64_t ell,
                                         uint64_t m,
                                         uint64_t s,
                                         uint64_t t,
                                         bool restricted,
                                         uint64_t eps_num,
                                         uint64_t eps_den,
                                         bool checked,
                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHIFTPD_H */
