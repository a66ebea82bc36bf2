/* Generated by cbindgen. Do not edit. */

#ifndef THINDEX_H
#define THINDEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThxStatus {
  THX_STATUS_OK = 0,
  THX_STATUS_NOT_FREDHOLM = 1,
  THX_STATUS_UNRESOLVED = 2,
  THX_STATUS_INVALID_INPUT = 3,
  THX_STATUS_NULL_POINTER = 4,
  THX_STATUS_INTERNAL = 5,
} ThxStatus;

/**
 * Opaque parsed problem.
 */
typedef struct ThxProblem ThxProblem;

/**
 * Invertibility scan result. `fredholm` is 0 (yes), 1 (no) or 2 (undecided).
 * Infinite `lambda` is reported as an IEEE infinity.
 */
typedef struct ThxVerdict {
  int32_t fredholm;
  double min_abs_det;
  double max_abs_det;
  double witness_t_angle;
  double witness_lambda;
} ThxVerdict;

typedef struct ThxIndexReport {
  struct ThxVerdict verdict;
  /**
   * Nonzero when `index` and `winding` are meaningful.
   */
  int32_t has_index;
  int64_t winding;
  int64_t index;
} ThxIndexReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a NUL-terminated JSON problem. On success `*out` owns a handle to
 * be released with `thx_problem_free`.
 *
 * # Safety
 * `json` must be a valid C string and `out` a valid pointer.
 */
enum ThxStatus thx_problem_parse(const char *json, struct ThxProblem **out);

/**
 * Releases a handle from `thx_problem_parse`. Null is ignored.
 *
 * # Safety
 * `h` must come from `thx_problem_parse` and not be used afterwards.
 */
void thx_problem_free(struct ThxProblem *h);

/**
 * Replaces the exponent `p`.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum ThxStatus thx_problem_set_p(struct ThxProblem *h, double p);

/**
 * Replaces the sampling resolution; values below 2 are raised to 2.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum ThxStatus thx_problem_set_grid(struct ThxProblem *h, size_t t_points, size_t lambda_points);

/**
 * Fredholm verdict of the problem's operator.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum ThxStatus thx_check(const struct ThxProblem *h, struct ThxVerdict *out);

/**
 * Verdict and index. With `doubled` nonzero the expression must be a single
 * generator and the index is that of its doubled matrix operator. A
 * non-Fredholm operator is not an error: `has_index` is 0.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum ThxStatus thx_index(const struct ThxProblem *h, int32_t doubled, struct ThxIndexReport *out);

/**
 * The index curve as CSV, same layout as the command line. Fails with
 * `NOT_FREDHOLM` when there is no curve.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum ThxStatus thx_curve_csv(const struct ThxProblem *h, int32_t doubled, char **out);

/**
 * The essential spectrum cloud as CSV.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum ThxStatus thx_spectrum_csv(const struct ThxProblem *h, char **out);

/**
 * Releases a string from this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void thx_string_free(char *s);

/**
 * `mu_p(lambda) = (1 + coth(pi (lambda + i/p))) / 2`; infinities allowed.
 *
 * # Safety
 * `re` and `im` must be valid pointers.
 */
enum ThxStatus thx_mu(double p, double lambda, double *re, double *im);

/**
 * `nu_p(lambda) = 1 / (2i sinh(pi (lambda + i/p)))`; infinities allowed.
 *
 * # Safety
 * `re` and `im` must be valid pointers.
 */
enum ThxStatus thx_nu(double p, double lambda, double *re, double *im);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *thx_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THINDEX_H */
