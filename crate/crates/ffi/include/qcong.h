#ifndef QCONG_H
#define QCONG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_ARGUMENT = 2,
  QC_STATUS_PARSE_ERROR = 3,
  QC_STATUS_NOT_INVERTIBLE = 4,
  QC_STATUS_OUT_OF_RANGE = 5,
  /**
   * A coefficient does not fit the requested integer type.
   */
  QC_STATUS_OVERFLOW = 6,
  QC_STATUS_RESOURCE_CEILING = 7,
  QC_STATUS_PANIC = 8,
} QcStatus;

/**
 * Opaque truncated power series.
 */
typedef struct QcSeries QcSeries;

/**
 * Outcome of `qc_verify_claim`. Witness fields are meaningful only when
 * `verified` is false.
 */
typedef struct QcVerification {
  bool verified;
  uint64_t checked_n_up_to;
  uint64_t checked_j_up_to;
  uint64_t witness_j;
  uint64_t witness_k;
  uint64_t witness_n;
  uint64_t witness_residue;
} QcVerification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *qc_last_error(void);

/**
 * Expand an eta quotient (`"2^2 * 1^-3"`) or Pochhammer quotient
 * (`"[2,3;5]/[1,4;5]"`) to `n_terms` coefficients. `modulus` 0 selects exact
 * integers.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
enum QcStatus qc_series_from_spec(const char *spec,
                                  uint64_t modulus,
                                  size_t n_terms,
                                  struct QcSeries **out);

/**
 * Generating function of `a_k(n)` to `n_terms` coefficients.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QcStatus qc_series_colored(uint64_t k,
                                uint64_t modulus,
                                size_t n_terms,
                                struct QcSeries **out);

/**
 * Number of stored coefficients; 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t qc_series_len(const struct QcSeries *s);

/**
 * Coefficient `i` as a signed 64-bit integer.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum QcStatus qc_series_coeff(const struct QcSeries *s, size_t i, int64_t *out);

/**
 * Coefficient `i` in decimal, nul-terminated, written to `buf` of `buf_len`
 * bytes. `needed` receives the required size including the nul, so a call
 * with `buf_len` 0 queries the size.
 *
 * # Safety
 * `s` must be a live handle, `needed` a valid pointer, and `buf` valid for
 * `buf_len` bytes.
 */
enum QcStatus qc_series_coeff_decimal(const struct QcSeries *s,
                                      size_t i,
                                      char *buf,
                                      size_t buf_len,
                                      size_t *needed);

/**
 * New series holding coefficients `step * n + offset` of `s`.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum QcStatus qc_series_extract(const struct QcSeries *s,
                                uint64_t step,
                                uint64_t offset,
                                struct QcSeries **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void qc_series_free(struct QcSeries *s);

/**
 * Check `a_{c j + k0}(step n + offset) = 0 (mod modulus)` for every
 * coefficient below `n_terms` and every `j <= j_max`. `c` 0 pins `k = k0`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QcStatus qc_verify_claim(uint64_t c,
                              uint64_t k0,
                              uint64_t step,
                              uint64_t offset,
                              uint64_t modulus,
                              size_t n_terms,
                              uint64_t j_max,
                              struct QcVerification *out);

/**
 * `a_k(n)` by direct enumeration, `n <= 40`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QcStatus qc_a_bruteforce(uint64_t k, uint64_t n, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCONG_H */
