#ifndef LACUNARY_H
#define LACUNARY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LacEvidenceKind {
  LAC_EVIDENCE_KIND_WITNESS = 0,
  LAC_EVIDENCE_KIND_HECKE_VANISHING = 1,
  LAC_EVIDENCE_KIND_EXCLUDED = 2,
} LacEvidenceKind;

/**
 * Result codes. The first five agree with the command-line exit codes.
 */
typedef enum LacStatus {
  LAC_STATUS_OK = 0,
  LAC_STATUS_FAILURE = 1,
  LAC_STATUS_PARSE = 2,
  LAC_STATUS_NON_INTEGRAL_VALUATION = 3,
  LAC_STATUS_FIXTURE = 4,
  LAC_STATUS_NULL_POINTER = 5,
  LAC_STATUS_OUT_OF_RANGE = 6,
  LAC_STATUS_PANIC = 7,
} LacStatus;

/**
 * Verdicts of a scan over `1 <= b <= b_max`.
 */
typedef struct LacScan LacScan;

/**
 * Integer q-series known below `q^truncation`.
 */
typedef struct LacSeries LacSeries;

/**
 * One scan verdict. For `WITNESS`, `n` and `value` give a nonzero
 * coefficient of `T_prime f_b(12z)`; for `HECKE_VANISHING`, `n` is the bound
 * checked; for `EXCLUDED`, only `b` is meaningful.
 */
typedef struct LacVerdict {
  uint64_t b;
  bool lacunary;
  enum LacEvidenceKind kind;
  uint64_t prime;
  uint64_t n;
  int64_t value;
} LacVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Owned by the
 * library; valid until the next call on the same thread.
 */
const char *lac_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void lac_string_free(char *s);

/**
 * Expands an eta quotient such as `"eta(12z)^2*eta(48z)^2"`, keeping `terms`
 * coefficients from the valuation on.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum LacStatus lac_series_expand(const char *spec, size_t terms, struct LacSeries **out);

/**
 * `T_p` of an eta quotient on `Gamma0(level)`, with `terms` coefficients.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum LacStatus lac_series_hecke(const char *spec,
                                uint64_t p,
                                uint64_t level,
                                size_t terms,
                                struct LacSeries **out);

/**
 * # Safety
 * `s` must be NULL or a handle from this library and not yet freed.
 */
void lac_series_free(struct LacSeries *s);

/**
 * # Safety
 * `s` must be a live series handle.
 */
size_t lac_series_valuation(const struct LacSeries *s);

/**
 * # Safety
 * `s` must be a live series handle.
 */
size_t lac_series_truncation(const struct LacSeries *s);

/**
 * Coefficient of `q^n`; `OutOfRange` if `n` is not below the truncation or
 * the value does not fit in 64 bits.
 *
 * # Safety
 * `s` must be a live series handle; `out` must be writable.
 */
enum LacStatus lac_series_coeff(const struct LacSeries *s, size_t n, int64_t *out);

/**
 * The series as JSON `{valuation, truncation, ring, coeffs}`; free with
 * [`lac_string_free`]. NULL on a NULL handle.
 *
 * # Safety
 * `s` must be NULL or a live series handle.
 */
char *lac_series_to_json(const struct LacSeries *s);

/**
 * Zero density over `0 <= n <= x`, restricted to `n = residue mod modulus`
 * when `modulus > 0`, as `num / den`.
 *
 * # Safety
 * `s` must be a live series handle; `num` and `den` must be writable.
 */
enum LacStatus lac_series_zero_density(const struct LacSeries *s,
                                       size_t x,
                                       size_t modulus,
                                       size_t residue,
                                       int64_t *num,
                                       int64_t *den);

uint64_t lac_sturm_bound(uint32_t weight, uint64_t level);

/**
 * Checks CM identity `case` (1..=5) through its Sturm bound. On success
 * `*equal` is set, and `*first_mismatch` is the first differing index or 0.
 *
 * # Safety
 * `equal` and `first_mismatch` must be writable.
 */
enum LacStatus lac_verify_identity(uint8_t case_, bool *equal, uint64_t *first_mismatch);

/**
 * Coefficient `a(n)` of identity `case` through multiplicativity, for `n`
 * coprime to the level, as `num / den`.
 *
 * # Safety
 * `num` and `den` must be writable.
 */
enum LacStatus lac_identity_coefficient(uint8_t case_, uint64_t n, int64_t *num, int64_t *den);

/**
 * Loads the reference tables from `dir` (checksums included) and compares
 * them with computed coefficients. `*passes` is true when every row agrees or
 * is a confirmed misprint.
 *
 * # Safety
 * `dir` must be a NUL-terminated path; `passes` must be writable.
 */
enum LacStatus lac_verify_tables(const char *dir, bool *passes);

/**
 * Sweeps `b = 1..=b_max` with `T_23` (adaptive truncation) on `jobs`
 * threads; `jobs = 0` uses every core.
 *
 * # Safety
 * `out` must be writable.
 */
enum LacStatus lac_scan(uint64_t b_max, size_t jobs, struct LacScan **out);

/**
 * # Safety
 * `s` must be NULL or a live scan handle.
 */
size_t lac_scan_len(const struct LacScan *s);

/**
 * # Safety
 * `s` must be a live scan handle; `out` must be writable.
 */
enum LacStatus lac_scan_get(const struct LacScan *s, size_t index, struct LacVerdict *out);

/**
 * # Safety
 * `s` must be NULL or a scan handle from this library and not yet freed.
 */
void lac_scan_free(struct LacScan *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LACUNARY_H */
