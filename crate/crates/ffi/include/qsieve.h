#ifndef QSIEVE_H
#define QSIEVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QsStatus {
  QS_STATUS_OK = 0,
  /**
   * A parameter is out of range (zero order, index past the end, ...).
   */
  QS_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A mathematical hypothesis of the called law does not hold.
   */
  QS_STATUS_PRECONDITION = 2,
  /**
   * An intermediate value does not fit in 64 bits.
   */
  QS_STATUS_OVERFLOW = 3,
  QS_STATUS_NULL_POINTER = 4,
  /**
   * Malformed text input.
   */
  QS_STATUS_PARSE = 5,
  QS_STATUS_IO = 6,
  /**
   * A panic was caught or an invariant broke.
   */
  QS_STATUS_INTERNAL = 7,
} QsStatus;

/**
 * Transitivity verdict codes.
 */
typedef enum QsVerdict {
  QS_VERDICT_NO_CONSTRAINT = 0,
  QS_VERDICT_NOT_POINT_TRANSITIVE = 1,
  QS_VERDICT_NOT_LINE_TRANSITIVE = 2,
} QsVerdict;

/**
 * Deduction step status codes.
 */
typedef enum QsStepStatus {
  QS_STEP_STATUS_VERIFIED = 0,
  QS_STEP_STATUS_FAILED = 1,
  QS_STEP_STATUS_AXIOM = 2,
} QsStepStatus;

/**
 * Steps of the (4, 12) deduction.
 */
typedef struct QsChain QsChain;

/**
 * An explicit incidence model.
 */
typedef struct QsModel QsModel;

/**
 * Rows of a completed scan.
 */
typedef struct QsScan QsScan;

typedef struct QsBasicLaws {
  uint64_t point_count;
  uint64_t line_count;
  bool divisibility_ok;
  bool higman_ok;
  bool interval_ok;
  bool feasible;
} QsBasicLaws;

typedef struct QsInequality {
  uint64_t lhs;
  uint64_t rhs;
  bool holds;
} QsInequality;

typedef struct QsScanRow {
  uint64_t s;
  uint64_t t;
  /**
   * Family parameter, meaningful only when `has_family` is set.
   */
  uint64_t n;
  bool has_family;
  uint64_t lhs;
  uint64_t rhs;
} QsScanRow;

typedef struct QsStats {
  uint64_t alpha0;
  uint64_t alpha1;
  uint64_t alpha2;
  uint64_t beta0;
  uint64_t beta1;
  uint64_t beta2;
} QsStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qs_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qs_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qs_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_is_prime(uint64_t n, bool *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_ceil_div(uint64_t a, uint64_t b, uint64_t *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_basic_laws(uint64_t s, uint64_t t, struct QsBasicLaws *out);

/**
 * Both sides of the ceiling inequality. Fails with `Precondition` unless
 * the order is thick, `s > t` and `s + 1` is prime.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_main_inequality(uint64_t s, uint64_t t, struct QsInequality *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_point_verdict(uint64_t s, uint64_t t, enum QsVerdict *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_line_verdict(uint64_t s, uint64_t t, enum QsVerdict *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_benson_residue(uint64_t s,
                                uint64_t t,
                                uint64_t alpha0,
                                uint64_t alpha1,
                                bool *out);

/**
 * Bit mask of admissible fixed-substructure types for an automorphism of
 * prime order `p`: bit 0 for T0, then T1, T1d, T2, T2d, T3, T3d, T4.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_type_admissible(uint64_t s, uint64_t t, uint64_t p, uint32_t *out);

/**
 * Runs the scan for `2 <= t <= t_max`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_scan_new(uint64_t t_max, struct QsScan **out);

/**
 * # Safety
 * `h` must be a live scan handle; `out` valid for writes.
 */
enum QsStatus qs_scan_len(const struct QsScan *h, size_t *out);

/**
 * # Safety
 * `h` must be a live scan handle; `out` valid for writes.
 */
enum QsStatus qs_scan_row(const struct QsScan *h, size_t index, struct QsScanRow *out);

/**
 * CSV rendering of the scan; free with [`qs_string_free`].
 *
 * # Safety
 * `h` must be a live scan handle; `out` valid for writes.
 */
enum QsStatus qs_scan_to_csv(const struct QsScan *h, char **out);

/**
 * # Safety
 * `h` must be NULL or a live scan handle, not used afterwards.
 */
void qs_scan_free(struct QsScan *h);

/**
 * Runs the (4, 12) deduction. `readmit` lists primes forced back into the
 * allowed set (fault injection); it may be NULL when `readmit_len` is 0.
 *
 * # Safety
 * `readmit` must point to `readmit_len` values; `out` valid for writes.
 */
enum QsStatus qs_chain_run(const uint64_t *readmit, size_t readmit_len, struct QsChain **out);

/**
 * # Safety
 * `h` must be a live chain handle; `out` valid for writes.
 */
enum QsStatus qs_chain_len(const struct QsChain *h, size_t *out);

/**
 * # Safety
 * `h` must be a live chain handle; `out` valid for writes.
 */
enum QsStatus qs_chain_step_status(const struct QsChain *h, size_t index, enum QsStepStatus *out);

/**
 * Name of one step; free with [`qs_string_free`].
 *
 * # Safety
 * `h` must be a live chain handle; `out` valid for writes.
 */
enum QsStatus qs_chain_step_name(const struct QsChain *h, size_t index, char **out);

/**
 * The final `VERDICT: ...` line; free with [`qs_string_free`].
 *
 * # Safety
 * `h` must be a live chain handle; `out` valid for writes.
 */
enum QsStatus qs_chain_verdict(const struct QsChain *h, char **out);

/**
 * # Safety
 * `h` must be a live chain handle; `out` valid for writes.
 */
enum QsStatus qs_chain_to_json(const struct QsChain *h, char **out);

/**
 * # Safety
 * `h` must be NULL or a live chain handle, not used afterwards.
 */
void qs_chain_free(struct QsChain *h);

/**
 * The order-(2, 2) model on duads and synthemes.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_model_doily(struct QsModel **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_model_grid(uint64_t s, struct QsModel **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum QsStatus qs_model_dual_grid(uint64_t t, struct QsModel **out);

/**
 * # Safety
 * `h` must be a live model handle; outputs valid for writes.
 */
enum QsStatus qs_model_counts(const struct QsModel *h, size_t *points, size_t *lines);

/**
 * # Safety
 * `h` must be a live model handle; `out` valid for writes.
 */
enum QsStatus qs_model_check_axioms(const struct QsModel *h, bool *out);

/**
 * New model equal to `h` with the incidence of `point` and `line` toggled.
 *
 * # Safety
 * `h` must be a live model handle; `out` valid for writes.
 */
enum QsStatus qs_model_flip(const struct QsModel *h,
                            size_t point,
                            size_t line,
                            struct QsModel **out);

/**
 * Census of the doily automorphism induced by a permutation of the six
 * symbols, given 0-based in `perm[0..6]`.
 *
 * # Safety
 * `h` must be a live model handle, `perm` must point to 6 values and
 * `out` must be valid for writes.
 */
enum QsStatus qs_model_symbol_stats(const struct QsModel *h,
                                    const size_t *perm,
                                    struct QsStats *out);

/**
 * Checks every law on every iterated automorphism of the model.
 *
 * # Safety
 * `h` must be a live model handle; outputs valid for writes.
 */
enum QsStatus qs_model_verify_all(const struct QsModel *h, size_t *total, size_t *passed);

/**
 * JSON dump of the model; free with [`qs_string_free`].
 *
 * # Safety
 * `h` must be a live model handle; `out` valid for writes.
 */
enum QsStatus qs_model_to_json(const struct QsModel *h, char **out);

/**
 * # Safety
 * `h` must be NULL or a live model handle, not used afterwards.
 */
void qs_model_free(struct QsModel *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSIEVE_H */
