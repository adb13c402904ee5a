#ifndef HANKEL_SYMBOL_LAB_H
#define HANKEL_SYMBOL_LAB_H

/* Generated by cbindgen from hankel-symbol-lab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every FFI function.
 */
typedef enum HslStatus {
  /**
   * Success.
   */
  HSL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HSL_STATUS_NULL_POINTER = 1,
  /**
   * An argument failed validation (bad name, bad dimension, bad value).
   */
  HSL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A numerical routine failed (non-convergence, singular system).
   */
  HSL_STATUS_NUMERICAL = 3,
  /**
   * Internal panic; a bug, please report.
   */
  HSL_STATUS_INTERNAL = 4,
} HslStatus;

/**
 * Classification verdicts, mirroring the library's hierarchy.
 */
typedef enum HslVerdict {
  HSL_VERDICT_INVALID_SYMBOL = 0,
  HSL_VERDICT_RP_ONLY = 1,
  HSL_VERDICT_STANDARD = 2,
  HSL_VERDICT_BORCHERS = 3,
} HslVerdict;

/**
 * Opaque handle to an operator-valued measure on the positive half-line.
 */
typedef struct HslMeasure HslMeasure;

/**
 * Opaque handle to a matrix-valued Hankel symbol.
 */
typedef struct HslSymbol HslSymbol;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message for this thread into `buf` (NUL-terminated,
 * truncated to `len` bytes). Returns the full message length in bytes,
 * excluding the terminator. Safe to call with `buf = NULL, len = 0` to
 * query the length.
 *
 * # Safety
 * `buf` must be valid for writes of `len` bytes, or null with `len == 0`.
 */
uintptr_t hsl_last_error_message(char *buf, uintptr_t len);

/**
 * Creates a built-in measure (`"lebesgue2"`, `"example_t"`, `"atoms"`, ...).
 *
 * # Safety
 * `out` must be a valid pointer; `params` must point to `n_params` doubles.
 */
enum HslStatus hsl_measure_builtin(const char *name,
                                   const double *params,
                                   uintptr_t n_params,
                                   uintptr_t dim,
                                   struct HslMeasure **out);

/**
 * Releases a measure handle. Null is a no-op.
 *
 * # Safety
 * `measure` must come from `hsl_measure_builtin` and not be freed twice.
 */
void hsl_measure_free(struct HslMeasure *measure);

/**
 * Dimension of the coefficient space of the measure.
 *
 * # Safety
 * `measure` and `out` must be valid pointers.
 */
enum HslStatus hsl_measure_dim(const struct HslMeasure *measure, uintptr_t *out);

/**
 * Creates a built-in symbol (`"i_sgn"`, `"example_beta_closed"`, ...).
 *
 * # Safety
 * `out` must be a valid pointer; `params` must point to `n_params` doubles.
 */
enum HslStatus hsl_symbol_builtin(const char *name,
                                  const double *params,
                                  uintptr_t n_params,
                                  uintptr_t dim,
                                  struct HslSymbol **out);

/**
 * Builds the quadrature-defined symbol β(μ, p, C) for a measure and a real
 * projection / coupling pair, both row-major `dim × dim`.
 *
 * # Safety
 * All pointers must be valid; the matrix buffers must hold `dim²` doubles
 * where `dim` is the measure dimension.
 */
enum HslStatus hsl_symbol_beta(const struct HslMeasure *measure,
                               const double *projection,
                               const double *coupling,
                               struct HslSymbol **out);

/**
 * Releases a symbol handle. Null is a no-op.
 *
 * # Safety
 * `symbol` must come from an `hsl_symbol_*` constructor, freed once.
 */
void hsl_symbol_free(struct HslSymbol *symbol);

/**
 * Dimension of the symbol's matrix values.
 *
 * # Safety
 * `symbol` and `out` must be valid pointers.
 */
enum HslStatus hsl_symbol_dim(const struct HslSymbol *symbol, uintptr_t *out);

/**
 * Evaluates the symbol at a nonzero real `x`, writing the `dim × dim`
 * value row-major into `out_re` / `out_im`.
 *
 * # Safety
 * `out_re` and `out_im` must each be valid for `dim²` doubles.
 */
enum HslStatus hsl_symbol_eval(const struct HslSymbol *symbol,
                               double x,
                               double *out_re,
                               double *out_im);

/**
 * Compares the symbol-side and measure-side Hankel forms on `pairs`
 * default kernel sample pairs; writes the worst absolute defect.
 *
 * # Safety
 * All pointers must be valid.
 */
enum HslStatus hsl_verify_symbol(const struct HslMeasure *measure,
                                 const struct HslSymbol *symbol,
                                 uintptr_t pairs,
                                 double *out_defect);

/**
 * Smallest eigenvalue of the Hankel-form Gram matrix of the measure on
 * `points` default kernel vectors.
 *
 * # Safety
 * All pointers must be valid.
 */
enum HslStatus hsl_gram_min_eig(const struct HslMeasure *measure,
                                uintptr_t points,
                                double *out_min_eig);

/**
 * Classifies the reflection-positive quadruple induced by `(symbol, p)`.
 * `projection` is a row-major real `dim × dim` projection; `measure` may
 * be null (positivity evidence then comes from the symbol-side Gram,
 * which is slower). `x_grid` must hold `n_grid` nonzero reals.
 *
 * # Safety
 * Non-null pointers must be valid for the documented lengths.
 */
enum HslStatus hsl_classify(const struct HslSymbol *symbol,
                            const double *projection,
                            const struct HslMeasure *measure,
                            const double *x_grid,
                            uintptr_t n_grid,
                            enum HslVerdict *out_verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HANKEL_SYMBOL_LAB_H */
