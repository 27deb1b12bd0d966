#ifndef ALIF_H
#define ALIF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum AlifStatus {
  ALIF_STATUS_OK = 0,
  ALIF_STATUS_NULL_POINTER = 1,
  ALIF_STATUS_INVALID_ARGUMENT = 2,
  ALIF_STATUS_INVALID_CONFIG = 3,
  /**
   * The mask needed by the first IMF is wider than the signal.
   */
  ALIF_STATUS_FILTER_TOO_LONG = 4,
  /**
   * The signal has too few extrema to pick a mask length.
   */
  ALIF_STATUS_TOO_FEW_EXTREMA = 5,
  /**
   * A numerical routine failed, e.g. the filter solver did not settle.
   */
  ALIF_STATUS_NUMERICAL = 6,
  /**
   * The output buffer is shorter than the data to copy.
   */
  ALIF_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * A Rust panic was caught at the boundary. This is a bug.
   */
  ALIF_STATUS_PANIC = 8,
} AlifStatus;

typedef enum AlifStopReason {
  ALIF_STOP_REASON_TREND = 0,
  ALIF_STOP_REASON_MAX_IMFS = 1,
  ALIF_STOP_REASON_LOW_ENERGY = 2,
  ALIF_STOP_REASON_MASK_TOO_LONG = 3,
  ALIF_STOP_REASON_MASK_STALLED = 4,
} AlifStopReason;

typedef enum AlifBoundary {
  ALIF_BOUNDARY_REFLECT = 0,
  ALIF_BOUNDARY_PERIODIC = 1,
  ALIF_BOUNDARY_CONSTANT = 2,
  ALIF_BOUNDARY_ANTISYMMETRIC = 3,
} AlifBoundary;

typedef enum AlifPreset {
  ALIF_PRESET_FIG4 = 0,
  ALIF_PRESET_BUMP = 1,
} AlifPreset;

typedef enum AlifSmoothing {
  ALIF_SMOOTHING_IF_TREND = 0,
  ALIF_SMOOTHING_OFF = 1,
} AlifSmoothing;

typedef enum AlifFreqMethod {
  ALIF_FREQ_METHOD_LOCAL = 0,
  ALIF_FREQ_METHOD_HILBERT = 1,
} AlifFreqMethod;

/**
 * Opaque decomposition handle.
 */
typedef struct AlifDecomposition AlifDecomposition;

/**
 * Fokker-Planck filter family solved to steady state.
 */
typedef struct AlifFilterOptions {
  /**
   * One of `AlifPreset`.
   */
  int32_t preset;
  double alpha;
  double beta;
  /**
   * Grid cells on each side of the origin in the solver.
   */
  size_t half_resolution;
  bool self_convolve;
} AlifFilterOptions;

typedef struct AlifIfOptions {
  double chi;
  double sd_threshold;
  size_t max_inner;
  size_t max_imfs;
  /**
   * One of `AlifBoundary`.
   */
  int32_t boundary;
  struct AlifFilterOptions filter;
} AlifIfOptions;

typedef struct AlifAlifOptions {
  double mask_multiplier;
  /**
   * One of `AlifSmoothing`.
   */
  int32_t smoothing;
  double smoothing_chi;
  double min_clamp;
  /**
   * Fixed uniform-mask factor for the trend smoother, or NaN for the
   * adaptive default.
   */
  double uniform_chi;
  double sd_threshold;
  size_t max_inner;
  size_t max_imfs;
  /**
   * One of `AlifBoundary`.
   */
  int32_t boundary;
  struct AlifFilterOptions filter;
} AlifAlifOptions;

/**
 * Per-IMF bookkeeping. The products are NaN for IF decompositions.
 */
typedef struct AlifImfDiagnostics {
  size_t iterations;
  double final_sd;
  double mask_half_length;
  double eps_product;
  double delta_product;
} AlifImfDiagnostics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library defaults for iterative filtering.
 */
struct AlifIfOptions alif_if_options_default(void);

/**
 * Library defaults for adaptive local iterative filtering.
 */
struct AlifAlifOptions alif_alif_options_default(void);

/**
 * Decomposes `len` samples spaced `dx` apart with iterative filtering.
 * `opts` may be NULL for the defaults. On success `*out` receives a handle.
 *
 * # Safety
 * `samples` must point to `len` readable doubles, `opts` must be NULL or
 * valid, and `out` must be a valid pointer.
 */
enum AlifStatus alif_if_decompose(const double *samples,
                                  size_t len,
                                  double dx,
                                  const struct AlifIfOptions *opts,
                                  struct AlifDecomposition **out);

/**
 * Adaptive counterpart of [`alif_if_decompose`].
 *
 * # Safety
 * Same contract as [`alif_if_decompose`].
 */
enum AlifStatus alif_alif_decompose(const double *samples,
                                    size_t len,
                                    double dx,
                                    const struct AlifAlifOptions *opts,
                                    struct AlifDecomposition **out);

/**
 * Number of samples in every component; 0 for a NULL handle.
 *
 * # Safety
 * `d` must be NULL or a live handle.
 */
size_t alif_decomposition_len(const struct AlifDecomposition *d);

/**
 * Number of IMFs, not counting the remainder; 0 for a NULL handle.
 *
 * # Safety
 * `d` must be NULL or a live handle.
 */
size_t alif_decomposition_imf_count(const struct AlifDecomposition *d);

/**
 * Copies IMF `index` into `buf`, which must hold at least
 * `alif_decomposition_len(d)` values.
 *
 * # Safety
 * `d` must be NULL or a live handle and `buf` must point to `buf_len`
 * writable doubles.
 */
enum AlifStatus alif_decomposition_copy_imf(const struct AlifDecomposition *d,
                                            size_t index,
                                            double *buf,
                                            size_t buf_len);

/**
 * Copies the remainder (trend) into `buf`.
 *
 * # Safety
 * Same contract as [`alif_decomposition_copy_imf`].
 */
enum AlifStatus alif_decomposition_copy_remainder(const struct AlifDecomposition *d,
                                                  double *buf,
                                                  size_t buf_len);

/**
 * Inner-loop diagnostics of IMF `index`.
 *
 * # Safety
 * `d` must be NULL or a live handle and `out` a valid pointer.
 */
enum AlifStatus alif_decomposition_imf_diagnostics(const struct AlifDecomposition *d,
                                                   size_t index,
                                                   struct AlifImfDiagnostics *out);

/**
 * Why the outer loop ended.
 *
 * # Safety
 * `d` must be NULL or a live handle and `out` a valid pointer.
 */
enum AlifStatus alif_decomposition_stop_reason(const struct AlifDecomposition *d,
                                               enum AlifStopReason *out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `d` must be NULL or a handle not yet freed.
 */
void alif_decomposition_free(struct AlifDecomposition *d);

/**
 * Instantaneous angular frequency of a single component, written to
 * `omega_out[0..len]`. `method` is one of `AlifFreqMethod`;
 * `eno_threshold` only affects the local method.
 *
 * # Safety
 * `samples` must point to `len` readable doubles and `omega_out` to
 * `out_len` writable doubles.
 */
enum AlifStatus alif_instantaneous_frequency(const double *samples,
                                             size_t len,
                                             double dx,
                                             int32_t method,
                                             double eno_threshold,
                                             double *omega_out,
                                             size_t out_len);

/**
 * Message describing the last failure on this thread, or NULL if the last
 * call succeeded. Valid until the next call into the library on this
 * thread.
 */
const char *alif_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *alif_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALIF_H */
