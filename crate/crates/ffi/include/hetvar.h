#ifndef HETVAR_H
#define HETVAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HvStatus {
  HV_STATUS_OK = 0,
  HV_STATUS_NULL_POINTER = 1,
  HV_STATUS_CONFIG = 2,
  HV_STATUS_PARAMETER = 3,
  HV_STATUS_INGESTION = 4,
  HV_STATUS_BINNING_MISMATCH = 5,
  HV_STATUS_IO = 6,
  HV_STATUS_INTERNAL = 7,
  HV_STATUS_BUFFER_TOO_SMALL = 8,
  HV_STATUS_INVALID_UTF8 = 9,
  HV_STATUS_PANIC = 10,
} HvStatus;

typedef enum HvSpacing {
  HV_SPACING_LINEAR = 0,
  HV_SPACING_LOGARITHMIC = 1,
} HvSpacing;

typedef enum HvVariant {
  HV_VARIANT_BHATTACHARYYA = 0,
  HV_VARIANT_HELLINGER = 1,
} HvVariant;

typedef enum HvMetric {
  HV_METRIC_KL = 0,
  HV_METRIC_RENYI = 1,
  HV_METRIC_TSALLIS = 2,
  HV_METRIC_JSD = 3,
  HV_METRIC_BC = 4,
  HV_METRIC_BHATTACHARYYA = 5,
  HV_METRIC_HELLINGER_PAPER = 6,
  HV_METRIC_HELLINGER_STANDARD = 7,
  HV_METRIC_SHANNON_ENTROPY = 8,
  HV_METRIC_RENYI_ENTROPY = 9,
} HvMetric;

typedef enum HvLogBase {
  HV_LOG_BASE_NATURAL = 0,
  HV_LOG_BASE_BASE2 = 1,
} HvLogBase;

/**
 * Opaque histogram handle.
 */
typedef struct HvDistribution HvDistribution;

/**
 * Opaque time series handle.
 */
typedef struct HvSeries HvSeries;

typedef struct HvGeneratorConfig {
  size_t total_samples;
  size_t num_sigmas;
  double sigma_min;
  double sigma_max;
  enum HvSpacing spacing;
  bool shuffle_segments;
  uint64_t seed;
} HvGeneratorConfig;

typedef struct HvMeasureResult {
  double score;
  /**
   * Bhattacharyya coefficient against the uniform reference.
   */
  double coefficient;
  size_t n_variances;
  /**
   * Nonzero when there are fewer than 10 variances per bin.
   */
  bool sparse;
} HvMeasureResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL.
 */
const char *hv_last_error_message(void);

/**
 * Static, NUL-terminated name of a status code.
 */
const char *hv_status_name(enum HvStatus status);

/**
 * Default generator settings (65536 samples, 64 log-spaced sigmas in [0.125, 8]).
 */
struct HvGeneratorConfig hv_generator_config_default(void);

/**
 * # Safety
 * `samples` must point to `len` doubles; `out` must be a valid out-pointer.
 */
enum HvStatus hv_series_from_samples(const double *samples, size_t len, struct HvSeries **out);

/**
 * # Safety
 * `config` and `out` must be valid pointers.
 */
enum HvStatus hv_series_generate(const struct HvGeneratorConfig *config, struct HvSeries **out);

/**
 * # Safety
 * `path` must be a NUL-terminated UTF-8 string; `out` a valid out-pointer.
 */
enum HvStatus hv_series_read_csv(const char *path, struct HvSeries **out);

/**
 * # Safety
 * `series` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
enum HvStatus hv_series_write_csv(const struct HvSeries *series, const char *path);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
size_t hv_series_len(const struct HvSeries *series);

/**
 * # Safety
 * `series` must be a live handle; `buf` must hold `capacity` doubles.
 */
enum HvStatus hv_series_copy_samples(const struct HvSeries *series,
                                     double *buf,
                                     size_t capacity,
                                     size_t *out_len);

/**
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void hv_series_free(struct HvSeries *series);

/**
 * Sliding-window population variances (length `len − window + 1`).
 *
 * # Safety
 * `series` must be a live handle; `buf` must hold `capacity` doubles.
 */
enum HvStatus hv_local_variance(const struct HvSeries *series,
                                size_t window,
                                double *buf,
                                size_t capacity,
                                size_t *out_len);

/**
 * Histogram of nonnegative values over `[0, max]` with `bins` bins.
 *
 * # Safety
 * `values` must point to `len` doubles; `out` must be a valid out-pointer.
 */
enum HvStatus hv_distribution_estimate(const double *values,
                                       size_t len,
                                       size_t bins,
                                       struct HvDistribution **out);

/**
 * Distribution from nonnegative weights on unit bins `[i, i+1)`; weights are normalised.
 *
 * # Safety
 * `weights` must point to `len` doubles; `out` must be a valid out-pointer.
 */
enum HvStatus hv_distribution_from_weights(const double *weights,
                                           size_t len,
                                           struct HvDistribution **out);

/**
 * Uniform masses over the bins of `like`.
 *
 * # Safety
 * `like` must be a live handle; `out` must be a valid out-pointer.
 */
enum HvStatus hv_distribution_uniform_reference(const struct HvDistribution *like,
                                                struct HvDistribution **out);

/**
 * Bin count; 0 for a null handle.
 *
 * # Safety
 * `dist` must be null or a live handle.
 */
size_t hv_distribution_bins(const struct HvDistribution *dist);

/**
 * # Safety
 * `dist` must be a live handle; `buf` must hold `capacity` doubles.
 */
enum HvStatus hv_distribution_copy_masses(const struct HvDistribution *dist,
                                          double *buf,
                                          size_t capacity,
                                          size_t *out_len);

/**
 * Copies the `bins + 1` edges.
 *
 * # Safety
 * `dist` must be a live handle; `buf` must hold `capacity` doubles.
 */
enum HvStatus hv_distribution_copy_edges(const struct HvDistribution *dist,
                                         double *buf,
                                         size_t capacity,
                                         size_t *out_len);

/**
 * # Safety
 * `dist` must be null or a handle not yet freed.
 */
void hv_distribution_free(struct HvDistribution *dist);

/**
 * Full pipeline: local variance, histogram, score against uniform.
 *
 * # Safety
 * `series` must be a live handle; `out` must be a valid out-pointer.
 */
enum HvStatus hv_measure(const struct HvSeries *series,
                         size_t window,
                         size_t bins,
                         enum HvVariant variant_kind,
                         struct HvMeasureResult *out);

/**
 * # Safety
 * `dist` must be a live handle; `out` must be a valid out-pointer.
 */
enum HvStatus hv_measure_from_distribution(const struct HvDistribution *dist,
                                           enum HvVariant variant_kind,
                                           double *out);

/**
 * Evaluates a divergence or entropy. `q` may be NULL for the entropies;
 * `alpha` is ignored by metrics without an order. May write `INFINITY`.
 *
 * # Safety
 * `p` (and `q` when non-null) must be live handles; `out` a valid out-pointer.
 */
enum HvStatus hv_divergence(const struct HvDistribution *p,
                            const struct HvDistribution *q,
                            enum HvMetric metric,
                            double alpha,
                            enum HvLogBase log_base,
                            double *out);

/**
 * Spearman rank correlation of two equal-length sequences.
 *
 * # Safety
 * `xs` and `ys` must point to `len` doubles; `out` must be a valid out-pointer.
 */
enum HvStatus hv_spearman(const double *xs, const double *ys, size_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HETVAR_H */
