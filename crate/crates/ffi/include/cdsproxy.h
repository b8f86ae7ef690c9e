#ifndef CDSPROXY_H
#define CDSPROXY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum CdspStatus {
  CDSP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CDSP_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CDSP_STATUS_INVALID_UTF8 = 2,
  /**
   * An argument or configuration value was rejected.
   */
  CDSP_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Reading or writing a file failed.
   */
  CDSP_STATUS_IO = 4,
  /**
   * Input data violated the panel schema or range rules.
   */
  CDSP_STATUS_INVALID_DATA = 5,
  /**
   * A fit failed for numerical reasons (singular matrices, no convergence).
   */
  CDSP_STATUS_NUMERICAL = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  CDSP_STATUS_PANIC = 7,
} CdspStatus;

/**
 * Opaque fitted classifier together with its class names.
 */
typedef struct CdspModel CdspModel;

/**
 * Opaque market panel.
 */
typedef struct CdspPanel CdspPanel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *cdsp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cdsp_version(void);

/**
 * Generates a synthetic panel. On success `*out` receives a new handle.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CdspStatus cdsp_panel_generate(uintptr_t n_counterparties,
                                    uintptr_t n_nonobservables,
                                    uintptr_t n_days,
                                    double factor_loading,
                                    double idiosyncratic_scale,
                                    double base_spacing,
                                    uint64_t seed,
                                    struct CdspPanel **out);

/**
 * Reads a panel CSV.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CdspStatus cdsp_panel_read_csv(const char *path, struct CdspPanel **out);

/**
 * Writes a panel CSV.
 *
 * # Safety
 * `panel` must be a live handle and `path` a NUL-terminated string.
 */
enum CdspStatus cdsp_panel_write_csv(const struct CdspPanel *panel, const char *path);

/**
 * Number of (counterparty, date) rows, or 0 for a null handle.
 *
 * # Safety
 * `panel` must be null or a live handle.
 */
uintptr_t cdsp_panel_n_rows(const struct CdspPanel *panel);

/**
 * Number of counterparties, or 0 for a null handle.
 *
 * # Safety
 * `panel` must be null or a live handle.
 */
uintptr_t cdsp_panel_n_counterparties(const struct CdspPanel *panel);

/**
 * Releases a panel. Null is ignored.
 *
 * # Safety
 * `panel` must be null or a handle not yet freed.
 */
void cdsp_panel_free(struct CdspPanel *panel);

/**
 * Fits `classifier` (a table label such as `"QDA-FullCov"`) on the
 * observable counterparties of `panel`, using feature selection
 * `fs` (1 to 6).
 *
 * # Safety
 * `panel` must be a live handle, `classifier` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum CdspStatus cdsp_model_fit(const struct CdspPanel *panel,
                               const char *classifier,
                               uint8_t fs,
                               uint64_t seed,
                               struct CdspModel **out);

/**
 * Input dimension of a model, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
uintptr_t cdsp_model_dim(const struct CdspModel *model);

/**
 * Number of classes of a model, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
uintptr_t cdsp_model_n_classes(const struct CdspModel *model);

/**
 * Counterparty name of class `class`, or null when out of range. The
 * string lives as long as the model.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
const char *cdsp_model_class_name(const struct CdspModel *model, uintptr_t class_);

/**
 * Classifies one feature vector of length `len` (in raw units, ordered as
 * the feature selection's columns) and stores the class index in `*out_class`.
 *
 * # Safety
 * `model` must be a live handle, `x` must point to `len` doubles and
 * `out_class` must be valid.
 */
enum CdspStatus cdsp_model_classify(const struct CdspModel *model,
                                    const double *x,
                                    uintptr_t len,
                                    uintptr_t *out_class);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void cdsp_model_free(struct CdspModel *model);

/**
 * Stratified `k`-fold cross validation of `classifier` on the observables
 * of `panel`. Writes the mean and population sd of the fold
 * misclassification rates.
 *
 * # Safety
 * `panel` must be a live handle, `classifier` a NUL-terminated string and
 * the output pointers valid.
 */
enum CdspStatus cdsp_cross_validate(const struct CdspPanel *panel,
                                    const char *classifier,
                                    uint8_t fs,
                                    uintptr_t k,
                                    uint64_t seed,
                                    double *out_mean,
                                    double *out_sd);

/**
 * Curve-mapping proxy of a bucket of `len` spreads. `median` selects the
 * median instead of the mean.
 *
 * # Safety
 * `bucket` must point to `len` doubles (or be null when `len` is 0) and
 * `out` must be valid.
 */
enum CdspStatus cdsp_curve_mapping(const double *bucket, uintptr_t len, bool median, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDSPROXY_H */
