#ifndef ORDISTACK_H
#define ORDISTACK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum OrdistackStatus {
  ORDISTACK_STATUS_OK = 0,
  ORDISTACK_STATUS_NULL_POINTER = 1,
  ORDISTACK_STATUS_INVALID_ARGUMENT = 2,
  ORDISTACK_STATUS_DATA_ERROR = 3,
  ORDISTACK_STATUS_NUMERIC_ERROR = 4,
  ORDISTACK_STATUS_IO_ERROR = 5,
  ORDISTACK_STATUS_PANIC = 6,
} OrdistackStatus;

/**
 * Values for the `method` argument of [`ordistack_fit`].
 */
enum OrdistackMethod
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  ORDISTACK_METHOD_DIFFERENCE = 0,
  ORDISTACK_METHOD_TREE = 1,
  ORDISTACK_METHOD_VOTES = 2,
  ORDISTACK_METHOD_ONE_VS_REST = 3,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum OrdistackMethod OrdistackMethod;
#else
typedef uint32_t OrdistackMethod;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Values for the `learner` argument of [`ordistack_fit`].
 */
enum OrdistackLearner
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  ORDISTACK_LEARNER_LOGISTIC = 0,
  ORDISTACK_LEARNER_GAUSSIAN_NB = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum OrdistackLearner OrdistackLearner;
#else
typedef uint32_t OrdistackLearner;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Values for the `strategy` argument of [`ordistack_fit`].
 */
enum OrdistackStrategy
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  ORDISTACK_STRATEGY_EVEN_SPLIT = 0,
  ORDISTACK_STRATEGY_BEST_CLASSIFIER = 1,
  ORDISTACK_STRATEGY_FIRST = 2,
  ORDISTACK_STRATEGY_LAST = 3,
  ORDISTACK_STRATEGY_MIDDLE = 4,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum OrdistackStrategy OrdistackStrategy;
#else
typedef uint32_t OrdistackStrategy;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Values for the `mode` argument of [`ordistack_fit`].
 */
enum OrdistackMode
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  ORDISTACK_MODE_FULL = 0,
  ORDISTACK_MODE_CONDITIONAL_SUBSET = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum OrdistackMode OrdistackMode;
#else
typedef uint32_t OrdistackMode;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque model handle.
 */
typedef struct OrdistackModel OrdistackModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *ordistack_last_error_message(void);

/**
 * Loads a model document from a file.
 *
 * # Safety
 * `path` must be a nul-terminated string; `out` must be writable.
 */
enum OrdistackStatus ordistack_model_load(const char *path, struct OrdistackModel **out);

/**
 * Parses a model document from JSON text.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum OrdistackStatus ordistack_model_load_json(const char *json, struct OrdistackModel **out);

/**
 * # Safety
 * `model` must be a live handle and `path` a nul-terminated string.
 */
enum OrdistackStatus ordistack_model_save(const struct OrdistackModel *model, const char *path);

/**
 * Serialises a model; free the result with [`ordistack_string_free`].
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OrdistackStatus ordistack_model_to_json(const struct OrdistackModel *model, char **out);

/**
 * # Safety
 * `model` must be NULL or a handle not yet freed.
 */
void ordistack_model_free(struct OrdistackModel *model);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void ordistack_string_free(char *s);

/**
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OrdistackStatus ordistack_model_n_classes(const struct OrdistackModel *model, size_t *out);

/**
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OrdistackStatus ordistack_model_n_features(const struct OrdistackModel *model, size_t *out);

/**
 * Label of class `index` (lowest class is 0); free with [`ordistack_string_free`].
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OrdistackStatus ordistack_model_class_label(const struct OrdistackModel *model,
                                                 size_t index,
                                                 char **out);

/**
 * Class probabilities, `rows × n_classes` row-major, into `out`.
 *
 * # Safety
 * `x` must hold `rows * cols` doubles; `out` must hold `rows * n_classes`.
 */
enum OrdistackStatus ordistack_model_predict_proba(const struct OrdistackModel *model,
                                                   const double *x,
                                                   size_t rows,
                                                   size_t cols,
                                                   double *out);

/**
 * Predicted class indices into `out` (`rows` entries).
 *
 * # Safety
 * `x` must hold `rows * cols` doubles; `out` must hold `rows` entries.
 */
enum OrdistackStatus ordistack_model_predict(const struct OrdistackModel *model,
                                             const double *x,
                                             size_t rows,
                                             size_t cols,
                                             size_t *out);

/**
 * Fits a model on a feature matrix and integer labels. Classes are the
 * distinct labels in ascending order. `seed` drives the best-classifier
 * folds.
 *
 * # Safety
 * `x` must hold `rows * cols` doubles, `labels` `rows` entries; `out` must be
 * writable.
 */
enum OrdistackStatus ordistack_fit(const double *x,
                                   size_t rows,
                                   size_t cols,
                                   const int64_t *labels,
                                   uint32_t method,
                                   uint32_t learner,
                                   uint32_t strategy,
                                   uint32_t mode,
                                   uint64_t seed,
                                   struct OrdistackModel **out);

/**
 * Monotone adjustment of `n` threshold probabilities around `split`.
 *
 * # Safety
 * `p` and `out` must each hold `n` doubles.
 */
enum OrdistackStatus ordistack_monotone_adjust(const double *p,
                                               size_t n,
                                               size_t split,
                                               double *out);

/**
 * Class probabilities (`n + 1` entries) by differencing adjusted threshold
 * probabilities.
 *
 * # Safety
 * `p` must hold `n` doubles and `out` `n + 1`.
 */
enum OrdistackStatus ordistack_difference_class_probs(const double *p,
                                                      size_t n,
                                                      size_t split,
                                                      double *out);

/**
 * Class probabilities (`n + 1` entries) from conditional threshold
 * probabilities rooted at `split`.
 *
 * # Safety
 * `p` must hold `n` doubles and `out` `n + 1`.
 */
enum OrdistackStatus ordistack_tree_class_probs(const double *p,
                                                size_t n,
                                                size_t split,
                                                double *out);

/**
 * Polychoric correlation of a `rows × cols` row-major count table.
 *
 * # Safety
 * `counts` must hold `rows * cols` entries; `out` must be writable.
 */
enum OrdistackStatus ordistack_polychoric(const uint64_t *counts,
                                          size_t rows,
                                          size_t cols,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDISTACK_H */
