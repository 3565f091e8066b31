#ifndef POSSCHECK_H
#define POSSCHECK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  PC_STATUS_NULL_POINTER = 1,
  PC_STATUS_INVALID_UTF8 = 2,
  PC_STATUS_PARSE = 3,
  PC_STATUS_INVALID_ARGUMENT = 4,
  PC_STATUS_MODEL = 5,
  PC_STATUS_UNSUPPORTED = 6,
  PC_STATUS_INTERNAL = 7,
  PC_STATUS_PANIC = 8,
} PcStatus;

/**
 * Three-valued answer of a check.
 */
typedef enum PcAnswer {
  PC_ANSWER_NO = 0,
  PC_ANSWER_YES = 1,
  PC_ANSWER_UNKNOWN = 2,
} PcAnswer;

/**
 * Opaque model handle: a normal table, its optional graph and t-norm.
 */
typedef struct PcModel PcModel;

/**
 * Opaque t-norm handle.
 */
typedef struct PcTNorm PcTNorm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *pc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pc_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void pc_string_free(char *s);

/**
 * Parses a t-norm such as `"product"`, `"lukasiewicz@2"` or its JSON form.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out_tnorm` a writable pointer.
 */
enum PcStatus pc_tnorm_parse(const char *spec, struct PcTNorm **out_tnorm);

/**
 * # Safety
 * `tnorm` must be NULL or a handle from [`pc_tnorm_parse`], not yet freed.
 */
void pc_tnorm_free(struct PcTNorm *tnorm);

/**
 * # Safety
 * `tnorm` must be a live handle; `out_value` a writable pointer.
 */
enum PcStatus pc_tnorm_apply(const struct PcTNorm *tnorm, double a, double b, double *out_value);

/**
 * Residual `y Δ x`: the largest `z` with `T(z, x) <= y` (1 when `x <= y`).
 *
 * # Safety
 * `tnorm` must be a live handle; `out_value` a writable pointer.
 */
enum PcStatus pc_tnorm_residual(const struct PcTNorm *tnorm, double y, double x, double *out_value);

/**
 * Folds `len` values with the t-norm (1 for an empty array).
 *
 * # Safety
 * `values` must point to `len` readable doubles (may be NULL when `len` is 0).
 */
enum PcStatus pc_tnorm_fold(const struct PcTNorm *tnorm,
                            const double *values,
                            size_t len,
                            double *out_value);

/**
 * Loads a model from its JSON text (the format read by the command line).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_model` a writable pointer.
 */
enum PcStatus pc_model_from_json(const char *json, struct PcModel **out_model);

/**
 * # Safety
 * `model` must be NULL or a handle from [`pc_model_from_json`], not yet freed.
 */
void pc_model_free(struct PcModel *model);

/**
 * Number of variables in the model, 0 for NULL.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
size_t pc_model_variable_count(const struct PcModel *model);

/**
 * Tests `I(a, b | given)`; the sets are comma-separated variable names and
 * `given` may be NULL or empty. `tnorm` may be NULL (model's t-norm, else
 * Gödel); `epsilon <= 0` selects the default tolerance.
 *
 * # Safety
 * Pointers must be NULL (where allowed) or valid; `out_answer` writable.
 */
enum PcStatus pc_independent(const struct PcModel *model,
                             const struct PcTNorm *tnorm,
                             const char *a,
                             const char *b,
                             const char *given,
                             double epsilon,
                             enum PcAnswer *out_answer);

/**
 * Checks a Markov property (`"pairwise"`, `"local"` or `"global"`) against
 * the model's graph.
 *
 * # Safety
 * Pointers must be NULL (where allowed) or valid; `out_answer` writable.
 */
enum PcStatus pc_markov(const struct PcModel *model,
                        const struct PcTNorm *tnorm,
                        const char *property,
                        double epsilon,
                        enum PcAnswer *out_answer);

/**
 * Decides factorization over the cliques of the model's graph. When
 * `out_json` is non-NULL it receives the verdict as JSON (free with
 * [`pc_string_free`]).
 *
 * # Safety
 * Pointers must be NULL (where allowed) or valid; `out_answer` writable.
 */
enum PcStatus pc_factorizes(const struct PcModel *model,
                            const struct PcTNorm *tnorm,
                            double epsilon,
                            enum PcAnswer *out_answer,
                            char **out_json);

/**
 * Exit-code style summary used by bindings: 0 yes, 1 no, 2 unknown.
 */
int pc_answer_code(enum PcAnswer answer);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSSCHECK_H */
