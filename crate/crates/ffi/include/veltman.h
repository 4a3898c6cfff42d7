#ifndef VELTMAN_H
#define VELTMAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VtClass {
  VT_CLASS_IL = 0,
  VT_CLASS_IL_M0 = 1,
  VT_CLASS_IL_W = 2,
  VT_CLASS_IL_W_STAR = 3,
} VtClass;

typedef enum VtStatus {
  /**
   * Affirmative: no counterexample, satisfiable, forced, constructed.
   */
  VT_STATUS_OK = 0,
  /**
   * Negative verdict: countermodel, unsatisfiable, not forced, aborted.
   */
  VT_STATUS_NO = 1,
  VT_STATUS_NULL_ARGUMENT = 2,
  VT_STATUS_INVALID_UTF8 = 3,
  VT_STATUS_PARSE_ERROR = 4,
  VT_STATUS_MODEL_ERROR = 5,
  VT_STATUS_INVALID_ARGUMENT = 6,
  VT_STATUS_PANIC = 7,
} VtStatus;

/**
 * Opaque parsed formula.
 */
typedef struct VtFormula VtFormula;

/**
 * Opaque model: a frame with a valuation.
 */
typedef struct VtModel VtModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread. Valid until the next
 * call into the library from the same thread; never null.
 */
const char *vt_last_error(void);

/**
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void vt_string_free(char *s);

/**
 * Parses `src`; on success stores a new handle in `*out`.
 *
 * # Safety
 * `src` is a NUL-terminated string and `out` a writable pointer.
 */
enum VtStatus vt_formula_parse(const char *src, struct VtFormula **out);

/**
 * Canonical text of a formula, or null. Free with [`vt_string_free`].
 *
 * # Safety
 * `f` is a live formula handle.
 */
char *vt_formula_print(const struct VtFormula *f);

/**
 * # Safety
 * `f` is null or a formula handle not yet freed.
 */
void vt_formula_free(struct VtFormula *f);

/**
 * Reads a model from its JSON file format.
 *
 * # Safety
 * `json` is a NUL-terminated string and `out` a writable pointer.
 */
enum VtStatus vt_model_from_json(const char *json, struct VtModel **out);

/**
 * JSON text of a model, or null. Free with [`vt_string_free`].
 *
 * # Safety
 * `m` is a live model handle.
 */
char *vt_model_to_json(const struct VtModel *m);

/**
 * # Safety
 * `m` is null or a model handle not yet freed.
 */
void vt_model_free(struct VtModel *m);

/**
 * `Ok` if `world` forces `f` in `m`, `No` if not.
 *
 * # Safety
 * Handles are live and `world` is a NUL-terminated string.
 */
enum VtStatus vt_model_forces(const struct VtModel *m,
                              const char *world,
                              const struct VtFormula *f);

/**
 * Bounded countermodel search. `Ok` when none exists up to `max_worlds`;
 * `No` when one does, in which case it is stored in `*countermodel` if
 * that pointer is non-null. `workers == 1` is deterministic.
 *
 * # Safety
 * `f` is a live handle; `countermodel` is null or writable.
 */
enum VtStatus vt_decide(const struct VtFormula *f,
                        enum VtClass class_,
                        size_t max_worlds,
                        size_t workers,
                        struct VtModel **countermodel);

/**
 * Bounded satisfiability of one formula; the witness model, rooted at its
 * first world, goes to `*model` when non-null.
 *
 * # Safety
 * `f` is a live handle; `model` is null or writable.
 */
enum VtStatus vt_satisfiable(const struct VtFormula *f,
                             enum VtClass class_,
                             size_t max_worlds,
                             struct VtModel **model);

/**
 * Step-by-step construction of a model of `f`. On success `*json`
 * receives an object with the root, the step log and the labeled frame;
 * free it with [`vt_string_free`].
 *
 * # Safety
 * `f` is a live handle and `json` a writable pointer.
 */
enum VtStatus vt_construct(const struct VtFormula *f,
                           enum VtClass logic,
                           size_t budget,
                           size_t bound,
                           char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VELTMAN_H */
