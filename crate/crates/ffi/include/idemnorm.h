#ifndef IDEMNORM_H
#define IDEMNORM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function.
 */
typedef enum IdemStatus {
  IdemStatus_Ok = 0,
  IdemStatus_NullPointer = 1,
  IdemStatus_InvalidUtf8 = 2,
  IdemStatus_InvalidJson = 3,
  IdemStatus_InvalidGroup = 4,
  IdemStatus_InvalidInput = 5,
  IdemStatus_Numerical = 6,
  IdemStatus_Panic = 7,
} IdemStatus;

/**
 * Opaque handle to a validated finite group.
 */
typedef struct IdemGroup IdemGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Owned by the library.
 */
const char *idem_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *idem_version(void);

/**
 * Builds a group from JSON such as `{"type":"cyclic","n":12}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum IdemStatus idem_group_from_json(const char *json, struct IdemGroup **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from [`idem_group_from_json`] and not be used afterwards.
 */
void idem_group_free(struct IdemGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum IdemStatus idem_group_order(const struct IdemGroup *g, uintptr_t *out);

/**
 * Norm of the indicator of `elems[0..len]`.
 *
 * # Safety
 * `elems` must point to `len` readable values; `out` must be writable.
 */
enum IdemStatus idem_subset_norm(const struct IdemGroup *g,
                                 const uintptr_t *elems,
                                 uintptr_t len,
                                 double *out);

/**
 * Norm of the function with real parts `re` and imaginary parts `im` (may be null).
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `len` values; `out` must be writable.
 */
enum IdemStatus idem_function_norm(const struct IdemGroup *g,
                                   const double *re,
                                   const double *im,
                                   uintptr_t len,
                                   double *out);

/**
 * Same as [`idem_function_norm`] through characters; abelian groups only.
 *
 * # Safety
 * As for [`idem_function_norm`].
 */
enum IdemStatus idem_oracle_norm(const struct IdemGroup *g,
                                 const double *re,
                                 const double *im,
                                 uintptr_t len,
                                 double *out);

/**
 * Whether `elems[0..len]` is a left or right coset. The empty set is not.
 *
 * # Safety
 * `elems` must point to `len` values; `out` must be writable.
 */
enum IdemStatus idem_is_coset(const struct IdemGroup *g,
                              const uintptr_t *elems,
                              uintptr_t len,
                              bool *out);

/**
 * Normalized `L^1` norm of the Dirichlet kernel of order `k`.
 *
 * # Safety
 * `out_value` must be writable; `out_points` may be null.
 */
enum IdemStatus idem_dirichlet_norm(uint64_t k,
                                    double abs_tol,
                                    double *out_value,
                                    uintptr_t *out_points);

/**
 * Gap audit report as JSON; free with [`idem_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum IdemStatus idem_gap_audit_json(const struct IdemGroup *g, char **out);

/**
 * Exhaustive search result as JSON; free with [`idem_string_free`].
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum IdemStatus idem_brute_force_max_json(const struct IdemGroup *g, char **out);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void idem_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDEMNORM_H */
