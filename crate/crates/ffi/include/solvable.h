#ifndef SOLVABLE_H
#define SOLVABLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SvStatus {
  SV_STATUS_OK = 0,
  SV_STATUS_NULL_POINTER = 1,
  SV_STATUS_INVALID_ARGUMENT = 2,
  SV_STATUS_UNKNOWN_FAMILY = 3,
  SV_STATUS_UNKNOWN_PARAMETER = 4,
  SV_STATUS_OUTSIDE_DOMAIN = 5,
  SV_STATUS_SERIES = 6,
  SV_STATUS_SHOOTING = 7,
  SV_STATUS_BUFFER_TOO_SMALL = 8,
  SV_STATUS_INTERNAL = 9,
} SvStatus;

/**
 * A family with its two parameters.
 */
typedef struct SvFamily SvFamily;

/**
 * A wavefunction sampled on a uniform grid.
 */
typedef struct SvProfile SvProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sv_last_error(void);

/**
 * Number of catalog families.
 */
size_t sv_family_count(void);

/**
 * Static, NUL-terminated id of family `index`, or null when out of range.
 */
const char *sv_family_name(size_t index);

/**
 * New family with both parameters zero.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SvStatus sv_family_new(const char *id, struct SvFamily **out);

/**
 * Sets a named parameter, e.g. `"alpha"` or `"theta2"`.
 *
 * # Safety
 * `family` must come from [`sv_family_new`]; `name` must be NUL-terminated.
 */
enum SvStatus sv_family_set(struct SvFamily *family, const char *name, double value);

/**
 * # Safety
 * `family` must come from [`sv_family_new`] or be null.
 */
void sv_family_free(struct SvFamily *family);

/**
 * `V(r)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SvStatus sv_potential(const struct SvFamily *family, double r, double *out);

/**
 * Maximum relative mismatch of the reduction certificate at energy `e` and
 * whether it is within tolerance.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SvStatus sv_certificate(const struct SvFamily *family,
                             double e,
                             double *max_mismatch,
                             bool *passed);

/**
 * Closed-form bound-state energies; at most `levels` are written to `out`
 * and their count to `written`.
 *
 * # Safety
 * `out` must hold `capacity` doubles.
 */
enum SvStatus sv_analytic_spectrum(const struct SvFamily *family,
                                   size_t levels,
                                   double *out,
                                   size_t capacity,
                                   size_t *written);

/**
 * Numerically computed energies of the lowest `levels` bound states.
 *
 * # Safety
 * `out` must hold `capacity` doubles.
 */
enum SvStatus sv_shooting_spectrum(const struct SvFamily *family,
                                   size_t levels,
                                   double *out,
                                   size_t capacity,
                                   size_t *written);

/**
 * Closed-form solution at energy `e` on `n` uniform points of `[lo, hi]`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SvStatus sv_solve(const struct SvFamily *family,
                       double e,
                       double lo,
                       double hi,
                       size_t n,
                       struct SvProfile **out);

/**
 * Number of grid points, 0 for a null handle.
 *
 * # Safety
 * `profile` must come from [`sv_solve`] or be null.
 */
size_t sv_profile_len(const struct SvProfile *profile);

/**
 * Copies grid, real and imaginary parts; each buffer must hold `len` doubles.
 *
 * # Safety
 * Buffers must hold at least `len` doubles.
 */
enum SvStatus sv_profile_values(const struct SvProfile *profile,
                                double *r,
                                double *re,
                                double *im,
                                size_t len);

/**
 * # Safety
 * `profile` must come from [`sv_solve`] or be null.
 */
void sv_profile_free(struct SvProfile *profile);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOLVABLE_H */
