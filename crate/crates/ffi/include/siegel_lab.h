#ifndef SIEGEL_LAB_H
#define SIEGEL_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_DOMAIN = 2,
  SL_STATUS_DEGENERATE_PARAMETER = 3,
  SL_STATUS_POLE = 4,
  SL_STATUS_OUTSIDE_REGION = 5,
  SL_STATUS_NOT_HOMEOMORPHISM = 6,
  SL_STATUS_TUNING_FAILED = 7,
  SL_STATUS_ESCAPE = 8,
  SL_STATUS_FINITE_ORBIT = 9,
  SL_STATUS_COINCIDENT_POINTS = 10,
  SL_STATUS_INDEX_OUT_OF_RANGE = 11,
  SL_STATUS_EIGEN_NON_CONVERGENCE = 12,
  SL_STATUS_IO = 13,
  SL_STATUS_PARSE = 14,
  SL_STATUS_PANIC = 15,
} SlStatus;

/**
 * Opaque handle to a degree-3 Blaschke product with its prefactor.
 */
typedef struct SlBlaschke SlBlaschke;

/**
 * Opaque handle to a sampled boundary curve.
 */
typedef struct SlCurve SlCurve;

/**
 * Opaque handle to a normalized quadratic map `g_c`.
 */
typedef struct SlMap SlMap;

/**
 * A point of the Riemann sphere; `re` and `im` are ignored when `infinite`.
 */
typedef struct SlPoint {
  double re;
  double im;
  bool infinite;
} SlPoint;

typedef struct SlComplex {
  double re;
  double im;
} SlComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *sl_status_message(enum SlStatus status);

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *sl_last_error_message(void);

/**
 * The golden mean `(sqrt(5) - 1) / 2`.
 */
double sl_golden_mean(void);

/**
 * Creates `g_c` with rotation number `theta` in (0, 1).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SlStatus sl_map_new(struct SlPoint c, double theta, struct SlMap **out);

/**
 * # Safety
 * `map` must be null or a handle from [`sl_map_new`] not yet freed.
 */
void sl_map_free(struct SlMap *map);

/**
 * `g_c(z)`; fails with `SL_STATUS_POLE` at the pole.
 *
 * # Safety
 * `map` must be a live handle and `out` valid for writes.
 */
enum SlStatus sl_map_eval(const struct SlMap *map, struct SlComplex z, struct SlComplex *out);

/**
 * `g_c'(z)`.
 *
 * # Safety
 * `map` must be a live handle and `out` valid for writes.
 */
enum SlStatus sl_map_derivative(const struct SlMap *map, struct SlComplex z, struct SlComplex *out);

/**
 * The third fixed point `p_c` (besides 0 and infinity).
 *
 * # Safety
 * `map` must be a live handle and `out` valid for writes.
 */
enum SlStatus sl_map_fixed_point(const struct SlMap *map, struct SlPoint *out);

/**
 * The member of the symmetric Blaschke family whose free critical point is
 * `c`, with prefactor 0.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SlStatus sl_blaschke_new(struct SlPoint c, struct SlBlaschke **out);

/**
 * # Safety
 * `b` must be null or a handle from [`sl_blaschke_new`] not yet freed.
 */
void sl_blaschke_free(struct SlBlaschke *b);

/**
 * The zeros `p` (outside the disk) and `q` (inside) and the prefactor angle.
 *
 * # Safety
 * `b` must be a live handle; the outputs must be valid for writes.
 */
enum SlStatus sl_blaschke_params(const struct SlBlaschke *b,
                                 struct SlComplex *p,
                                 struct SlComplex *q,
                                 double *prefactor);

/**
 * Rotation number of the circle restriction, estimated from `n` iterates.
 *
 * # Safety
 * `b` must be a live handle and `rho` valid for writes.
 */
enum SlStatus sl_blaschke_rotation_number(const struct SlBlaschke *b, uintptr_t n, double *rho);

/**
 * Sets the prefactor so that the rotation number is `theta` within `tol`,
 * measured with `n_max` iterates. Writes the prefactor and the measured
 * rotation number.
 *
 * # Safety
 * `b` must be a live handle; `t` and `rho` must be valid for writes.
 */
enum SlStatus sl_blaschke_tune(struct SlBlaschke *b,
                               double theta,
                               double tol,
                               uintptr_t n_max,
                               double *t,
                               double *rho);

/**
 * Samples `g_c^k(1)` for `k < n`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SlStatus sl_curve_new(struct SlPoint c, double theta, uintptr_t n, struct SlCurve **out);

/**
 * # Safety
 * `curve` must be null or a handle from [`sl_curve_new`] not yet freed.
 */
void sl_curve_free(struct SlCurve *curve);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `curve` must be null or a live handle.
 */
uintptr_t sl_curve_len(const struct SlCurve *curve);

/**
 * The `i`-th sample in internal-angle order.
 *
 * # Safety
 * `curve` must be a live handle; `angle` and `z` must be valid for writes.
 */
enum SlStatus sl_curve_sample(const struct SlCurve *curve,
                              uintptr_t i,
                              double *angle,
                              struct SlComplex *z);

/**
 * Minimum `|cross ratio|` over `trials` seeded angle-ordered quadruples.
 *
 * # Safety
 * `curve` must be a live handle and `min_abs` valid for writes.
 */
enum SlStatus sl_curve_quasicircle_delta(const struct SlCurve *curve,
                                         uintptr_t trials,
                                         uint64_t seed,
                                         double *min_abs);

/**
 * `((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4))`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SlStatus sl_cross_ratio(struct SlComplex z1,
                             struct SlComplex z2,
                             struct SlComplex z3,
                             struct SlComplex z4,
                             struct SlComplex *out);

/**
 * Spectral radius of the nonnegative `n x n` row-major matrix `entries`, and
 * whether it is at least 1.
 *
 * # Safety
 * `entries` must point to `n * n` readable doubles; `lambda` and
 * `obstructed` must be valid for writes.
 */
enum SlStatus sl_leading_eigenvalue(const double *entries,
                                    uintptr_t n,
                                    double *lambda,
                                    bool *obstructed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIEGEL_LAB_H */
