#ifndef CONVEXFLOW_H
#define CONVEXFLOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_NOT_CONVEX = 3,
  CF_STATUS_DOMAIN = 4,
  CF_STATUS_PARSE = 5,
  CF_STATUS_NUMERIC = 6,
  CF_STATUS_IO = 7,
  CF_STATUS_PANIC = 8,
} CfStatus;

typedef enum CfTermination {
  CF_TERMINATION_CONVERGED = 0,
  CF_TERMINATION_TIME_EXHAUSTED = 1,
  CF_TERMINATION_CONVEXITY_LOST = 2,
  CF_TERMINATION_NUMERIC_FAILURE = 3,
} CfTermination;

typedef enum CfRelationKind {
  CF_RELATION_KIND_HOMOTHETIC = 0,
  CF_RELATION_KIND_PARALLEL = 1,
  CF_RELATION_KIND_NEITHER = 2,
} CfRelationKind;

/**
 * Opaque curve handle.
 */
typedef struct CfCurve CfCurve;

/**
 * Geometric summary of a curve; `entropy` is meaningful only when
 * `has_entropy` is non-zero.
 */
typedef struct CfSummary {
  double length;
  double area;
  double ipd;
  double ipr;
  double entropy;
  bool has_entropy;
  double int_inv_k;
  double center_x;
  double center_y;
  double margin;
} CfSummary;

/**
 * Step-size and stopping parameters; fill with `cf_step_control_default`.
 */
typedef struct CfStepControl {
  double dt_init;
  double dt_min;
  double dt_max;
  double safety;
  double t_max;
  double ipr_tol;
  double margin_floor;
  double local_tol;
} CfStepControl;

/**
 * Outcome of `cf_flow_run`.
 */
typedef struct CfFlowResult {
  enum CfTermination termination;
  double final_time;
  /**
   * Accepted steps.
   */
  size_t steps;
  /**
   * Angle of the convexity loss when `termination` is `ConvexityLost`.
   */
  double theta;
  double initial_ipd;
  double final_ipd;
} CfFlowResult;

/**
 * Pair relation; `lambda` is set for homothetic pairs, `r` for parallel ones.
 */
typedef struct CfRelation {
  enum CfRelationKind kind;
  double lambda;
  double r;
  double shift_x;
  double shift_y;
} CfRelation;

/**
 * Mixed-area data of two curves.
 */
typedef struct CfMixedReport {
  double a12;
  double mixed_ipd;
  double mixed_ipr;
  double favard_lo;
  double favard_hi;
  double minkowski_slack;
  double sum_identity_residual;
  bool lower_equality;
  bool upper_equality;
  struct CfRelation relation;
} CfMixedReport;

/**
 * One inequality check; `slack >= 0` means the inequality holds.
 */
typedef struct CfInequality {
  double lhs;
  double rhs;
  double slack;
  bool holds;
  bool equality;
} CfInequality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *cf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * Builds a curve from `order + 1` cosine and sine coefficients
 * (`u = a[0]/2 + Σ a[n] cos nθ + b[n] sin nθ`, `b[0] = 0`).
 *
 * # Safety
 * `a` and `b` must point to `order + 1` readable doubles; `out` must be
 * writable.
 */
enum CfStatus cf_curve_new(const double *a, const double *b, size_t order, struct CfCurve **out);

/**
 * Seeded random strictly convex curve with radius of curvature at least
 * `margin_floor`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_curve_random(uint64_t seed,
                              size_t order,
                              double decay,
                              double margin_floor,
                              struct CfCurve **out);

/**
 * Parses the curve JSON format `{"order":N,"a":[...],"b":[...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_curve_from_json(const char *json, struct CfCurve **out);

/**
 * Serialises a curve; release the string with `cf_string_free`.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_curve_to_json(const struct CfCurve *curve, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cf_string_free(char *s);

/**
 * Releases a curve; null is ignored.
 *
 * # Safety
 * `curve` must come from this library and not have been freed.
 */
void cf_curve_free(struct CfCurve *curve);

/**
 * Highest harmonic stored in the curve.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_curve_order(const struct CfCurve *curve, size_t *out);

/**
 * Copies the coefficients into `a` and `b`, each of length `len`; `len`
 * must be at least `order + 1` and extra entries are zeroed.
 *
 * # Safety
 * `curve` must be a live handle; `a` and `b` must point to `len` writable
 * doubles.
 */
enum CfStatus cf_curve_coefficients(const struct CfCurve *curve, double *a, double *b, size_t len);

/**
 * Length, area, isoperimetric quantities, entropy and centre.
 *
 * # Safety
 * `curve` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_curve_summary(const struct CfCurve *curve, struct CfSummary *out);

/**
 * Writes the default step control into `out`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CfStatus cf_step_control_default(struct CfStepControl *out);

/**
 * Evolves `curve` under the named family (`csf`, `unit`, `gage`,
 * `jiangpan`, `mazhu`, `panyang`, `macheng`, `dual`, `gradipd`, `gradipr`,
 * `s1` … `s4`). `control` may be null for defaults. The final curve is
 * stored in `final_curve` when that pointer is non-null.
 *
 * # Safety
 * `curve` must be a live handle, `family` a NUL-terminated string,
 * `control` null or readable, `result` writable, `final_curve` null or
 * writable.
 */
enum CfStatus cf_flow_run(const struct CfCurve *curve,
                          const char *family,
                          const struct CfStepControl *control,
                          struct CfFlowResult *result,
                          struct CfCurve **final_curve);

/**
 * Mixed area of two strictly convex curves.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum CfStatus cf_mixed_area(const struct CfCurve *c1, const struct CfCurve *c2, double *out);

/**
 * Mixed area, Favard and Minkowski data and the pair relation.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum CfStatus cf_mixed_report(const struct CfCurve *c1,
                              const struct CfCurve *c2,
                              double tol,
                              struct CfMixedReport *out);

/**
 * Runs one named inequality check (`gage`, `pan_yang`,
 * `refined_pan_yang`, `isoperimetric`, `entropy`, `andrews`, `poincare`).
 *
 * # Safety
 * `curve` must be a live handle, `name` a NUL-terminated string and `out`
 * writable.
 */
enum CfStatus cf_check(const struct CfCurve *curve,
                       const char *name,
                       double tol,
                       struct CfInequality *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONVEXFLOW_H */
