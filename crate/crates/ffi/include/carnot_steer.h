#ifndef CARNOT_STEER_H
#define CARNOT_STEER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_ARGUMENT = 2,
  CS_STATUS_DIMENSION_MISMATCH = 3,
  CS_STATUS_NEAR_ZERO_NORM = 4,
  CS_STATUS_ANTIPODAL_VECTORS = 5,
  CS_STATUS_DEGENERATE_CONFIGURATION = 6,
  CS_STATUS_INFEASIBLE_TARGET = 7,
  CS_STATUS_ENDPOINT_MISMATCH = 8,
  CS_STATUS_PARSE = 9,
  CS_STATUS_IO = 10,
  CS_STATUS_BUFFER_TOO_SMALL = 11,
  CS_STATUS_PANIC = 12,
} CsStatus;

typedef enum CsProduct {
  CS_PRODUCT_GEOMETRIC = 0,
  CS_PRODUCT_OUTER = 1,
  CS_PRODUCT_INNER = 2,
} CsProduct;

typedef enum CsModel {
  CS_MODEL_M36 = 36,
  CS_MODEL_M47 = 47,
} CsModel;

/**
 * Opaque multivector handle.
 */
typedef struct CsMultivector CsMultivector;

/**
 * Opaque steering report handle.
 */
typedef struct CsReport CsReport;

typedef struct CsSteerOptions {
  size_t samples;
  double k_max;
  double t_max;
  double tolerance;
  size_t starts;
  uint64_t seed;
  double acceptance;
} CsSteerOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or NULL. Valid until the next failing
 * call on the same thread.
 */
const char *cs_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cs_string_free(char *s);

/**
 * Creates a multivector of `G_dim` from `2^dim` coefficients.
 *
 * # Safety
 * `coeffs` must point to `len` readable doubles; `out` must be writable.
 */
enum CsStatus cs_multivector_new(size_t dim,
                                 const double *coeffs,
                                 size_t len,
                                 struct CsMultivector **out);

/**
 * # Safety
 * `mv` must come from this library and not have been freed. NULL is ignored.
 */
void cs_multivector_free(struct CsMultivector *mv);

/**
 * Algebra dimension of `mv`, 0 for NULL.
 *
 * # Safety
 * `mv` must be NULL or a live handle.
 */
size_t cs_multivector_dim(const struct CsMultivector *mv);

/**
 * Copies the `2^dim` coefficients into `out`.
 *
 * # Safety
 * `mv` must be a live handle; `out` must hold `len` doubles.
 */
enum CsStatus cs_multivector_coeffs(const struct CsMultivector *mv, double *out, size_t len);

/**
 * `out = a ∘ b` for the chosen product.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum CsStatus cs_multivector_product(enum CsProduct kind,
                                     const struct CsMultivector *a,
                                     const struct CsMultivector *b,
                                     struct CsMultivector **out);

/**
 * `out = mv I`.
 *
 * # Safety
 * `mv` must be a live handle; `out` must be writable.
 */
enum CsStatus cs_multivector_dual(const struct CsMultivector *mv, struct CsMultivector **out);

/**
 * Euclidean norm of the coefficients.
 *
 * # Safety
 * `mv` must be a live handle; `out` must be writable.
 */
enum CsStatus cs_multivector_norm(const struct CsMultivector *mv, double *out);

/**
 * Invariants of a point given by coefficients (8 for `M36`, 16 for
 * `M47`): 3 values for `M36`, 4 for `M47`.
 *
 * # Safety
 * `coeffs` must hold `len` doubles and `out` `out_len` doubles.
 */
enum CsStatus cs_invariants(enum CsModel model,
                            const double *coeffs,
                            size_t len,
                            double *out,
                            size_t out_len);

/**
 * Rotor taking the frame `xs` to `ys`. Both are `dim` vectors of `dim`
 * components, row-major; the rotor's `2^dim` coefficients go to `out`.
 *
 * # Safety
 * `xs`, `ys` must each hold `dim * dim` doubles and `out` `out_len`.
 */
enum CsStatus cs_align_bases(size_t dim,
                             const double *xs,
                             const double *ys,
                             double *out,
                             size_t out_len);

/**
 * Defaults matching the command-line tool.
 */
struct CsSteerOptions cs_steer_options_default(void);

/**
 * Steers from the origin to the point given by coefficients.
 * `options` may be NULL for defaults.
 *
 * # Safety
 * `coeffs` must hold `len` doubles, `options` be NULL or readable, and
 * `out` writable.
 */
enum CsStatus cs_steer(enum CsModel model,
                       const double *coeffs,
                       size_t len,
                       const struct CsSteerOptions *options,
                       struct CsReport **out);

/**
 * # Safety
 * `report` must come from this library and not have been freed. NULL is
 * ignored.
 */
void cs_report_free(struct CsReport *report);

/**
 * Arrival time, NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
double cs_report_t_final(const struct CsReport *report);

/**
 * Endpoint error, NaN for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
double cs_report_endpoint_error(const struct CsReport *report);

/**
 * Number of trajectory samples.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
size_t cs_report_sample_count(const struct CsReport *report);

/**
 * Values per sample row: `t` followed by the coordinates (7 for `M36`,
 * 8 for `M47`).
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
size_t cs_report_row_width(const struct CsReport *report);

/**
 * Copies the sampled trajectory, row-major, into `out`.
 *
 * # Safety
 * `report` must be a live handle; `out` must hold `len` doubles.
 */
enum CsStatus cs_report_samples(const struct CsReport *report, double *out, size_t len);

/**
 * Copies the alignment rotor's coefficients into `out`.
 *
 * # Safety
 * `report` must be a live handle; `out` must hold `len` doubles.
 */
enum CsStatus cs_report_rotor(const struct CsReport *report, double *out, size_t len);

/**
 * Geodesic constants: `(K, D, C3, t)` for `M36`, `(K, C1, C2, C, t)` for
 * `M47`.
 *
 * # Safety
 * `report` must be a live handle; `out` must hold `len` doubles.
 */
enum CsStatus cs_report_params(const struct CsReport *report, double *out, size_t len);

/**
 * The report as JSON; free with [`cs_string_free`]. NULL on failure.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
char *cs_report_to_json(const struct CsReport *report);

/**
 * Re-checks a JSON report; `passed` receives 1 when every check passes.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `passed` must be writable.
 */
enum CsStatus cs_verify_report_json(const char *json, int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARNOT_STEER_H */
