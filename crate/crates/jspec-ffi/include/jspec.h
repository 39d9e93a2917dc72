#ifndef JSPEC_H
#define JSPEC_H

/* This header is generated by cbindgen from the jspec-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bound kinds accepted by [`jspec_verify_bound`].
 */
typedef enum JspecBoundKind {
  JspecBoundKind_Normal = 0,
  JspecBoundKind_Remark = 1,
  JspecBoundKind_Diagonalizable = 2,
} JspecBoundKind;

/**
 * Generator families accepted by [`jspec_generate_pair`].
 */
typedef enum JspecGeneratorKind {
  JspecGeneratorKind_Normal = 0,
  JspecGeneratorKind_Diagonalizable = 1,
} JspecGeneratorKind;

/**
 * Joint-spectrum methods accepted by [`jspec_joint_spectrum`].
 */
typedef enum JspecMethod {
  JspecMethod_Normal = 0,
  JspecMethod_General = 1,
} JspecMethod;

/**
 * Perturbation classes accepted by [`jspec_generate_pair`].
 */
typedef enum JspecPerturbationClass {
  JspecPerturbationClass_Normal = 0,
  JspecPerturbationClass_ArbitraryCommuting = 1,
} JspecPerturbationClass;

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum JspecStatus {
  JspecStatus_Ok = 0,
  JspecStatus_NullPointer = 1,
  JspecStatus_InvalidUtf8 = 2,
  JspecStatus_Parse = 3,
  JspecStatus_InvalidArgument = 4,
  JspecStatus_DimensionMismatch = 5,
  JspecStatus_SingularMatrix = 6,
  JspecStatus_NotCommuting = 7,
  JspecStatus_NotNormal = 8,
  JspecStatus_NotDiagonalizable = 9,
  JspecStatus_DiagonalizationFailed = 10,
  JspecStatus_TriangularizationFailed = 11,
  JspecStatus_ZeroEigenvalue = 12,
  JspecStatus_CapacityExceeded = 13,
  JspecStatus_KindMismatch = 14,
  JspecStatus_NotDoublyStochastic = 15,
  JspecStatus_MatchingNotFound = 16,
  JspecStatus_Io = 17,
  JspecStatus_Internal = 18,
} JspecStatus;

/**
 * Opaque handle to a bound-verification report.
 */
typedef struct JspecReport JspecReport;

/**
 * Opaque handle to a computed joint spectrum.
 */
typedef struct JspecSpectrum JspecSpectrum;

/**
 * Opaque handle to an m-tuple of n×n complex matrices.
 */
typedef struct JspecTuple JspecTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread, or null when no error
 * has been recorded. The caller owns the string and must release it with
 * [`jspec_string_free`].
 */
char *jspec_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `string` must be null or a pointer previously returned by a jspec
 * function, and must not be used afterwards.
 */
void jspec_string_free(char *string);

/**
 * Parses a `jspec-1` tuple JSON document.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum JspecStatus jspec_tuple_from_json(const char *json, struct JspecTuple **out);

/**
 * Builds a tuple from `m` row-major n×n matrices of interleaved
 * `[re, im]` entry pairs (`2 * m * n * n` doubles total).
 *
 * # Safety
 * `entries` must point to `2 * m * n * n` doubles; `out` must be valid.
 */
enum JspecStatus jspec_tuple_from_parts(size_t n,
                                        size_t m,
                                        const double *entries,
                                        struct JspecTuple **out);

/**
 * Serializes a tuple to `jspec-1` JSON (17-significant-digit floats).
 *
 * # Safety
 * `tuple` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_tuple_to_json(const struct JspecTuple *tuple, char **out);

/**
 * Matrix dimension of the tuple.
 *
 * # Safety
 * `tuple` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_tuple_n(const struct JspecTuple *tuple, size_t *out);

/**
 * Number of matrices in the tuple.
 *
 * # Safety
 * `tuple` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_tuple_m(const struct JspecTuple *tuple, size_t *out);

/**
 * Reads entry (i, j) of member k.
 *
 * # Safety
 * `tuple` must be a live handle; `out_re`/`out_im` must be valid pointers.
 */
enum JspecStatus jspec_tuple_entry(const struct JspecTuple *tuple,
                                   size_t k,
                                   size_t i,
                                   size_t j,
                                   double *out_re,
                                   double *out_im);

/**
 * Releases a tuple handle.
 *
 * # Safety
 * `tuple` must be null or a live handle, and must not be used afterwards.
 */
void jspec_tuple_free(struct JspecTuple *tuple);

/**
 * Generates a seeded (tuple, perturbed tuple) pair.
 *
 * # Safety
 * `out_a` and `out_b` must be valid pointers.
 */
enum JspecStatus jspec_generate_pair(size_t n,
                                     size_t m,
                                     uint64_t seed,
                                     enum JspecGeneratorKind kind,
                                     enum JspecPerturbationClass class_,
                                     double perturbation_scale,
                                     struct JspecTuple **out_a,
                                     struct JspecTuple **out_b);

/**
 * Builds the extremal shift pair with the dimension-factor equality.
 *
 * # Safety
 * `out_a` and `out_b` must be valid pointers.
 */
enum JspecStatus jspec_extremal_pair(size_t n,
                                     size_t m,
                                     struct JspecTuple **out_a,
                                     struct JspecTuple **out_b);

/**
 * Computes a joint spectrum with the requested method and seed.
 *
 * # Safety
 * `tuple` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_joint_spectrum(const struct JspecTuple *tuple,
                                      enum JspecMethod method,
                                      uint64_t seed,
                                      struct JspecSpectrum **out);

/**
 * Spectrum dimensions.
 *
 * # Safety
 * `spectrum` must be a live handle; out pointers must be valid.
 */
enum JspecStatus jspec_spectrum_size(const struct JspecSpectrum *spectrum,
                                     size_t *out_n,
                                     size_t *out_m);

/**
 * Coordinate `coord` of joint eigenvalue `row`, rows in canonical order.
 *
 * # Safety
 * `spectrum` must be a live handle; out pointers must be valid.
 */
enum JspecStatus jspec_spectrum_eigenvalue(const struct JspecSpectrum *spectrum,
                                           size_t row,
                                           size_t coord,
                                           double *out_re,
                                           double *out_im);

/**
 * Diagonalization residual of the spectrum.
 *
 * # Safety
 * `spectrum` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_spectrum_residual(const struct JspecSpectrum *spectrum, double *out);

/**
 * Releases a spectrum handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle, and must not be used afterwards.
 */
void jspec_spectrum_free(struct JspecSpectrum *spectrum);

/**
 * Runs the full bound-verification pipeline on a tuple pair.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum JspecStatus jspec_verify_bound(const struct JspecTuple *a,
                                    const struct JspecTuple *b,
                                    enum JspecBoundKind kind,
                                    uint64_t seed,
                                    struct JspecReport **out);

/**
 * lhs, rhs and slack of a verification report.
 *
 * # Safety
 * `report` must be a live handle; out pointers must be valid.
 */
enum JspecStatus jspec_report_values(const struct JspecReport *report,
                                     double *out_lhs,
                                     double *out_rhs,
                                     double *out_slack);

/**
 * Whether the bound held (lhs ≤ rhs up to the verification tolerance).
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_report_holds(const struct JspecReport *report, bool *out);

/**
 * Copies the 1-indexed minimizing permutation into `buffer`.
 *
 * # Safety
 * `report` must be a live handle; `buffer` must hold at least `length`
 * elements, with `length` at least the tuple dimension n.
 */
enum JspecStatus jspec_report_permutation(const struct JspecReport *report,
                                          size_t *buffer,
                                          size_t length);

/**
 * Serializes a report to JSON (same schema as the CLI report file).
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum JspecStatus jspec_report_to_json(const struct JspecReport *report, char **out);

/**
 * Releases a report handle.
 *
 * # Safety
 * `report` must be null or a live handle, and must not be used afterwards.
 */
void jspec_report_free(struct JspecReport *report);

/**
 * Frobenius norm of the tuple's Clifford operator through both routes: the
 * structured identity (always written to `out_structured`) and the
 * materialized-matrix oracle (written to `out_materialized` when the
 * dimension 2^m·n fits within `materialize_limit`; otherwise the call
 * returns `CapacityExceeded` and only the structured value is written).
 *
 * # Safety
 * `tuple` must be a live handle; out pointers must be valid.
 */
enum JspecStatus jspec_clifford_frobenius(const struct JspecTuple *tuple,
                                          size_t materialize_limit,
                                          double *out_structured,
                                          double *out_materialized);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JSPEC_H */
