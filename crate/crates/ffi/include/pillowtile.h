#ifndef PILLOWTILE_H
#define PILLOWTILE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_UTF8 = 2,
  PT_STATUS_PARSE = 3,
  /**
   * A datum, permutation list or geometry that the library rejects.
   */
  PT_STATUS_INVALID_INPUT = 4,
  PT_STATUS_PRECONDITION = 5,
  PT_STATUS_ORBIT_CAP = 6,
  PT_STATUS_QUADRATURE = 7,
  PT_STATUS_NUMERICAL = 8,
  /**
   * Independent computations disagreed.
   */
  PT_STATUS_CONSISTENCY = 9,
  PT_STATUS_INTERNAL = 10,
  PT_STATUS_PANIC = 11,
  PT_STATUS_BUFFER_TOO_SMALL = 12,
} PtStatus;

/**
 * Verdict of a degeneracy certificate.
 */
typedef enum {
  PT_VERDICT_PASS = 0,
  PT_VERDICT_FAIL = 1,
  PT_VERDICT_CONTRADICTION = 2,
} PtVerdict;

/**
 * B-form report of a holomorphic basis.
 */
typedef struct PtBForm PtBForm;

/**
 * Degeneracy certificate.
 */
typedef struct PtCertificate PtCertificate;

/**
 * A pillowcase cover, remembering the cyclic datum it came from if any.
 */
typedef struct PtCover PtCover;

/**
 * Monte-Carlo estimate of the Lyapunov exponents.
 */
typedef struct PtEstimate PtEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *pt_last_error(void);

/**
 * Library version as a static string.
 */
const char *pt_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pt_string_free(char *s);

/**
 * Cyclic cover `(N, a1, a2, a3, a4)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
PtStatus pt_cover_cyclic(uint32_t n,
                         uint32_t a1,
                         uint32_t a2,
                         uint32_t a3,
                         uint32_t a4,
                         PtCover **out);

/**
 * Parses `N a1 a2 a3 a4` or `d; g0; g1; g2; g3` with cycle-notation
 * permutations.
 *
 * # Safety
 * `line` must be a NUL-terminated string and `out` a valid pointer.
 */
PtStatus pt_cover_parse(const char *line, PtCover **out);

/**
 * # Safety
 * `cover` must come from this library and not have been freed.
 */
void pt_cover_free(PtCover *cover);

/**
 * Degree over the pillowcase, or 0 for a null handle.
 *
 * # Safety
 * `cover` must be null or a live handle.
 */
size_t pt_cover_degree(const PtCover *cover);

/**
 * Genus of the cover, or 0 for a null handle.
 *
 * # Safety
 * `cover` must be null or a live handle.
 */
uint32_t pt_cover_genus(const PtCover *cover);

/**
 * Cover report (degree, genus, stratum, poles) as JSON.
 *
 * # Safety
 * `cover` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_cover_report_json(const PtCover *cover, char **out);

/**
 * Exact Lyapunov sum with its decomposition, as JSON. `orbit_cap` of 0
 * selects the default cap.
 *
 * # Safety
 * `cover` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_ekz_json(const PtCover *cover, size_t orbit_cap, char **out);

/**
 * Whether the exact Lyapunov sum vanishes.
 *
 * # Safety
 * `cover` must be a live handle and `degenerate` a valid pointer.
 */
PtStatus pt_ekz_is_degenerate(const PtCover *cover, size_t orbit_cap, bool *degenerate);

/**
 * Runs the cocycle walk for `steps` continued-fraction digits split into
 * `blocks` blocks.
 *
 * # Safety
 * `cover` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_lyapunov_run(const PtCover *cover,
                         size_t steps,
                         uint64_t seed,
                         size_t blocks,
                         size_t orbit_cap,
                         PtEstimate **out);

/**
 * Copies `λ⁺` into `buf` (capacity `cap`) and stores the count in `len`.
 * With a null `buf` and `cap` 0 only the count is reported, as an error
 * unless the spectrum is empty.
 *
 * # Safety
 * `est` must be a live handle, `buf` valid for `cap` writes, `len` valid.
 */
PtStatus pt_estimate_lambda_plus(const PtEstimate *est, double *buf, size_t cap, size_t *len);

/**
 * Copies `λ⁻` like [`pt_estimate_lambda_plus`].
 *
 * # Safety
 * As for [`pt_estimate_lambda_plus`].
 */
PtStatus pt_estimate_lambda_minus(const PtEstimate *est, double *buf, size_t cap, size_t *len);

/**
 * # Safety
 * `est` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_estimate_json(const PtEstimate *est, char **out);

/**
 * # Safety
 * `est` must come from this library and not have been freed.
 */
void pt_estimate_free(PtEstimate *est);

/**
 * Certifies full degeneracy of `λ⁺` using seeds `1..=seeds`.
 *
 * # Safety
 * `cover` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_certify(const PtCover *cover,
                    double epsilon,
                    size_t steps,
                    uint64_t seeds,
                    PtCertificate **out);

/**
 * Verdict of a certificate; a null handle reads as a contradiction.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
PtVerdict pt_certificate_verdict(const PtCertificate *cert);

/**
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_certificate_json(const PtCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must come from this library and not have been freed.
 */
void pt_certificate_free(PtCertificate *cert);

/**
 * B-form of a cyclic cover with branch values `0, 1, ∞, t` against the
 * pullback of the pillowcase differential. `tol` of 0 selects the
 * default quadrature tolerance.
 *
 * # Safety
 * `cover` must be a live handle carrying a cyclic datum; `out` valid.
 */
PtStatus pt_bform_cyclic(const PtCover *cover, double t_re, double t_im, double tol, PtBForm **out);

/**
 * B-form of `w² = Π (z - z_k)` against the anti-invariant `w⁻¹ dz²`.
 * `points` holds `count` interleaved `(re, im)` pairs.
 *
 * # Safety
 * `points` must be valid for `2 * count` reads and `out` valid.
 */
PtStatus pt_bform_hyperelliptic(const double *points, size_t count, double tol, PtBForm **out);

/**
 * Copies the θ-spectrum, nonincreasing, like [`pt_estimate_lambda_plus`].
 *
 * # Safety
 * `report` must be a live handle, `buf` valid for `cap` writes, `len` valid.
 */
PtStatus pt_bform_theta(const PtBForm *report, double *buf, size_t cap, size_t *len);

/**
 * Largest modulus of a B entry, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double pt_bform_max_entry(const PtBForm *report);

/**
 * Quadrature error estimate, or NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double pt_bform_quad_error(const PtBForm *report);

/**
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
PtStatus pt_bform_json(const PtBForm *report, char **out);

/**
 * # Safety
 * `report` must come from this library and not have been freed.
 */
void pt_bform_free(PtBForm *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PILLOWTILE_H */
