#ifndef SEIFERT_TV_H
#define SEIFERT_TV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SfStatus {
  SF_STATUS_OK = 0,
  SF_STATUS_NULL_POINTER = 1,
  SF_STATUS_INVALID_UTF8 = 2,
  SF_STATUS_INVALID_SYMBOL = 3,
  SF_STATUS_INVALID_FIBER = 4,
  SF_STATUS_NOT_INVERTIBLE = 5,
  SF_STATUS_DOMAIN = 6,
  SF_STATUS_PRECONDITION = 7,
  SF_STATUS_COLOR_OUT_OF_RANGE = 8,
  SF_STATUS_NOT_ADMISSIBLE = 9,
  SF_STATUS_HYPOTHESIS = 10,
  SF_STATUS_DEGENERATE = 11,
  SF_STATUS_NUMERIC_INCONSISTENCY = 12,
  SF_STATUS_TRIANGULATION_PARSE = 13,
  SF_STATUS_INVALID_TRIANGULATION = 14,
  SF_STATUS_UNSUPPORTED = 15,
  SF_STATUS_PANIC = 16,
} SfStatus;

/**
 * Opaque Seifert symbol.
 */
typedef struct SfSymbol SfSymbol;

/**
 * Opaque triangulation.
 */
typedef struct SfTriangulation SfTriangulation;

typedef struct SfComplex {
  double re;
  double im;
} SfComplex;

/**
 * A complex invariant with its cancellation bookkeeping.
 */
typedef struct SfInvariant {
  struct SfComplex value;
  /**
   * Sum of the absolute values of all summands.
   */
  double term_magnitude_sum;
  uint64_t term_count;
  uint32_t r;
  /**
   * Nonzero when the formula did not apply and `value` is a placeholder.
   */
  bool degenerate;
} SfInvariant;

/**
 * A real Turaev–Viro value.
 */
typedef struct SfTv {
  double value;
  double imaginary_residue;
  uint64_t term_count;
  uint32_t r;
} SfTv;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *sf_last_error_message(void);

/**
 * Static name of a status code, e.g. `"precondition"`; `"unknown"` for values outside the enum.
 */
const char *sf_status_name(int32_t status);

/**
 * Library version as a static string.
 */
const char *sf_version(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void sf_string_free(char *s);

/**
 * Parses a symbol from JSON such as
 * `{"epsilon":"o","genus":1,"fibers":[[3,1],[5,1]],"boundary":true}`.
 *
 * # Safety
 * `json` must be NULL or a NUL-terminated string; `out` must be NULL or writable.
 */
enum SfStatus sf_symbol_parse(const char *json, struct SfSymbol **out);

/**
 * Builds a symbol from arrays of `a_j` and `b_j`. `orientable` selects `o` (nonzero) or `n` (zero).
 *
 * # Safety
 * `a` and `b` must point to `n` readable values each (they may be NULL when `n == 0`);
 * `out` must be writable.
 */
enum SfStatus sf_symbol_new(bool orientable,
                            int64_t genus,
                            const int64_t *a,
                            const int64_t *b,
                            size_t n,
                            bool boundary,
                            struct SfSymbol **out);

/**
 * # Safety
 * `s` must be NULL or a handle from this library that has not been freed.
 */
void sf_symbol_free(struct SfSymbol *s);

/**
 * Compact JSON of a symbol; free the result with [`sf_string_free`].
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_symbol_to_json(const struct SfSymbol *s, char **out);

/**
 * The double of a bounded symbol, as a new handle.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_symbol_double(const struct SfSymbol *s, struct SfSymbol **out);

/**
 * The orientation reversal, as a new handle.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_symbol_reverse(const struct SfSymbol *s, struct SfSymbol **out);

/**
 * The normal form, as a new handle.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_symbol_normalize(const struct SfSymbol *s, struct SfSymbol **out);

/**
 * Euler number as a reduced fraction `num / den`.
 *
 * # Safety
 * `s` must be a live handle; `num` and `den` must be writable.
 */
enum SfStatus sf_symbol_euler_number(const struct SfSymbol *s, int64_t *num, int64_t *den);

/**
 * `RT_r(M)` of a closed symbol by the direct sum.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_rt(const struct SfSymbol *s, uint32_t r, struct SfInvariant *out);

/**
 * `RT_r(D(M))` of the double of a bounded symbol by the closed form; requires `A | r`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_rt_double_simplified(const struct SfSymbol *s,
                                      uint32_t r,
                                      struct SfInvariant *out);

/**
 * `TV_r`: `|RT_r|²` for closed symbols, `Re RT_r(D(M))` for bounded ones.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_tv(const struct SfSymbol *s, uint32_t r, struct SfTv *out);

/**
 * Lower bound for `|TV_{kA}(M)|`, or for the double when `of_double` is set.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_lower_bound(const struct SfSymbol *s, uint32_t k, bool of_double, double *out);

/**
 * Hypothesis classification and certificate as JSON; free with [`sf_string_free`].
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_certify(const struct SfSymbol *s, char **out);

/**
 * Dedekind sum `s(b, a)` as a reduced fraction.
 *
 * # Safety
 * `num` and `den` must be writable.
 */
enum SfStatus sf_dedekind_sum(int64_t b, int64_t a, int64_t *num, int64_t *den);

/**
 * Quantum 6j symbol for colours `(i, j, k, l, m, n)` at level `r`.
 *
 * # Safety
 * `colors` must point to 6 readable values; `out` must be writable.
 */
enum SfStatus sf_six_j(const uint32_t *colors, uint32_t r, struct SfComplex *out);

/**
 * Parses a triangulation in the `tet <id>: g0 g1 g2 g3` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SfStatus sf_triangulation_parse(const char *text, struct SfTriangulation **out);

/**
 * The shipped two-tetrahedron triangulation of the 3-sphere.
 *
 * # Safety
 * `out` must be writable.
 */
enum SfStatus sf_triangulation_s3(struct SfTriangulation **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library that has not been freed.
 */
void sf_triangulation_free(struct SfTriangulation *t);

/**
 * Numbers of vertex, edge, face and tetrahedron classes. Any out pointer may be NULL.
 *
 * # Safety
 * `t` must be a live handle; non-NULL out pointers must be writable.
 */
enum SfStatus sf_triangulation_counts(const struct SfTriangulation *t,
                                      size_t *vertices,
                                      size_t *edges,
                                      size_t *faces,
                                      size_t *tetrahedra);

/**
 * `TV_r` of a closed triangulation by the 6j state sum.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum SfStatus sf_tv_statesum(const struct SfTriangulation *t, uint32_t r, struct SfTv *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEIFERT_TV_H */
