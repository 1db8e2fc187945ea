#ifndef CIRCFAM_H
#define CIRCFAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_RANGE = 3,
  CF_STATUS_DIMENSION_MISMATCH = 4,
  CF_STATUS_PARSE = 5,
  CF_STATUS_UNVERIFIED = 6,
  CF_STATUS_IO = 7,
  CF_STATUS_PANIC = 8,
} CfStatus;

typedef enum CfSearchStatus {
  CF_SEARCH_STATUS_WITNESS = 0,
  CF_SEARCH_STATUS_NONEXISTENT = 1,
  CF_SEARCH_STATUS_INCONCLUSIVE = 2,
} CfSearchStatus;

/**
 * Opaque family-pair certificate.
 */
typedef struct CfCertificate CfCertificate;

/**
 * Opaque Boolean matrix.
 */
typedef struct CfMatrix CfMatrix;

/**
 * Outcome of [`cf_certificate_verify`]. When `passed` is false and
 * `mismatch` is true, `row` and `col` locate the first wrong cell.
 */
typedef struct CfVerdict {
  bool passed;
  bool mismatch;
  size_t shift;
  size_t row;
  size_t col;
} CfVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *cf_last_error(void);

void cf_string_free(char *s);

/**
 * The canonical circulant `C_{p,q}`.
 */
enum CfStatus cf_circulant(size_t p, size_t q, struct CfMatrix **out);

void cf_matrix_free(struct CfMatrix *m);

/**
 * Number of rows, or 0 for a null handle.
 */
size_t cf_matrix_rows(const struct CfMatrix *m);

/**
 * Number of columns, or 0 for a null handle.
 */
size_t cf_matrix_cols(const struct CfMatrix *m);

enum CfStatus cf_matrix_get(const struct CfMatrix *m, size_t row, size_t col, bool *out);

/**
 * Boolean product `a * b`.
 */
enum CfStatus cf_matrix_product(const struct CfMatrix *a,
                                const struct CfMatrix *b,
                                struct CfMatrix **out);

/**
 * Row `r` of the result is row `(r + shift) mod n` of `m`.
 */
enum CfStatus cf_matrix_rotate_rows(const struct CfMatrix *m, int64_t shift, struct CfMatrix **out);

/**
 * Rows of `0`/`1` characters, one per line.
 */
enum CfStatus cf_matrix_to_text(const struct CfMatrix *m, char **out);

enum CfStatus cf_construct_small_p(size_t t,
                                   size_t p,
                                   size_t q,
                                   size_t k,
                                   struct CfCertificate **out);

enum CfStatus cf_construct_mid_p(size_t t, size_t p, size_t q, struct CfCertificate **out);

enum CfStatus cf_construct_blowup(size_t t, size_t q, struct CfCertificate **out);

enum CfStatus cf_construct_recursive_q2(size_t t, struct CfCertificate **out);

void cf_certificate_free(struct CfCertificate *c);

/**
 * Parses a certificate document from a NUL-terminated UTF-8 string.
 */
enum CfStatus cf_certificate_from_json(const char *json, struct CfCertificate **out);

enum CfStatus cf_certificate_to_json(const struct CfCertificate *c, char **out);

/**
 * Order `p + q` of the certificate's target, or 0 for a null handle.
 */
size_t cf_certificate_order(const struct CfCertificate *c);

enum CfStatus cf_certificate_verify(const struct CfCertificate *c, struct CfVerdict *out);

/**
 * The matrix of pairwise intersections of the certificate's members.
 */
enum CfStatus cf_certificate_intersection_matrix(const struct CfCertificate *c,
                                                 struct CfMatrix **out);

/**
 * Decides whether the canonical `C_{p,q}` embeds in `A_{k,t}`.
 *
 * `max_nodes == 0` means no budget; `workers == 0` picks a default. When a
 * witness is found and `witness` is non-null, a certificate is stored there;
 * otherwise `*witness` is set to null.
 */
enum CfStatus cf_decide_embedding(size_t k,
                                  size_t t,
                                  size_t p,
                                  size_t q,
                                  uint64_t max_nodes,
                                  size_t workers,
                                  enum CfSearchStatus *status,
                                  struct CfCertificate **witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCFAM_H */
