#ifndef AUTOSERIES_H
#define AUTOSERIES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes; the nonzero library codes match the CLI exit codes.
 */
typedef enum AsStatus {
  AS_STATUS_OK = 0,
  /*
   Null pointer, bad UTF-8 or an out-of-range scalar argument.
   */
  AS_STATUS_INVALID_ARGUMENT = 1,
  AS_STATUS_USER = 2,
  AS_STATUS_RESOURCE = 3,
  AS_STATUS_VERIFICATION = 4,
  /*
   A panic was caught at the boundary.
   */
  AS_STATUS_INTERNAL = 5,
} AsStatus;

/*
 A finite automaton with output.
 */
typedef struct AsDfao AsDfao;

/*
 A finite field F_q.
 */
typedef struct AsField AsField;

/*
 An automatic generalized power series.
 */
typedef struct AsSeries AsSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *as_last_error(void);

/*
 The default field F_{p^e}.

 # Safety
 `out` must be a valid pointer to writable storage for one pointer.
 */
enum AsStatus as_field_new(uint32_t p, uint32_t e, struct AsField **out);

/*
 Field size q, or 0 for a null handle.

 # Safety
 `f` must be null or a handle from [`as_field_new`].
 */
uint32_t as_field_size(const struct AsField *f);

/*
 # Safety
 `f` must be null or a handle from [`as_field_new`] not yet freed.
 */
void as_field_free(struct AsField *f);

/*
 The power-series root of `equation` (a polynomial in t and y) whose
 constant term is `x0`, as an automatic series.

 # Safety
 `field` must be a live field handle, `equation` a NUL-terminated string
 and `out` valid writable storage for one pointer.
 */
enum AsStatus as_series_christol(const struct AsField *field,
                                 const char *equation,
                                 uint32_t x0,
                                 struct AsSeries **out);

/*
 Parses the JSON form written by [`as_series_to_json`] or the CLI.

 # Safety
 `json` must be a NUL-terminated string and `out` valid writable storage.
 */
enum AsStatus as_series_from_json(const char *json, struct AsSeries **out);

/*
 JSON text of the series; release it with [`as_string_free`].

 # Safety
 `s` must be a live series handle and `out` valid writable storage.
 */
enum AsStatus as_series_to_json(const struct AsSeries *s, char **out);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void as_string_free(char *s);

/*
 Coefficient of t^(num/den) as a field element code.

 # Safety
 `s` must be a live series handle and `out` valid writable storage.
 */
enum AsStatus as_series_coeff(const struct AsSeries *s, int64_t num, int64_t den, uint32_t *out);

/*
 Dimension of the underlying semilinear representation, 0 for null.

 # Safety
 `s` must be null or a live series handle.
 */
size_t as_series_dim(const struct AsSeries *s);

/*
 Sum of two series over the same field.

 # Safety
 `a` and `b` must be live series handles and `out` valid writable storage.
 */
enum AsStatus as_series_add(const struct AsSeries *a,
                            const struct AsSeries *b,
                            struct AsSeries **out);

/*
 Coefficientwise product.

 # Safety
 As for [`as_series_add`].
 */
enum AsStatus as_series_hadamard(const struct AsSeries *a,
                                 const struct AsSeries *b,
                                 struct AsSeries **out);

/*
 Cauchy product.

 # Safety
 As for [`as_series_add`].
 */
enum AsStatus as_series_mul(const struct AsSeries *a,
                            const struct AsSeries *b,
                            struct AsSeries **out);

/*
 Terms with exponent below num/den.

 # Safety
 `s` must be a live series handle and `out` valid writable storage.
 */
enum AsStatus as_series_truncate(const struct AsSeries *s,
                                 int64_t num,
                                 int64_t den,
                                 struct AsSeries **out);

/*
 # Safety
 `s` must be null or a live series handle not yet freed.
 */
void as_series_free(struct AsSeries *s);

/*
 Automaton accepting the canonical words of the exponents whose
 coefficient vanishes.

 # Safety
 `s` must be a live series handle and `out` valid writable storage.
 */
enum AsStatus as_series_zero_set(const struct AsSeries *s, struct AsDfao **out);

/*
 Number of states, 0 for null.

 # Safety
 `m` must be null or a live automaton handle.
 */
size_t as_dfao_states(const struct AsDfao *m);

/*
 Output on the canonical base-p word of num/den, with den a power of p.

 # Safety
 `m` must be a live automaton handle and `out` valid writable storage.
 */
enum AsStatus as_dfao_eval(const struct AsDfao *m, uint64_t num, uint64_t den, uint32_t *out);

/*
 # Safety
 `m` must be null or a live automaton handle not yet freed.
 */
void as_dfao_free(struct AsDfao *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AUTOSERIES_H */
