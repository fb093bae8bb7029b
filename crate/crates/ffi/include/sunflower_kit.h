#ifndef SUNFLOWER_KIT_H
#define SUNFLOWER_KIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SkDistribution {
  SK_DISTRIBUTION_UNIFORM = 0,
  SK_DISTRIBUTION_STAR = 1,
  SK_DISTRIBUTION_CLUSTERED = 2,
} SkDistribution;

// Outcome of a check.
typedef enum SkHolds {
  SK_HOLDS_FALSE = 0,
  SK_HOLDS_TRUE = 1,
  SK_HOLDS_VACUOUS = 2,
  SK_HOLDS_INCONCLUSIVE = 3,
} SkHolds;

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_UTF8 = 2,
  SK_STATUS_INVALID_ARGUMENT = 3,
  SK_STATUS_INVALID_FAMILY = 4,
  SK_STATUS_PARSE = 5,
  SK_STATUS_PRECONDITION = 6,
  SK_STATUS_BUDGET_EXCEEDED = 7,
  SK_STATUS_CONSISTENCY = 8,
  SK_STATUS_IO = 9,
  SK_STATUS_PANIC = 10,
} SkStatus;

// Opaque family handle.
typedef struct SkFamily SkFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next call into the library on the same thread; do not free.
const char *sk_last_error(void);

// Parse a family from NUL-terminated text (`n=.. m=..` header, one set per line).
//
// # Safety
// `text` must be a valid NUL-terminated string and `out_family` a valid pointer.
enum SkStatus sk_family_parse(const char *text, struct SkFamily **out_family);

// Seeded random `m`-uniform family with `count` members on `n` elements.
//
// # Safety
// `out_family` must be a valid pointer.
enum SkStatus sk_family_generate(uint64_t seed,
                                 enum SkDistribution dist,
                                 uint32_t n,
                                 uint32_t m,
                                 size_t count,
                                 struct SkFamily **out_family);

// # Safety
// `f` must be NULL or a handle from this library that has not been freed.
void sk_family_free(struct SkFamily *f);

// Universe size, uniformity and member count.
//
// # Safety
// `f` must be a live handle; each out pointer must be valid or NULL.
enum SkStatus sk_family_shape(const struct SkFamily *f, uint32_t *n, uint32_t *m, size_t *len);

// Canonical text form; free with [`sk_string_free`].
//
// # Safety
// `f` must be a live handle and `out_text` a valid pointer.
enum SkStatus sk_family_to_text(const struct SkFamily *f, char **out_text);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void sk_string_free(char *s);

// Number of `l`-sets containing at least one member.
//
// # Safety
// `f` must be a live handle and `out_count` a valid pointer.
enum SkStatus sk_ext_count(const struct SkFamily *f, uint32_t l, uint64_t *out_count);

// Set condition at `b = b_num / b_den`; `weighted` selects the weighted form.
//
// # Safety
// `f` must be a live handle and `out_holds` a valid pointer.
enum SkStatus sk_gamma_check(const struct SkFamily *f,
                             int64_t b_num,
                             int64_t b_den,
                             bool weighted,
                             enum SkHolds *out_holds);

// Exact split identity for `j` disjoint blocks of size `d`.
//
// # Safety
// `f` must be a live handle and `out_holds` a valid pointer.
enum SkStatus sk_split_check(const struct SkFamily *f,
                             uint32_t d,
                             uint32_t j,
                             enum SkHolds *out_holds);

// Sunflower search with `k` petals; writes the JSON report (free with
// [`sk_string_free`]) and its verdict. Exceeding `budget` search nodes
// returns `BudgetExceeded`.
//
// # Safety
// `f` must be a live handle; `out_holds` and `out_json` must be valid or NULL.
enum SkStatus sk_sunflower(const struct SkFamily *f,
                           size_t k,
                           uint64_t budget,
                           enum SkHolds *out_holds,
                           char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUNFLOWER_KIT_H */
