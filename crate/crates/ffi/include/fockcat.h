#ifndef FOCKCAT_H
#define FOCKCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  FC_STATUS_INVALID_UTF8 = 2,
  FC_STATUS_PARSE = 3,
  FC_STATUS_COMPOSE_CONST = 4,
  FC_STATUS_NON_INTEGRAL = 5,
  FC_STATUS_CUTOFF = 6,
  FC_STATUS_SIZE = 7,
  FC_STATUS_DIVERGED = 8,
  FC_STATUS_INPUT = 9,
  FC_STATUS_TYPE = 10,
  FC_STATUS_UNSUPPORTED = 11,
  FC_STATUS_PANIC = 12,
} FcStatus;

// An enumerated diagram groupoid.
typedef struct FcDiagrams FcDiagrams;

// A parsed query, ready to be evaluated any number of times.
typedef struct FcQuery FcQuery;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if the last call
// succeeded. The pointer stays valid until the next call on the same thread.
const char *fc_last_error(void);

// Releases a string returned by this library. Null is accepted.
//
// # Safety
// `s` must be null or a pointer obtained from this library that has not
// been freed yet.
void fc_string_free(char *s);

// Version string of the library. Static, do not free.
const char *fc_version(void);

// Parses and evaluates a query, writing its JSON result to `*out_json`.
//
// # Safety
// `text` must be a nul-terminated string and `out_json` a writable pointer.
enum FcStatus fc_eval(const char *text, char **out_json);

// Parses a query into a reusable handle.
//
// # Safety
// `text` must be a nul-terminated string and `out` a writable pointer.
enum FcStatus fc_query_parse(const char *text, struct FcQuery **out);

// Normalized text of a parsed query.
//
// # Safety
// `query` must be a live handle from [`fc_query_parse`].
enum FcStatus fc_query_text(const struct FcQuery *query, char **out_text);

// # Safety
// `query` must be a live handle from [`fc_query_parse`].
enum FcStatus fc_query_eval(const struct FcQuery *query, char **out_json);

// # Safety
// `query` must be null or a handle from [`fc_query_parse`] not yet freed.
void fc_query_free(struct FcQuery *query);

// Enumerates the diagrams with `k` inputs, `l` outputs and the given vertex
// valences.
//
// # Safety
// `valences` must point to `count` readable values (or be null when
// `count` is zero) and `out` must be writable.
enum FcStatus fc_diagrams_new(size_t k,
                              size_t l,
                              const size_t *valences,
                              size_t count,
                              struct FcDiagrams **out);

// Number of isomorphism classes.
//
// # Safety
// `d` must be a live handle from [`fc_diagrams_new`].
enum FcStatus fc_diagrams_class_count(const struct FcDiagrams *d, size_t *out);

// Groupoid cardinality as an exact fraction such as `"1/48"`.
//
// # Safety
// `d` must be a live handle from [`fc_diagrams_new`].
enum FcStatus fc_diagrams_cardinality(const struct FcDiagrams *d, char **out_text);

// Full dump of the classes, their automorphism orders and occupation profiles.
//
// # Safety
// `d` must be a live handle from [`fc_diagrams_new`].
enum FcStatus fc_diagrams_json(const struct FcDiagrams *d, char **out_json);

// # Safety
// `d` must be null or a handle from [`fc_diagrams_new`] not yet freed.
void fc_diagrams_free(struct FcDiagrams *d);

// Cardinality of the action groupoid of a permutation group acting on
// `set_size` points. `images` holds `generator_count` rows of `set_size`
// entries, row `g` listing the image of each point under generator `g`.
//
// # Safety
// `images` must point to `set_size * generator_count` readable values and
// `out_text` must be writable.
enum FcStatus fc_weak_quotient_cardinality(size_t set_size,
                                           const size_t *images,
                                           size_t generator_count,
                                           char **out_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOCKCAT_H */
