/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef SIMPAIR_H
#define SIMPAIR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Decision procedure for [`sp_orbit_eq`].
typedef enum SpMethod {
  SP_METHOD_CANONICAL = 0,
  SP_METHOD_RANK = 1,
  SP_METHOD_BRUTE = 2,
} SpMethod;

// Result of a call.
typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_INPUT_ERROR = 2,
  SP_STATUS_VERIFICATION_ERROR = 3,
  SP_STATUS_NULL_POINTER = 4,
  SP_STATUS_PANIC = 5,
} SpStatus;

// A validated pair of square matrices over one field.
typedef struct SpPair SpPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a pair from NUL-terminated JSON. `default_field` may be null or a
// field name such as `"Q"` or `"F7"`, used when the JSON names none.
//
// # Safety
// `json` and `default_field` must be null or valid C strings; `out` must be
// null or writable.
enum SpStatus sp_pair_from_json(const char *json, const char *default_field, struct SpPair **out);

// Release a pair. Null is ignored.
//
// # Safety
// `pair` must be null or a handle from [`sp_pair_from_json`] not yet freed.
void sp_pair_free(struct SpPair *pair);

// Matrix size of a pair, or 0 for null.
//
// # Safety
// `pair` must be null or a live handle.
uintptr_t sp_pair_size(const struct SpPair *pair);

// The pair as JSON.
//
// # Safety
// `pair` must be null or a live handle; `out` must be null or writable.
enum SpStatus sp_pair_to_json(const struct SpPair *pair, char **out);

// Canonical form and conjugating matrix as JSON.
//
// # Safety
// `pair` must be null or a live handle; `out` must be null or writable.
enum SpStatus sp_canonicalize_json(const struct SpPair *pair, char **out);

// Decide whether `a` and `b` are simultaneously similar. Writes 1 or 0 to
// `equal`. `max_gl_order` bounds the brute-force method; 0 selects the
// library default.
//
// # Safety
// `a`, `b` must be null or live handles; `equal` must be null or writable.
enum SpStatus sp_orbit_eq(const struct SpPair *a,
                          const struct SpPair *b,
                          enum SpMethod method,
                          uint64_t max_gl_order,
                          int *equal);

// Separation report from the rank probes, as JSON.
//
// # Safety
// `a`, `b` must be null or live handles; `out` must be null or writable.
enum SpStatus sp_separation_report_json(const struct SpPair *a, const struct SpPair *b, char **out);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void sp_string_free(char *s);

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *sp_last_error_message(void);

// Library version as a static string.
const char *sp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPAIR_H */
