#ifndef KLAIMDB_H
#define KLAIMDB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all entry points.
typedef enum KdbStatus {
  KDB_STATUS_OK = 0,
  KDB_STATUS_NULL_ARGUMENT = 1,
  KDB_STATUS_INVALID_UTF8 = 2,
  KDB_STATUS_PARSE_ERROR = 3,
  KDB_STATUS_ILL_TYPED = 4,
  // A run reached the error net.
  KDB_STATUS_RUNTIME_ERROR = 5,
  // A run stopped at its step limit.
  KDB_STATUS_STEP_LIMIT = 6,
  KDB_STATUS_PANIC = 7,
} KdbStatus;

// A parsed system. Opaque to C.
typedef struct KdbSystem KdbSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `source` (NUL-terminated UTF-8) and stores a new handle in `*out`.
//
// # Safety
// `source` must be a valid C string and `out` a valid pointer.
enum KdbStatus kdb_parse(const char *source, struct KdbSystem **out);

// Type-checks a system. When `diagnostics` is non-null it receives a JSON
// array of `{span, kind, message}` objects (empty when well-typed).
//
// # Safety
// `sys` must come from `kdb_parse`; `diagnostics` may be null.
enum KdbStatus kdb_check(const struct KdbSystem *sys, char **diagnostics);

// Runs a system under the seeded scheduler without type-checking it.
// When `trace` is non-null it receives the JSON-lines trace. Returns
// `Ok` on quiescence, `RuntimeError` or `StepLimit` otherwise.
//
// # Safety
// `sys` must come from `kdb_parse`; `trace` may be null.
enum KdbStatus kdb_run(const struct KdbSystem *sys,
                       uint64_t seed,
                       uintptr_t max_steps,
                       char **trace);

// Pretty-prints a system back to source form.
//
// # Safety
// `sys` must come from `kdb_parse` and `out` must be a valid pointer.
enum KdbStatus kdb_render(const struct KdbSystem *sys, char **out);

// The message of the last failed call on this thread, or null. The
// pointer stays valid until the next call on the same thread.
const char *kdb_last_error(void);

// Releases a handle from `kdb_parse`. Null is ignored.
//
// # Safety
// `sys` must come from `kdb_parse` and not have been freed.
void kdb_system_free(struct KdbSystem *sys);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void kdb_string_free(char *s);

// Library version as a static C string.
const char *kdb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KLAIMDB_H */
