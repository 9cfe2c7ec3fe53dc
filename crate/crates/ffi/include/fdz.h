#ifndef FDZ_H
#define FDZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FdzStatus {
  FDZ_STATUS_OK = 0,
  // A required pointer argument was null.
  FDZ_STATUS_NULL = 1,
  FDZ_STATUS_PARSE = 2,
  FDZ_STATUS_INVALID_RING = 3,
  FDZ_STATUS_INTERNAL = 4,
  // Input text was not UTF-8.
  FDZ_STATUS_UTF8 = 5,
  // An argument was out of range.
  FDZ_STATUS_ARGUMENT = 6,
} FdzStatus;

// Opaque ring handle.
typedef struct FdzRing FdzRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse ring-file text into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum FdzStatus fdz_ring_parse(const char *text, struct FdzRing **out);

// Release a handle; null is ignored.
//
// # Safety
// `ring` must come from this library and not be used afterwards.
void fdz_ring_free(struct FdzRing *ring);

// Number of additive generators.
//
// # Safety
// `ring` must be a live handle and `out` a valid pointer.
enum FdzStatus fdz_ring_rank(const struct FdzRing *ring, uintptr_t *out);

// Canonical ring-file text.
//
// # Safety
// `ring` must be a live handle and `out` a valid pointer.
enum FdzStatus fdz_ring_serialize(const struct FdzRing *ring, char **out);

// The quotient `A/nA` as a new handle; `n` must be positive.
//
// # Safety
// `ring` must be a live handle and `out` a valid pointer.
enum FdzStatus fdz_reduce_mod(const struct FdzRing *ring, uint64_t n, struct FdzRing **out);

// Analysis report as JSON.
//
// # Safety
// `ring` must be a live handle and `out` a valid pointer.
enum FdzStatus fdz_analyze_json(const struct FdzRing *ring, char **out);

// Classification report as JSON.
//
// # Safety
// `ring` must be a live handle and `out` a valid pointer.
enum FdzStatus fdz_classify_json(const struct FdzRing *ring, uint64_t seed, char **out);

// Equivalence report for two rings as JSON; `bound` 0 selects the default.
//
// # Safety
// `a` and `b` must be live handles and `out` a valid pointer.
enum FdzStatus fdz_eqcheck_json(const struct FdzRing *a,
                                const struct FdzRing *b,
                                uint64_t bound,
                                uint64_t seed,
                                char **out);

// Release a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void fdz_string_free(char *s);

// Message for the last failure on this thread, or an empty string. The
// pointer stays valid until the next failing call on the same thread.
const char *fdz_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDZ_H */
