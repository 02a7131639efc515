#ifndef SELFSIM_H
#define SELFSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SsStatus {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_UTF8 = 2,
  SS_STATUS_PARSE_ERROR = 3,
  SS_STATUS_EVAL_ERROR = 4,
  /**
   * The map is undefined at the requested input.
   */
  SS_STATUS_UNDEFINED = 5,
  SS_STATUS_PANIC = 6,
} SsStatus;

/**
 * A parsed diagram file.
 */
typedef struct SsDiagram SsDiagram;

/**
 * Bindings from atom names to maps.
 */
typedef struct SsEnv SsEnv;

/**
 * A piecewise-affine partial bijection of the naturals.
 */
typedef struct SsMap SsMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call on this thread.
 */
const char *ss_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void ss_string_free(char *s);

/**
 * Parses a map literal such as `{ 0/2 -> 1/2, 1/2 -> 0/2 }`.
 *
 * # Safety
 * `literal` must be a NUL-terminated string; `out` must be writable.
 */
enum SsStatus ss_map_parse(const char *literal, struct SsMap **out);

struct SsMap *ss_map_identity(void);

struct SsMap *ss_map_alpha(void);

struct SsMap *ss_map_sigma(void);

/**
 * Writes `map(n)`; returns `Undefined` outside the domain.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum SsStatus ss_map_apply(const struct SsMap *map, uint64_t n, uint64_t *out);

/**
 * `g` after `f`.
 *
 * # Safety
 * `g` and `f` must be live handles; `out` must be writable.
 */
enum SsStatus ss_map_compose(const struct SsMap *g, const struct SsMap *f, struct SsMap **out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum SsStatus ss_map_invert(const struct SsMap *f, struct SsMap **out);

/**
 * `f` on evens, `g` on odds.
 *
 * # Safety
 * `f` and `g` must be live handles; `out` must be writable.
 */
enum SsStatus ss_map_interleave(const struct SsMap *f, const struct SsMap *g, struct SsMap **out);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum SsStatus ss_map_equal(const struct SsMap *a, const struct SsMap *b, bool *out);

/**
 * Canonical literal; release with `ss_string_free`. Null on a null handle.
 *
 * # Safety
 * `map` must be a live handle or null.
 */
char *ss_map_to_string(const struct SsMap *map);

/**
 * # Safety
 * `map` must come from this library and not be used afterwards, or be null.
 */
void ss_map_free(struct SsMap *map);

struct SsEnv *ss_env_new(void);

/**
 * Binds `name` to a copy of `map`, replacing any earlier binding.
 *
 * # Safety
 * `env` and `map` must be live handles; `name` NUL-terminated.
 */
enum SsStatus ss_env_bind(struct SsEnv *env, const char *name, const struct SsMap *map);

/**
 * # Safety
 * `env` must come from this library and not be used afterwards, or be null.
 */
void ss_env_free(struct SsEnv *env);

/**
 * Evaluates a monoid term such as `alpha . one # f`. `env` may be null.
 *
 * # Safety
 * `term` NUL-terminated; `env` live or null; `out` writable.
 */
enum SsStatus ss_eval_term(const char *term, const struct SsEnv *env, struct SsMap **out);

/**
 * Parses the text of a diagram file.
 *
 * # Safety
 * `source` NUL-terminated; `out` writable.
 */
enum SsStatus ss_diagram_parse(const char *source, struct SsDiagram **out);

/**
 * Runs every check of the diagram. Writes the verdict lines (release with
 * `ss_string_free`) and the exit code: 0 all guaranteed, 2 some refuted,
 * 1 otherwise. `env` may be null.
 *
 * # Safety
 * `diagram` live; `env` live or null; `report` and `exit_code` writable.
 */
enum SsStatus ss_diagram_check(const struct SsDiagram *diagram,
                               const struct SsEnv *env,
                               uint64_t bound,
                               char **report,
                               int32_t *exit_code);

/**
 * # Safety
 * `diagram` must come from this library and not be used afterwards, or be null.
 */
void ss_diagram_free(struct SsDiagram *diagram);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SELFSIM_H */
