#ifndef REGCAT_H
#define REGCAT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum RegcatStatus {
  REGCAT_STATUS_OK = 0,
  REGCAT_STATUS_NULL_ARGUMENT = 1,
  REGCAT_STATUS_INVALID_UTF8 = 2,
  REGCAT_STATUS_PARSE = 3,
  REGCAT_STATUS_NOT_FOUND = 4,
  REGCAT_STATUS_INVALID = 5,
  REGCAT_STATUS_RESOURCE_LIMIT = 6,
  REGCAT_STATUS_PANIC = 7,
} RegcatStatus;

typedef enum RegcatDiagramMode {
  REGCAT_DIAGRAM_MODE_COMMUTATIVE = 0,
  REGCAT_DIAGRAM_MODE_SEMICOMMUTATIVE = 1,
} RegcatDiagramMode;

typedef enum RegcatYbeMode {
  REGCAT_YBE_MODE_CLASSICAL = 0,
  REGCAT_YBE_MODE_REGULAR = 1,
} RegcatYbeMode;

/**
 * A parsed workspace.
 */
typedef struct RegcatWorkspace RegcatWorkspace;

/**
 * Properties of a map. `idempotent` is -1 when the map is not an endomap.
 */
typedef struct RegcatMapClass {
  bool injective;
  bool surjective;
  bool bijective;
  int8_t idempotent;
} RegcatMapClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *regcat_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *regcat_version(void);

/**
 * # Safety
 * `src` must be a nul-terminated string and `out_ws` a valid pointer.
 */
enum RegcatStatus regcat_workspace_parse(const char *src, struct RegcatWorkspace **out_ws);

/**
 * # Safety
 * `ws` must come from [`regcat_workspace_parse`] and not be freed twice.
 */
void regcat_workspace_free(struct RegcatWorkspace *ws);

/**
 * Canonical text of the workspace; free with [`regcat_string_free`].
 *
 * # Safety
 * `ws` must be a live workspace and `out_text` a valid pointer.
 */
enum RegcatStatus regcat_workspace_render(const struct RegcatWorkspace *ws, char **out_text);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void regcat_string_free(char *s);

/**
 * # Safety
 * Pointers must be valid; `map` nul-terminated.
 */
enum RegcatStatus regcat_map_classify(const struct RegcatWorkspace *ws,
                                      const char *map,
                                      struct RegcatMapClass *out_class);

/**
 * Number of inner inverses of a map. Fails with `ResourceLimit` when the
 * count does not fit in 64 bits.
 *
 * # Safety
 * Pointers must be valid; `map` nul-terminated.
 */
enum RegcatStatus regcat_map_inner_inverse_count(const struct RegcatWorkspace *ws,
                                                 const char *map,
                                                 uint64_t *out_count);

/**
 * Whether a diagram is commutative or semicommutative over cycles of
 * length up to `max_len`.
 *
 * # Safety
 * Pointers must be valid; `diagram` nul-terminated.
 */
enum RegcatStatus regcat_diagram_check(const struct RegcatWorkspace *ws,
                                       const char *diagram,
                                       enum RegcatDiagramMode mode,
                                       size_t max_len,
                                       bool *out_holds);

/**
 * Least cycle length at `object` whose obstructor is not the identity, or
 * 0 when there is none up to `max_n`.
 *
 * # Safety
 * Pointers must be valid; strings nul-terminated.
 */
enum RegcatStatus regcat_obstruction_number(const struct RegcatWorkspace *ws,
                                            const char *diagram,
                                            const char *object,
                                            size_t max_n,
                                            size_t *out_n);

/**
 * Number of braidings on `X*X`, `|X| = size`, satisfying the braid
 * equation. In regular mode `all_obstructors` ranges over every idempotent
 * on `X`; otherwise the identity is used. `jobs = 0` uses all cores.
 *
 * # Safety
 * `out_count` must be a valid pointer.
 */
enum RegcatStatus regcat_ybe_count(size_t size,
                                   enum RegcatYbeMode mode,
                                   bool all_obstructors,
                                   bool bijective,
                                   bool symmetric,
                                   size_t jobs,
                                   uint64_t *out_count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REGCAT_H */
