#ifndef ZPARTIAL_H
#define ZPARTIAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ZP_OK 0

#define ZP_NULL 1

#define ZP_INPUT 2

#define ZP_CAP 3

#define ZP_INTERNAL 4

#define ZP_PANIC 5

#define ZP_ABELIAN 0

#define ZP_PURE 1

/**
 * A finite ℤ/m-module.
 */
typedef struct ZpModule ZpModule;

/**
 * A module homomorphism.
 */
typedef struct ZpMorphism ZpMorphism;

/**
 * A validated workspace document.
 */
typedef struct ZpWorkspace ZpWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the library.
 */
const char *zp_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void zp_string_free(char *s);

/**
 * ⊕ ℤ/factors[i] over ℤ/modulus; factors must form a divisibility chain.
 *
 * # Safety
 * `factors` must point to `n` integers (or be null when `n` is 0).
 */
int32_t zp_module_new(int64_t modulus, const int64_t *factors, size_t n, struct ZpModule **result);

/**
 * # Safety
 * `m` must be null or a live handle from this library.
 */
void zp_module_free(struct ZpModule *m);

/**
 * Number of cyclic factors.
 *
 * # Safety
 * `m` must be a live handle.
 */
int32_t zp_module_ngens(const struct ZpModule *m, size_t *result);

/**
 * Order of the module, saturating at `u64::MAX`.
 *
 * # Safety
 * `m` must be a live handle.
 */
int32_t zp_module_order(const struct ZpModule *m, uint64_t *result);

/**
 * Writes up to `cap` invariant factors into `buf`; `len` receives the full count.
 *
 * # Safety
 * `buf` must have room for `cap` integers.
 */
int32_t zp_module_factors(const struct ZpModule *m, int64_t *buf, size_t cap, size_t *len);

/**
 * Map given by a row-major matrix: row i is the image of generator i of `source`.
 *
 * # Safety
 * `entries` must hold ngens(source) × ngens(target) integers.
 */
int32_t zp_morphism_new(const struct ZpModule *source,
                        const struct ZpModule *target,
                        const int64_t *entries,
                        struct ZpMorphism **result);

/**
 * # Safety
 * `f` must be null or a live handle from this library.
 */
void zp_morphism_free(struct ZpMorphism *f);

/**
 * New handle for the target module of `f`.
 *
 * # Safety
 * `f` must be a live handle.
 */
int32_t zp_morphism_target(const struct ZpMorphism *f, struct ZpModule **result);

/**
 * Copies the matrix (row-major) into `buf` when it has room; `len` receives its size.
 *
 * # Safety
 * `buf` must have room for `cap` integers.
 */
int32_t zp_morphism_matrix(const struct ZpMorphism *f, int64_t *buf, size_t cap, size_t *len);

/**
 * Partial and partial-iso verdicts for `f` defined on the subobject `u`.
 *
 * # Safety
 * `u` and `f` must be live handles; outputs must be writable.
 */
int32_t zp_partial_check(const struct ZpMorphism *u,
                         const struct ZpMorphism *f,
                         int32_t structure_code,
                         bool *is_partial,
                         bool *is_partial_iso);

/**
 * Whether the monomorphism `i` is pure.
 *
 * # Safety
 * `i` must be a live handle.
 */
int32_t zp_is_pure(const struct ZpMorphism *i, bool *result);

/**
 * The injective hull M → E as a new morphism handle.
 *
 * # Safety
 * `m` must be a live handle.
 */
int32_t zp_injective_hull(const struct ZpModule *m, struct ZpMorphism **result);

/**
 * Parses and validates a workspace document.
 *
 * # Safety
 * `json` must be a NUL-terminated string.
 */
int32_t zp_workspace_load(const char *json, struct ZpWorkspace **result);

/**
 * # Safety
 * `ws` must be null or a live handle from this library.
 */
void zp_workspace_free(struct ZpWorkspace *ws);

/**
 * Canonical JSON of the workspace; release with `zp_string_free`.
 *
 * # Safety
 * `ws` must be a live handle.
 */
int32_t zp_workspace_to_json(const struct ZpWorkspace *ws, char **result);

/**
 * A named morphism of the workspace as a new handle.
 *
 * # Safety
 * `ws` must be a live handle and `name` a NUL-terminated string.
 */
int32_t zp_workspace_morphism(const struct ZpWorkspace *ws,
                              const char *name,
                              struct ZpMorphism **result);

/**
 * Runs one command line of the `zpartial` tool. `json` receives the printed
 * document (release with `zp_string_free`), `exit_code` the tool's exit code.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings.
 */
int32_t zp_cli_run(const char *const *argv, size_t argc, char **json, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZPARTIAL_H */
