/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GVKS_H
#define GVKS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GvksStatus {
  GVKS_STATUS_OK = 0,
  GVKS_STATUS_NULL_POINTER = 1,
  GVKS_STATUS_INVALID_UTF8 = 2,
  GVKS_STATUS_PARSE_ERROR = 3,
  GVKS_STATUS_INVALID_INPUT = 4,
  GVKS_STATUS_CONTRACT = 5,
  GVKS_STATUS_BUDGET = 6,
  GVKS_STATUS_PANIC = 7,
} GvksStatus;

/**
 * Opaque instance handle.
 */
typedef struct GvksInstance GvksInstance;

/**
 * Opaque packing handle.
 */
typedef struct GvksPacking GvksPacking;

/**
 * Solver parameters. Zero in `config_budget` or `x_max` means "no cap".
 */
typedef struct GvksParams {
  double eps;
  double eps_struct;
  double eps_cont;
  double eps_prime;
  size_t c_max;
  size_t sum_depth;
  size_t config_budget;
  size_t x_max;
} GvksParams;

/**
 * One placed item. `id` stays valid while the owning packing is alive.
 */
typedef struct GvksPlacement {
  const char *id;
  double x;
  double y;
  bool rotated;
} GvksPlacement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *gvks_last_error(void);

/**
 * Parses an instance from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum GvksStatus gvks_instance_from_json(const char *json, struct GvksInstance **out);

/**
 * # Safety
 * `instance` must come from [`gvks_instance_from_json`] and not be freed twice.
 */
void gvks_instance_free(struct GvksInstance *instance);

/**
 * Number of items; 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
size_t gvks_instance_len(const struct GvksInstance *instance);

struct GvksParams gvks_params_default(void);

/**
 * Runs the approximation solver. A null `params` means defaults.
 *
 * # Safety
 * `instance` must be a live handle, `params` null or readable, `out` writable.
 */
enum GvksStatus gvks_solve(const struct GvksInstance *instance,
                           const struct GvksParams *params,
                           struct GvksPacking **out);

/**
 * Solves exactly; refuses instances beyond the oracle's default budget.
 *
 * # Safety
 * `instance` must be a live handle and `out` writable.
 */
enum GvksStatus gvks_oracle_solve(const struct GvksInstance *instance, struct GvksPacking **out);

/**
 * Parses a packing from JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum GvksStatus gvks_packing_from_json(const char *json, struct GvksPacking **out);

/**
 * # Safety
 * `packing` must come from this library and not be freed twice.
 */
void gvks_packing_free(struct GvksPacking *packing);

/**
 * Reported profit; 0 for a null handle.
 *
 * # Safety
 * `packing` must be null or a live handle.
 */
double gvks_packing_profit(const struct GvksPacking *packing);

/**
 * Number of placements; 0 for a null handle.
 *
 * # Safety
 * `packing` must be null or a live handle.
 */
size_t gvks_packing_len(const struct GvksPacking *packing);

/**
 * Copies placement `index` into `out`.
 *
 * # Safety
 * `packing` must be a live handle and `out` writable.
 */
enum GvksStatus gvks_packing_get(const struct GvksPacking *packing,
                                 size_t index,
                                 struct GvksPlacement *out);

/**
 * Serializes a packing; release the string with [`gvks_string_free`].
 *
 * # Safety
 * `packing` must be a live handle and `out` writable.
 */
enum GvksStatus gvks_packing_to_json(const struct GvksPacking *packing, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void gvks_string_free(char *s);

/**
 * Counts the violations of `packing` against `instance` into `violations`;
 * their descriptions, one per line, go to [`gvks_last_error`].
 *
 * # Safety
 * Both handles must be live and `violations` writable.
 */
enum GvksStatus gvks_validate(const struct GvksInstance *instance,
                              const struct GvksPacking *packing,
                              size_t *violations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GVKS_H */
