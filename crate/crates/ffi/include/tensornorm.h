#ifndef TENSORNORM_H
#define TENSORNORM_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TnStatus {
  TN_STATUS_OK = 0,
  TN_STATUS_NULL_POINTER = 1,
  TN_STATUS_INVALID_ARGUMENT = 2,
  TN_STATUS_INVALID_DIMENSION = 3,
  TN_STATUS_DIMENSION_CAP = 4,
  TN_STATUS_INVALID_STATE = 5,
  TN_STATUS_NUMERICAL_INTEGRITY = 6,
  TN_STATUS_PARSE = 7,
  TN_STATUS_IO = 8,
  TN_STATUS_PANIC = 9,
} TnStatus;

/**
 * Opaque table of squared full-body norms.
 */
typedef struct TnNormTable TnNormTable;

/**
 * Opaque density matrix handle.
 */
typedef struct TnState TnState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tn_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string obtained from this library, freed once.
 */
void tn_string_free(char *s);

/**
 * # Safety
 * `out_state` must be a valid pointer.
 */
enum TnStatus tn_state_ghz(size_t n, size_t d, struct TnState **out_state);

/**
 * # Safety
 * `out_state` must be a valid pointer.
 */
enum TnStatus tn_state_w(size_t n, struct TnState **out_state);

/**
 * Four-qutrit absolutely maximally entangled state.
 *
 * # Safety
 * `out_state` must be a valid pointer.
 */
enum TnStatus tn_state_ame43(struct TnState **out_state);

/**
 * Graph state from an edge list such as `"1-2,2-3"`. `n = 0` infers the
 * vertex count from the largest label.
 *
 * # Safety
 * `edges` must be a NUL-terminated string and `out_state` a valid pointer.
 */
enum TnStatus tn_state_graph(const char *edges, size_t n, struct TnState **out_state);

/**
 * State from StateSpec JSON. Relative matrix-file paths resolve against
 * `base_dir`, which may be NULL.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `base_dir` NULL or NUL-terminated,
 * and `out_state` a valid pointer.
 */
enum TnStatus tn_state_from_spec_json(const char *json,
                                      const char *base_dir,
                                      struct TnState **out_state);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out_state` a valid pointer.
 */
enum TnStatus tn_state_from_matrix_file(const char *path, struct TnState **out_state);

/**
 * New state `p·ρ + (1-p)·I/d^n`; `state` is left untouched.
 *
 * # Safety
 * `state` must be a live handle and `out_state` a valid pointer.
 */
enum TnStatus tn_state_mix(const struct TnState *state, double p, struct TnState **out_state);

/**
 * # Safety
 * `state` must be NULL or a handle from this library, freed once.
 */
void tn_state_free(struct TnState *state);

/**
 * # Safety
 * `state` must be a live handle; `out_n` and `out_d` valid pointers.
 */
enum TnStatus tn_state_shape(const struct TnState *state, size_t *out_n, size_t *out_d);

/**
 * # Safety
 * `state` must be a live handle and `out_value` a valid pointer.
 */
enum TnStatus tn_state_purity(const struct TnState *state, double *out_value);

/**
 * Squared full-body norms of every nonempty subset.
 *
 * # Safety
 * `state` must be a live handle and `out_table` a valid pointer.
 */
enum TnStatus tn_norm_table_new(const struct TnState *state, struct TnNormTable **out_table);

/**
 * # Safety
 * `table` must be NULL or a handle from this library, freed once.
 */
void tn_norm_table_free(struct TnNormTable *table);

/**
 * `‖τ_α‖²` for the subset with bitmask `parties`.
 *
 * # Safety
 * `table` must be a live handle and `out_value` a valid pointer.
 */
enum TnStatus tn_norm_table_get(const struct TnNormTable *table,
                                uint32_t parties,
                                double *out_value);

/**
 * `C_x`, the sum of squared full-body norms over subsets of size at least `x`.
 *
 * # Safety
 * `table` must be a live handle and `out_value` a valid pointer.
 */
enum TnStatus tn_norm_table_cx(const struct TnNormTable *table, size_t x, double *out_value);

/**
 * JSON form of the table; release with [`tn_string_free`].
 *
 * # Safety
 * `table` must be a live handle and `out_json` a valid pointer.
 */
enum TnStatus tn_norm_table_to_json(const struct TnNormTable *table, char **out_json);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_purity_ksep(size_t n, size_t d, size_t k, double *out_value);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_improved_ksep(size_t n, size_t d, size_t k, double *out_value);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_fullbody_single(size_t n, size_t d, double *out_value);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_cutoff_partition(size_t n, size_t d, size_t x, size_t k1, double *out_value);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_cutoff_bisep_max(size_t n, size_t d, size_t x, double *out_value);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_cutoff_half(size_t n, size_t d, double *out_value);

/**
 * # Safety
 * `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_cutoff_nminus1(size_t n, size_t d, double *out_value);

/**
 * # Safety
 * `ranks` must point to `n` values and `out_value` must be a valid pointer.
 */
enum TnStatus tn_bound_dim_vector(size_t n, size_t d, const size_t *ranks, double *out_value);

/**
 * Detection report JSON for `state`. `criteria` is a `;`-separated list such
 * as `"purity-ksep:2;cutoff-bisep-max:3"`, or NULL for the default set.
 *
 * # Safety
 * `state` must be a live handle, `criteria` NULL or NUL-terminated, and
 * `out_json` a valid pointer. Release the result with [`tn_string_free`].
 */
enum TnStatus tn_evaluate_json(const struct TnState *state, const char *criteria, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TENSORNORM_H */
