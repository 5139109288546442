#ifndef PBIST_H
#define PBIST_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  PBIST_STATUS_OK = 0,
  PBIST_STATUS_NULL_POINTER = 1,
  PBIST_STATUS_INVALID_CONFIG = 2,
  PBIST_STATUS_UNSORTED_BATCH = 3,
  PBIST_STATUS_BUFFER_TOO_SMALL = 4,
  PBIST_STATUS_THREAD_POOL = 5,
  PBIST_STATUS_PANIC = 6,
} PbistStatus;

/**
 * Opaque tree handle.
 */
typedef struct PbistTree PbistTree;

typedef struct {
  /**
   * Nodes holding at most this many keys are leaves (>= 4).
   */
  size_t leaf_threshold;
  /**
   * A subtree is rebuilt after more than this many times its initial size
   * in modifications (>= 1).
   */
  size_t rebuild_factor;
  /**
   * Interpolation index exponent, in [0.5, 1).
   */
  double index_exponent;
  /**
   * Work below this many elements runs sequentially (>= 1).
   */
  size_t seq_cutoff;
  /**
   * Route by binary search instead of the interpolation index.
   */
  bool rank_routing;
} PbistConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default parameters: leaf threshold 10, rebuild factor 2, exponent 0.75,
 * cutoff 2048, interpolation routing.
 */
PbistConfig pbist_config_default(void);

/**
 * Creates an empty tree. `config` may be null for the defaults.
 *
 * # Safety
 * `config` must be null or valid for reads; `out` must be valid for writes.
 */
PbistStatus pbist_tree_new(const PbistConfig *config, PbistTree **out);

/**
 * Builds a balanced tree over `len` strictly increasing keys.
 *
 * # Safety
 * `config` must be null or valid for reads, `keys` must point to `len`
 * keys (or be null when `len` is 0) and `out` must be valid for writes.
 */
PbistStatus pbist_tree_from_sorted(const PbistConfig *config,
                                   const int64_t *keys,
                                   size_t len,
                                   PbistTree **out);

/**
 * Releases a tree. Null is ignored.
 *
 * # Safety
 * `tree` must be null or a handle from this library not yet freed.
 */
void pbist_tree_free(PbistTree *tree);

/**
 * Runs this tree's operations on a private pool of `workers` threads.
 * Zero returns to the global pool.
 *
 * # Safety
 * `tree` must be a live handle.
 */
PbistStatus pbist_tree_set_workers(PbistTree *tree, size_t workers);

/**
 * Number of keys in the tree; 0 for a null handle.
 *
 * # Safety
 * `tree` must be null or a live handle.
 */
size_t pbist_tree_len(const PbistTree *tree);

/**
 * Scalar membership; false for a null handle.
 *
 * # Safety
 * `tree` must be null or a live handle.
 */
bool pbist_contains(const PbistTree *tree, int64_t key);

/**
 * Writes `out[i] = keys[i] is present` for a strictly increasing batch.
 *
 * # Safety
 * `tree` must be a live handle; `keys` and `out` must each hold `len`
 * elements (or be null when `len` is 0).
 */
PbistStatus pbist_contains_batched(PbistTree *tree, const int64_t *keys, size_t len, bool *out);

/**
 * Inserts a strictly increasing batch. If `changed` is non-null it receives
 * the number of keys that were absent before.
 *
 * # Safety
 * `tree` must be a live handle; `keys` must hold `len` keys (or be null when
 * `len` is 0); `changed` must be null or valid for writes.
 */
PbistStatus pbist_insert_batched(PbistTree *tree, const int64_t *keys, size_t len, size_t *changed);

/**
 * Removes a strictly increasing batch. If `changed` is non-null it receives
 * the number of keys that were present before.
 *
 * # Safety
 * As for [`pbist_insert_batched`].
 */
PbistStatus pbist_remove_batched(PbistTree *tree, const int64_t *keys, size_t len, size_t *changed);

/**
 * Copies the keys in increasing order into `out` (capacity `cap`).
 * `out_len` always receives the tree size; when it exceeds `cap` nothing is
 * copied and `PBIST_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `tree` must be a live handle, `out` must hold `cap` keys (or be null when
 * `cap` is 0) and `out_len` must be valid for writes.
 */
PbistStatus pbist_tree_to_sorted(PbistTree *tree, int64_t *out, size_t cap, size_t *out_len);

/**
 * Sorts and deduplicates `keys[..len]` in place; `out_len` receives the
 * new length.
 *
 * # Safety
 * `keys` must hold `len` writable keys (or be null when `len` is 0) and
 * `out_len` must be valid for writes.
 */
PbistStatus pbist_normalize(int64_t *keys, size_t len, size_t *out_len);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *pbist_status_message(PbistStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PBIST_H */
