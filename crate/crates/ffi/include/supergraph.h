#ifndef SUPERGRAPH_H
#define SUPERGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  // A required pointer argument was null.
  SG_STATUS_NULL_ARGUMENT = 1,
  // A stored invariant does not hold (audit failure, corrupt store).
  SG_STATUS_INVARIANT = 2,
  // Malformed input or parameters.
  SG_STATUS_BAD_INPUT = 3,
  SG_STATUS_IO = 4,
  // Unknown tree node or graph node id.
  SG_STATUS_NOT_FOUND = 5,
  // Same, nested or otherwise unusable pair for connectivity.
  SG_STATUS_INVALID_PAIR = 6,
  // A string argument was not UTF-8.
  SG_STATUS_INVALID_UTF8 = 7,
  // The library panicked; the handle may be unusable.
  SG_STATUS_PANIC = 8,
} SgStatus;

// Opaque handle to an opened store.
typedef struct SgTree SgTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library from the same thread.
const char *sg_last_error(void);

// Library version, static storage.
const char *sg_version(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void sg_string_free(char *s);

// Partition the edge list at `input` (labels optional), build, fill, save and
// audit a store in `out_dir`. `out_report_json` may be null.
//
// # Safety
// String arguments must be null or nul-terminated; `out_report_json` must be
// null or writable.
enum SgStatus sg_build(const char *input,
                       const char *labels,
                       size_t k,
                       size_t levels,
                       double epsilon,
                       uint64_t seed,
                       const char *out_dir,
                       char **out_report_json);

// Re-scan a store's files. Returns `SG_STATUS_INVARIANT` when a check fails;
// the report is written either way.
//
// # Safety
// `store` must be nul-terminated; `out_json` must be writable.
enum SgStatus sg_audit(const char *store, char **out_json);

// Open the store in `store` keeping at most `cache_leaves` leaves loaded.
//
// # Safety
// `store` must be nul-terminated; `out_tree` must be writable.
enum SgStatus sg_tree_open(const char *store, size_t cache_leaves, struct SgTree **out_tree);

// Close a handle. Null is ignored.
//
// # Safety
// `tree` must come from `sg_tree_open` and not have been freed.
void sg_tree_free(struct SgTree *tree);

// Tree overview: root, fanout, levels and one summary per node.
//
// # Safety
// `tree` must be a live handle; `out_json` must be writable.
enum SgStatus sg_tree_json(const struct SgTree *tree, char **out_json);

// Graph nodes under tree node `id`.
//
// # Safety
// `tree` must be a live handle; `out_json` must be writable.
enum SgStatus sg_closure_json(const struct SgTree *tree, uint32_t id, char **out_json);

// Edges between the closures of tree nodes `a` and `b`.
//
// # Safety
// `tree` must be a live handle; `out_json` must be writable.
enum SgStatus sg_connectivity_json(const struct SgTree *tree,
                                   uint32_t a,
                                   uint32_t b,
                                   char **out_json);

// Number of edges between the closures of `a` and `b`.
//
// # Safety
// `tree` must be a live handle; `out_count` must be writable.
enum SgStatus sg_connectivity_count(const struct SgTree *tree,
                                    uint32_t a,
                                    uint32_t b,
                                    uint64_t *out_count);

// Neighbors of graph node `node` outside its leaf.
//
// # Safety
// `tree` must be a live handle; `out_json` must be writable.
enum SgStatus sg_external_json(const struct SgTree *tree, uint64_t node, char **out_json);

// Case-insensitive label substring search.
//
// # Safety
// `tree` must be a live handle; `label` nul-terminated; `out_json` writable.
enum SgStatus sg_search_json(const struct SgTree *tree, const char *label, char **out_json);

// Load leaf `id` into the cache.
//
// # Safety
// `tree` must be a live handle.
enum SgStatus sg_leaf_expand(const struct SgTree *tree, uint32_t id);

// Drop leaf `id` from the cache.
//
// # Safety
// `tree` must be a live handle.
enum SgStatus sg_leaf_collapse(const struct SgTree *tree, uint32_t id);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERGRAPH_H */
