#ifndef SPECTRAL_FORGE_H
#define SPECTRAL_FORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgfRule {
  SGF_RULE_TRUNCATE = 0,
  SGF_RULE_LOGISTIC = 1,
  SGF_RULE_SCALE = 2,
} SgfRule;

typedef enum SgfTransformation {
  SGF_TRANSFORMATION_MODULARITY = 0,
  SGF_TRANSFORMATION_ADJACENCY = 1,
} SgfTransformation;

/**
 * Result code of every fallible call.
 */
typedef enum SgfStatus {
  SGF_STATUS_OK = 0,
  SGF_STATUS_NULL_POINTER = 1,
  SGF_STATUS_INVALID_UTF8 = 2,
  SGF_STATUS_PARSE_ERROR = 3,
  SGF_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The input has no edges or the rule's range collapsed.
   */
  SGF_STATUS_DEGENERATE = 5,
  SGF_STATUS_INFEASIBLE = 6,
  /**
   * A panic was caught at the boundary.
   */
  SGF_STATUS_INTERNAL = 7,
} SgfStatus;

/**
 * Opaque graph handle.
 */
typedef struct SgfGraph SgfGraph;

/**
 * Generation settings. `logistic_k` is only read by the logistic rule.
 */
typedef struct SgfParams {
  double alpha;
  enum SgfRule rule;
  double logistic_k;
  enum SgfTransformation transformation;
  uint64_t seed;
} SgfParams;

/**
 * Output-versus-input comparison. Undefined values are NaN.
 */
typedef struct SgfMetrics {
  double modularity_ratio;
  double partition_number_ratio;
  double clustering_ratio;
  double degree_correlation;
} SgfMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sgf_last_error_message(void);

/**
 * Default generation settings: alpha 0.9, truncate, k = 6, modularity, seed 0.
 */
struct SgfParams sgf_params_default(void);

/**
 * Parses an edge list (`#nodes N` directive optional, one `i j` pair per line).
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum SgfStatus sgf_graph_from_edge_list(const char *text, struct SgfGraph **out);

/**
 * Builds a graph on `n` nodes from `edge_count` pairs stored flat in `edges`
 * (`edges[2k]`, `edges[2k + 1]`). Duplicate pairs are ignored.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (or be NULL when
 * `edge_count` is 0) and `out` must be writable.
 */
enum SgfStatus sgf_graph_from_edges(size_t n,
                                    const size_t *edges,
                                    size_t edge_count,
                                    struct SgfGraph **out);

/**
 * Releases a graph. NULL is ignored.
 *
 * # Safety
 * `graph` must come from this library and not be used afterwards.
 */
void sgf_graph_free(struct SgfGraph *graph);

/**
 * Node count, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t sgf_graph_node_count(const struct SgfGraph *graph);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `graph` must be NULL or a live handle.
 */
size_t sgf_graph_edge_count(const struct SgfGraph *graph);

/**
 * Copies the edges `i < j` in lexicographic order into `buffer` as flat
 * pairs. `capacity` counts pairs; `written` receives the pairs copied.
 *
 * # Safety
 * `buffer` must hold `2 * capacity` writable values; `written` must be writable.
 */
enum SgfStatus sgf_graph_edges(const struct SgfGraph *graph,
                               size_t *buffer,
                               size_t capacity,
                               size_t *written);

/**
 * Serializes a graph as an edge list. Release the string with [`sgf_string_free`].
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
enum SgfStatus sgf_graph_to_edge_list(const struct SgfGraph *graph, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void sgf_string_free(char *s);

/**
 * Draws one synthetic graph from `input`.
 *
 * # Safety
 * `input` and `params` must be valid; `out` writable.
 */
enum SgfStatus sgf_generate(const struct SgfGraph *input,
                            const struct SgfParams *params,
                            struct SgfGraph **out);

/**
 * Normalized entropy of the edge-probability matrix `generate` samples from.
 *
 * # Safety
 * `input` and `params` must be valid; `out` writable.
 */
enum SgfStatus sgf_expected_entropy(const struct SgfGraph *input,
                                    const struct SgfParams *params,
                                    double *out);

/**
 * Louvain modularity maximum and its community count.
 *
 * # Safety
 * `graph` must be a live handle; `q` and `communities` writable.
 */
enum SgfStatus sgf_modularity_max(const struct SgfGraph *graph,
                                  uint64_t seed,
                                  double *q,
                                  size_t *communities);

/**
 * Compares `output` against `input`, aligned by node index.
 *
 * # Safety
 * Both handles must be live; `out` writable.
 */
enum SgfStatus sgf_compare(const struct SgfGraph *input,
                           const struct SgfGraph *output,
                           uint64_t seed,
                           struct SgfMetrics *out);

/**
 * Fraction of non-seed nodes the distance-vector attack maps correctly.
 *
 * # Safety
 * Both handles must be live; `rate` writable.
 */
enum SgfStatus sgf_dv_attack(const struct SgfGraph *original,
                             const struct SgfGraph *anonymized,
                             double seed_fraction,
                             uint64_t seed,
                             double *rate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_FORGE_H */
