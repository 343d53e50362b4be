#ifndef RECFAIR_H
#define RECFAIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum RfStatus {
  RF_STATUS_OK = 0,
  // A required pointer argument was NULL.
  RF_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  RF_STATUS_INVALID_UTF8 = 2,
  // An argument or input failed validation.
  RF_STATUS_INVALID_ARGUMENT = 3,
  // Input text could not be parsed.
  RF_STATUS_PARSE = 4,
  // The score cannot be normalized for this shape.
  RF_STATUS_DEGENERATE = 5,
  // The score is undefined for this input.
  RF_STATUS_UNDEFINED = 6,
  // A file could not be read.
  RF_STATUS_IO = 7,
  // An internal error was caught at the boundary.
  RF_STATUS_PANIC = 8,
} RfStatus;

// Variant selector for measure calls.
typedef enum RfVariant {
  RF_VARIANT_ORIGINAL = 0,
  RF_VARIANT_DEFINED = 1,
  RF_VARIANT_CORRECTED = 2,
} RfVariant;

// An item catalog.
typedef struct RfCatalog RfCatalog;

// A frontier for one (relevance, fairness) measure pair.
typedef struct RfFrontier RfFrontier;

// Interaction histories used to exclude already consumed items.
typedef struct RfInteractions RfInteractions;

// Binary relevance judgments.
typedef struct RfQrels RfQrels;

// Ranked lists, one per user.
typedef struct RfRun RfRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last failure on this thread, or NULL if none occurred.
const char *rf_last_error(void);

// Library version as a static NUL-terminated string.
const char *rf_version(void);

// Catalog of `n` synthetic items with zero-padded ids.
enum RfStatus rf_catalog_with_size(size_t n, struct RfCatalog **out);

// Catalog parsed from one item id per line.
enum RfStatus rf_catalog_from_text(const char *text, struct RfCatalog **out);

enum RfStatus rf_catalog_len(const struct RfCatalog *catalog, size_t *out_len);

void rf_catalog_free(struct RfCatalog *catalog);

// Run parsed from `user item rank [score]` rows.
enum RfStatus rf_run_from_text(const char *text,
                               const struct RfCatalog *catalog,
                               struct RfRun **out);

// Run from `m` lists of catalog indices laid end to end in `items`, with
// `lengths[u]` entries for user `u`. Users get synthetic ids.
enum RfStatus rf_run_from_lists(const size_t *items,
                                const size_t *lengths,
                                size_t m,
                                struct RfRun **out);

enum RfStatus rf_run_users(const struct RfRun *run, size_t *out_m);

void rf_run_free(struct RfRun *run);

// Judgments parsed from `user item grade` rows; grades above 0 are relevant.
enum RfStatus rf_qrels_from_text(const char *text,
                                 const struct RfCatalog *catalog,
                                 struct RfQrels **out);

void rf_qrels_free(struct RfQrels *qrels);

// Histories parsed from `user item` rows.
enum RfStatus rf_interactions_from_text(const char *text,
                                        const struct RfCatalog *catalog,
                                        struct RfInteractions **out);

void rf_interactions_free(struct RfInteractions *interactions);

// Exposure measure (`Jain`, `QF`, `Ent`, `Gini` or `FSat`) of the run's top `k`.
enum RfStatus rf_exposure_measure(const char *measure,
                                  const struct RfRun *run,
                                  const struct RfCatalog *catalog,
                                  size_t k,
                                  enum RfVariant variant,
                                  double *out_value);

// Mean effectiveness (`HR`, `MRR`, `P`, `R`, `MAP` or `NDCG`) at `k` over
// judged users with at least one relevant item.
enum RfStatus rf_effectiveness(const char *measure,
                               const struct RfRun *run,
                               const struct RfQrels *qrels,
                               size_t k,
                               double *out_value);

// Closed-form most-unfair and most-fair values of an exposure measure.
enum RfStatus rf_exposure_bounds(const char *measure,
                                 size_t k,
                                 size_t m,
                                 size_t n,
                                 double *out_most_unfair,
                                 double *out_most_fair);

// Kendall's tau-b between two score vectors over the same `len` models
// (higher is better for both). `out_p_value` may be NULL.
enum RfStatus rf_kendall_tau_b(const double *a,
                               const double *b,
                               size_t len,
                               double *out_tau,
                               double *out_p_value);

// Benjamini-Hochberg step-up flags (1 = significant) for `len` p-values.
enum RfStatus rf_bh_correct(const double *p_values, size_t len, double alpha, uint8_t *out_flags);

// Frontier generated from the judgments by moving exposure from over-exposed
// to unexposed items. `points == 0` records every step; otherwise about
// `points` checkpoints are estimated. `interactions` may be NULL.
enum RfStatus rf_frontier_generate(const struct RfQrels *qrels,
                                   const struct RfInteractions *interactions,
                                   const struct RfCatalog *catalog,
                                   size_t k,
                                   const char *rel_measure,
                                   const char *fair_measure,
                                   enum RfVariant variant,
                                   size_t points,
                                   struct RfFrontier **out);

enum RfStatus rf_frontier_len(const struct RfFrontier *frontier, size_t *out_len);

// Point `index` of the frontier, in order of descending relevance.
enum RfStatus rf_frontier_point(const struct RfFrontier *frontier,
                                size_t index,
                                double *out_rel,
                                double *out_fair);

// Reference point at relative arc length `alpha` along the frontier.
enum RfStatus rf_frontier_reference(const struct RfFrontier *frontier,
                                    double alpha,
                                    double *out_rel,
                                    double *out_fair);

// Distance from a model run's (relevance, fairness) point to the frontier's
// reference point at `alpha`, on the frontier's own measure pair.
enum RfStatus rf_frontier_distance(const struct RfFrontier *frontier,
                                   const struct RfRun *run,
                                   const struct RfQrels *qrels,
                                   const struct RfCatalog *catalog,
                                   size_t k,
                                   enum RfVariant variant,
                                   double alpha,
                                   double *out_distance);

void rf_frontier_free(struct RfFrontier *frontier);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RECFAIR_H */
