/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef FITLAND_H
#define FITLAND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum FlStatus {
  FL_STATUS_OK = 0,
  // A required pointer argument was null.
  FL_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  FL_STATUS_INVALID_UTF8 = 2,
  // An option or parameter was out of range or malformed.
  FL_STATUS_INVALID_ARGUMENT = 3,
  // The input data was rejected (ingestion, degenerate data, bad file).
  FL_STATUS_DATA_ERROR = 4,
  // A file could not be read or written.
  FL_STATUS_IO_ERROR = 5,
  // An internal panic was caught at the boundary.
  FL_STATUS_PANIC = 6,
} FlStatus;

// Adaptive walk rule for `fl_run_de`.
typedef enum FlWalkMethod {
  FL_WALK_METHOD_GREEDY = 0,
  FL_WALK_METHOD_STOCHASTIC = 1,
} FlWalkMethod;

// Opaque handle to an immutable landscape.
typedef struct FlLandscape FlLandscape;

// Analysis options. Start from `fl_analysis_options_default` and override
// fields as needed. NaN for `eps_tol` or `sigma` and 0 for `walk_length`
// select the data-driven defaults.
typedef struct FlAnalysisOptions {
  // Comma-separated feature names, or null for all features.
  const char *features;
  double eps_tol;
  double sigma;
  size_t walks;
  size_t walk_length;
  uint64_t seed;
  size_t max_fit_nodes;
  size_t max_optima;
} FlAnalysisOptions;

// The twenty features in report order. Undefined or skipped features are NaN.
typedef struct FlFeatures {
  double phi_lo;
  double rs_ratio;
  double rho_a;
  double gamma;
  double nfc;
  double eps_mag;
  double eps_sign;
  double eps_reci;
  double eps_pos;
  double eps_neg;
  double i_id;
  double eps_dr;
  double eps_ic;
  double eps_pairwise_r2;
  double fdc;
  double alpha_go;
  double bfc_acc;
  double bfc_greedy;
  double phi_ee;
  double eta;
} FlFeatures;

// Summary of a batch of adaptive walks.
typedef struct FlDeSummary {
  size_t runs;
  double mean_percentile;
  double mean_steps;
} FlDeSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a landscape from parallel arrays of `len` sequences and fitness
// values. `alphabet` is `"infer"`, `"binary"`, `"dna"`, `"rna"` or
// `"protein"` (null means infer). Without `delimiter` every character of a
// sequence is one allele.
//
// # Safety
// `sequences` and `fitness` must point to `len` valid elements, each
// sequence a NUL-terminated string; `out` must be a valid pointer.
enum FlStatus fl_landscape_from_arrays(const char *const *sequences,
                                       const double *fitness,
                                       size_t len,
                                       const char *alphabet,
                                       const char *delimiter,
                                       struct FlLandscape **out);

// Loads a landscape from a CSV table or a binary snapshot.
//
// # Safety
// `path` must be a NUL-terminated string; `alphabet` and `delimiter` may be
// null; `out` must be a valid pointer.
enum FlStatus fl_landscape_load(const char *path,
                                const char *alphabet,
                                const char *delimiter,
                                struct FlLandscape **out);

// Writes a binary snapshot of the landscape.
//
// # Safety
// `landscape` must be a live handle and `path` a NUL-terminated string.
enum FlStatus fl_landscape_save_snapshot(const struct FlLandscape *landscape, const char *path);

// Generates a synthetic landscape from a JSON configuration such as
// `{"model": {"model": "nk", "k": 3}, "alphabet_sizes": [2, 2, 2, 2], "seed": 1}`.
//
// # Safety
// `config_json` must be a NUL-terminated string; `out` a valid pointer.
enum FlStatus fl_generate(const char *config_json, struct FlLandscape **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `landscape` must be null or a handle not yet freed.
void fl_landscape_free(struct FlLandscape *landscape);

// Number of observed genotypes; 0 for a null handle.
//
// # Safety
// `landscape` must be null or a live handle.
size_t fl_landscape_node_count(const struct FlLandscape *landscape);

// Number of directed edges; 0 for a null handle.
//
// # Safety
// `landscape` must be null or a live handle.
size_t fl_landscape_edge_count(const struct FlLandscape *landscape);

// Fraction of the sequence space that was observed; NaN for a null handle.
//
// # Safety
// `landscape` must be null or a live handle.
double fl_landscape_completeness(const struct FlLandscape *landscape);

struct FlAnalysisOptions fl_analysis_options_default(void);

// Computes the feature report. `options` may be null for defaults. Either
// output may be null: `values` receives the twenty features, `report_json`
// the full report (features and diagnostics) as a JSON object with `null`
// for undefined values.
//
// # Safety
// `landscape` must be a live handle; non-null pointers must be valid.
enum FlStatus fl_analyze(const struct FlLandscape *landscape,
                         const struct FlAnalysisOptions *options,
                         struct FlFeatures *values,
                         char **report_json);

// Runs `runs` adaptive walks from seeded random starts. Either output may
// be null; `result_json` receives every run.
//
// # Safety
// `landscape` must be a live handle; non-null pointers must be valid.
enum FlStatus fl_run_de(const struct FlLandscape *landscape,
                        enum FlWalkMethod method,
                        size_t runs,
                        uint64_t seed,
                        struct FlDeSummary *summary,
                        char **result_json);

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *fl_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void fl_string_free(char *s);

// Library version as a static string.
const char *fl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FITLAND_H */
