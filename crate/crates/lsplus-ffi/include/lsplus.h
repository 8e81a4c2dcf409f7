#ifndef LSPLUS_H
#define LSPLUS_H

/* Generated by cbindgen from lsplus-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every function of the library.
typedef enum LsplusStatus {
  // Success, or an accepting verdict.
  LSPLUS_STATUS_OK = 0,
  // The call completed and the verdict is negative.
  LSPLUS_STATUS_REJECT = 1,
  // A required pointer argument was null.
  LSPLUS_STATUS_NULL_POINTER = 2,
  // A string argument was not valid UTF-8.
  LSPLUS_STATUS_INVALID_UTF8 = 3,
  // A graph6 string or inequality could not be parsed.
  LSPLUS_STATUS_PARSE = 4,
  // A certificate package could not be read or written.
  LSPLUS_STATUS_IO = 5,
  // Input was well formed but structurally invalid (dimensions, tags, levels).
  LSPLUS_STATUS_MALFORMED = 6,
  // The caller buffer is too small; `needed` holds the required size.
  LSPLUS_STATUS_BUFFER_TOO_SMALL = 7,
  // An internal panic was caught at the boundary.
  LSPLUS_STATUS_INTERNAL = 8,
} LsplusStatus;

// Opaque graph handle.
typedef struct LsplusGraph LsplusGraph;

// Opaque certificate package handle.
typedef struct LsplusPackage LsplusPackage;

// Opaque verification report handle.
typedef struct LsplusReport LsplusReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated name of a status code.
const char *lsplus_status_name(enum LsplusStatus status);

// Copies the calling thread's last error message into `buf`.
enum LsplusStatus lsplus_last_error(char *buf, size_t len, size_t *needed);

// Decodes a graph6 string into a new graph handle.
enum LsplusStatus lsplus_graph_from_graph6(const char *graph6, struct LsplusGraph **out);

// Releases a graph handle. Null is ignored.
void lsplus_graph_free(struct LsplusGraph *g);

// Number of vertices, or 0 for a null handle.
size_t lsplus_graph_order(const struct LsplusGraph *g);

// Number of edges, or 0 for a null handle.
size_t lsplus_graph_edge_count(const struct LsplusGraph *g);

// Copies the graph6 encoding of `g` into `buf`.
enum LsplusStatus lsplus_graph_graph6(const struct LsplusGraph *g,
                                      char *buf,
                                      size_t len,
                                      size_t *needed);

// Copies the canonical graph6 form of `g` into `buf`.
enum LsplusStatus lsplus_graph_canonical(const struct LsplusGraph *g,
                                         char *buf,
                                         size_t len,
                                         size_t *needed);

// Rule-based upper bound on the LS+ rank of `g` with the given depth budget.
enum LsplusStatus lsplus_rank_upper_bound(const struct LsplusGraph *g,
                                          uint32_t depth,
                                          size_t *bound);

// Loads a certificate package directory into a new package handle.
enum LsplusStatus lsplus_package_load(const char *dir, struct LsplusPackage **out);

// Releases a package handle. Null is ignored.
void lsplus_package_free(struct LsplusPackage *pkg);

// LS+ level of a package, or 0 for a null handle.
uint8_t lsplus_package_level(const struct LsplusPackage *pkg);

// Verifies `pkg`. `g` may be null to use the graph named by the package;
// `inequality` may be null to use the package's own inequality (if any),
// otherwise it is a CSV row `a_1,…,a_n,beta`. On `LSPLUS_STATUS_OK` or
// `LSPLUS_STATUS_REJECT` a report handle is stored in `out`.
enum LsplusStatus lsplus_package_verify(const struct LsplusPackage *pkg,
                                        const struct LsplusGraph *g,
                                        const char *inequality,
                                        struct LsplusReport **out);

// Releases a report handle. Null is ignored.
void lsplus_report_free(struct LsplusReport *report);

// 1 if the report accepts, 0 otherwise (including a null handle).
int32_t lsplus_report_accepted(const struct LsplusReport *report);

// Number of failures in the report, or 0 for a null handle.
size_t lsplus_report_failure_count(const struct LsplusReport *report);

// Copies the report as JSON into `buf`.
enum LsplusStatus lsplus_report_json(const struct LsplusReport *report,
                                     char *buf,
                                     size_t len,
                                     size_t *needed);

// Copies the human-readable report into `buf`.
enum LsplusStatus lsplus_report_text(const struct LsplusReport *report,
                                     char *buf,
                                     size_t len,
                                     size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSPLUS_H */
