#ifndef CRYPTOVET_H
#define CRYPTOVET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum CvStatus {
  /**
   * The call succeeded.
   */
  CvOk = 0,
  /**
   * A pointer or string argument was null, not UTF-8, or out of range.
   */
  CvInvalidArgument = 1,
  /**
   * The configuration or input was rejected.
   */
  CvConfigError = 2,
  /**
   * The scanner failed internally.
   */
  CvInternalError = 3,
} CvStatus;

/**
 * Report format selector for [`cryptovet_result_report`].
 */
typedef enum CvFormat {
  CvFormatText = 0,
  CvFormatJson = 1,
  CvFormatSarif = 2,
} CvFormat;

/**
 * Opaque scan result. Owned by the library; release with
 * [`cryptovet_result_free`].
 */
typedef struct CvScanResult CvScanResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; never freed by the caller.
 */
const char *cryptovet_version(void);

/**
 * Scan the Go project under `root`.
 *
 * `rules_csv` selects rules by comma-separated id ("04,11"); pass null
 * for the whole catalog. On `CvOk`, `*out` owns the result.
 *
 * # Safety
 * `root` and (when non-null) `rules_csv` must point to NUL-terminated
 * strings; `out` must point to writable memory for one pointer.
 */
enum CvStatus cryptovet_scan(const char *root,
                             const char *rules_csv,
                             bool exclude_tests,
                             struct CvScanResult **out);

/**
 * Number of findings in a scan result; 0 for null.
 *
 * # Safety
 * `result` must be null or a pointer from [`cryptovet_scan`] that has not
 * been freed.
 */
uintptr_t cryptovet_result_finding_count(const struct CvScanResult *result);

/**
 * Render a scan result as text, JSON, or SARIF. On `CvOk`, `*out` is a
 * caller-owned string; release it with [`cryptovet_string_free`].
 *
 * # Safety
 * `result` must be a live pointer from [`cryptovet_scan`]; `out` must
 * point to writable memory for one pointer.
 */
enum CvStatus cryptovet_result_report(const struct CvScanResult *result,
                                      enum CvFormat format,
                                      char **out);

/**
 * Release a scan result. Null is a no-op.
 *
 * # Safety
 * `result` must be null or a pointer from [`cryptovet_scan`] that has not
 * already been freed.
 */
void cryptovet_result_free(struct CvScanResult *result);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string this library returned that has not
 * already been freed.
 */
void cryptovet_string_free(char *s);

/**
 * The rule catalog as a JSON array (id, category, title, severity,
 * advisory). Caller owns the string; release with
 * [`cryptovet_string_free`]. Returns null on allocation failure.
 */
char *cryptovet_rule_catalog_json(void);

/**
 * Copy of the calling thread's last error message, or null when the last
 * call on this thread succeeded. Caller owns the string; release with
 * [`cryptovet_string_free`].
 */
char *cryptovet_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRYPTOVET_H */
