#ifndef E2ECOV_H
#define E2ECOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum E2ecovStatus {
  E2ECOV_STATUS_OK = 0,
  /*
   A required pointer argument was NULL.
   */
  E2ECOV_STATUS_NULL_ARG = 1,
  /*
   A string argument was not valid UTF-8.
   */
  E2ECOV_STATUS_INVALID_UTF8 = 2,
  /*
   A JSON, YAML or trace document could not be parsed.
   */
  E2ECOV_STATUS_PARSE_ERROR = 3,
  /*
   The input parsed but cannot be analysed, e.g. an empty manifest or an
   inventory with no non-gateway endpoints.
   */
  E2ECOV_STATUS_INVALID_INPUT = 4,
  /*
   A bug in the library. The message has details.
   */
  E2ECOV_STATUS_INTERNAL = 5,
} E2ecovStatus;

/*
 Values for the `format` argument of `e2ecov_report_render`.
 */
typedef enum E2ecovRenderFormat {
  E2ECOV_RENDER_FORMAT_JSON = 0,
  E2ECOV_RENDER_FORMAT_TEXT = 1,
  E2ECOV_RENDER_FORMAT_DOT = 2,
  E2ECOV_RENDER_FORMAT_HTML = 3,
} E2ecovRenderFormat;

/*
 An endpoint inventory.
 */
typedef struct E2ecovInventory E2ecovInventory;

/*
 A coverage report, together with the inventory it was computed from.
 */
typedef struct E2ecovReport E2ecovReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses an inventory JSON document. On success `*out` receives a handle
 to release with `e2ecov_inventory_free`.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum E2ecovStatus e2ecov_inventory_from_json(const char *json, struct E2ecovInventory **out);

/*
 Builds an inventory for one service from an OpenAPI 3 or Swagger 2
 document, in JSON or YAML.

 # Safety
 `document` and `service` must be NUL-terminated strings; `out` must be
 writable.
 */
enum E2ecovStatus e2ecov_inventory_from_openapi(const char *document,
                                                const char *service,
                                                struct E2ecovInventory **out);

/*
 Number of endpoints in the coverage universe, gateways excluded.
 Returns 0 for NULL.

 # Safety
 `inventory` must be NULL or a live handle.
 */
size_t e2ecov_inventory_endpoint_count(const struct E2ecovInventory *inventory);

/*
 Serializes the inventory to canonical JSON.

 # Safety
 `inventory` must be a live handle; `out` must be writable.
 */
enum E2ecovStatus e2ecov_inventory_to_json(const struct E2ecovInventory *inventory, char **out);

/*
 # Safety
 `inventory` must be NULL or a handle not yet freed.
 */
void e2ecov_inventory_free(struct E2ecovInventory *inventory);

/*
 Windows the calls in `traces` by the test manifest, matches them against
 the inventory and computes coverage.

 `format` is `"jsonl"` (one call object per line) or `"skywalking-es"`
 (an Elasticsearch export of SkyWalking indices). Records that cannot be
 decoded are skipped.

 # Safety
 `inventory` must be a live handle; the strings must be NUL-terminated;
 `out` must be writable.
 */
enum E2ecovStatus e2ecov_analyze(const struct E2ecovInventory *inventory,
                                 const char *traces,
                                 const char *format,
                                 const char *manifest_json,
                                 struct E2ecovReport **out);

/*
 Parses a coverage report JSON document, as written by `analyze`. The
 HTML rendering of such a report lists only the endpoints it names.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum E2ecovStatus e2ecov_report_from_json(const char *json, struct E2ecovReport **out);

/*
 Suite coverage as a ratio in [0, 1].

 # Safety
 `report` must be a live handle; `out` must be writable.
 */
enum E2ecovStatus e2ecov_report_suite_coverage(const struct E2ecovReport *report, double *out);

/*
 Renders the report. `format` is one of the `E2ecovRenderFormat` values.

 # Safety
 `report` must be a live handle; `out` must be writable.
 */
enum E2ecovStatus e2ecov_report_render(const struct E2ecovReport *report,
                                       uint32_t format,
                                       char **out);

/*
 # Safety
 `report` must be NULL or a handle not yet freed.
 */
void e2ecov_report_free(struct E2ecovReport *report);

/*
 Releases a string returned by this library.

 # Safety
 `s` must be NULL or a string from this library not yet freed.
 */
void e2ecov_string_free(char *s);

/*
 Message for the last failed call on this thread, or "" after a success.
 Valid until the next call into this library on the same thread.
 */
const char *e2ecov_last_error_message(void);

/*
 Library version, static storage.
 */
const char *e2ecov_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* E2ECOV_H */
