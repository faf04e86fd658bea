#ifndef ORDCALC_H
#define ORDCALC_H

/* Generated by cbindgen from ordcalc-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  /**
   * Success; any requested output was produced.
   */
  ORDCALC_STATUS_OK = 0,
  /**
   * The computation ran but the checked property failed; the report
   * carries witnesses.
   */
  ORDCALC_STATUS_PROPERTY_FAILED = 1,
  /**
   * Malformed JSON input.
   */
  ORDCALC_STATUS_BAD_JSON = 2,
  /**
   * Schema violation (wrong kind, wrong shape, unknown fields).
   */
  ORDCALC_STATUS_BAD_SCHEMA = 3,
  /**
   * Dangling or duplicate element names.
   */
  ORDCALC_STATUS_BAD_NAME = 4,
  /**
   * The document parsed but violates a structural axiom.
   */
  ORDCALC_STATUS_BAD_STRUCTURE = 5,
  /**
   * A null handle or pointer argument.
   */
  ORDCALC_STATUS_NULL_ARGUMENT = 6,
  /**
   * Any other engine error; see `ordcalc_last_error`.
   */
  ORDCALC_STATUS_ENGINE_ERROR = 7,
} OrdcalcStatus;

/**
 * An opaque named semigroup handle.
 */
typedef struct OrdcalcSemigroup OrdcalcSemigroup;

/**
 * # Safety
 * `bytes` must point to `len` readable bytes; `out` must be a valid
 * location for a handle pointer.
 */
OrdcalcStatus ordcalc_semigroup_parse(const uint8_t *bytes, uintptr_t len, OrdcalcSemigroup **out);

/**
 * # Safety
 * `handle` must be null or a pointer returned by
 * [`ordcalc_semigroup_parse`] that has not been freed.
 */
void ordcalc_semigroup_free(OrdcalcSemigroup *handle);

/**
 * Number of elements in the carrier; zero for a null handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
uintptr_t ordcalc_semigroup_size(const OrdcalcSemigroup *handle);

/**
 * Runs the W- and Cu-axiom batteries. On return, `*report` holds a JSON
 * report string when `report` is non-null.
 *
 * # Safety
 * `handle` must be a live handle; `report` null or writable.
 */
OrdcalcStatus ordcalc_validate(const OrdcalcSemigroup *handle, char **report);

/**
 * Almost-unperforation scan; a failing scan returns `PropertyFailed` with
 * the `(a, b, k)` witness inside the report.
 *
 * # Safety
 * `handle` must be a live handle; `report` null or writable.
 */
OrdcalcStatus ordcalc_compare_au(const OrdcalcSemigroup *handle, char **report);

/**
 * Generates the normal closed pair from a relation document and returns
 * the pair document as JSON.
 *
 * # Safety
 * `handle` must be a live handle; `seed_json` must point to `seed_len`
 * readable bytes; `pair_out` null or writable.
 */
OrdcalcStatus ordcalc_generate_normal(const OrdcalcSemigroup *handle,
                                      const uint8_t *seed_json,
                                      uintptr_t seed_len,
                                      char **pair_out);

/**
 * Quotients by the normal pair generated from an action document and
 * returns a report with the quotient semigroup and the class map.
 *
 * # Safety
 * `handle` must be a live handle; `action_json` must point to
 * `action_len` readable bytes; `report` null or writable.
 */
OrdcalcStatus ordcalc_dyn_quotient(const OrdcalcSemigroup *handle,
                                   const uint8_t *action_json,
                                   uintptr_t action_len,
                                   char **report);

/**
 * Completes the semigroup by round ideals and runs the completion
 * battery.
 *
 * # Safety
 * `handle` must be a live handle; `report` null or writable.
 */
OrdcalcStatus ordcalc_complete(const OrdcalcSemigroup *handle, char **report);

/**
 * The last error message recorded on this thread, or null. The pointer is
 * owned by the library and valid until the next failing call on the same
 * thread.
 */
const char *ordcalc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ordcalc_string_free(char *s);

#endif  /* ORDCALC_H */
