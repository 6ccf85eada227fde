#ifndef QUIVERDEPTH_H
#define QUIVERDEPTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of the C API.
 */
typedef enum QdStatus {
  /**
   * Success.
   */
  QdOk = 0,
  /**
   * A required pointer argument was NULL.
   */
  QdNullArgument = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  QdInvalidUtf8 = 2,
  /**
   * The input was rejected (parse or validation failure).
   */
  QdInvalidInput = 3,
  /**
   * The computation itself failed.
   */
  QdComputeError = 4,
} QdStatus;

/**
 * Opaque handle to a subalgebra pair plus its cached depth engine.
 */
typedef struct QdExtension {
  uint8_t _opaque[0];
} QdExtension;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread. Never NULL.
 */
const char *qd_last_error_message(void);

/**
 * Builds a handle for the linear family T_n with a named subalgebra
 * (`top`, `diagonal`, `arrow` or `jordan`). Returns NULL on failure; see
 * `qd_last_error_message`.
 *
 * # Safety
 * `selector` and `field` must be valid NUL-terminated strings.
 */
struct QdExtension *qd_extension_family(uint32_t n, const char *selector, const char *field);

/**
 * Builds a handle from a quiver description in the text format
 * (`vertices <n>` then `arrow <label> <src> <tgt>` lines). Selector
 * `jordan` is rejected here. Returns NULL on failure.
 *
 * # Safety
 * All pointer arguments must be valid NUL-terminated strings.
 */
struct QdExtension *qd_extension_from_quiver(const char *quiver_text,
                                             const char *selector,
                                             const char *field);

/**
 * Builds a handle with a custom subalgebra: `generators` holds one
 * generator per line as `[coeff*]<path-label>` sums (`1` is the unit).
 * `quiver_text` may be NULL, in which case `family_n` selects T_n.
 *
 * # Safety
 * Non-NULL pointers must be valid NUL-terminated strings.
 */
struct QdExtension *qd_extension_custom(const char *quiver_text,
                                        uint32_t family_n,
                                        const char *generators,
                                        const char *field);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `handle` must come from a `qd_extension_*` constructor and not have
 * been freed already.
 */
void qd_extension_free(struct QdExtension *handle);

/**
 * Minimum depth up to `cutoff`. On success `*out_value` holds the depth
 * when `*out_resolved` is true, or a certified lower bound otherwise.
 *
 * # Safety
 * `handle` must be a live handle; the out pointers must be valid.
 */
enum QdStatus qd_min_depth(struct QdExtension *handle,
                           uint32_t cutoff,
                           uint32_t *out_value,
                           bool *out_resolved);

/**
 * Dimension of the tensor power `C_n(A,B)` (`n = 0` gives `dim B`).
 *
 * # Safety
 * `handle` must be a live handle; `out_dim` must be valid.
 */
enum QdStatus qd_tensor_dim(struct QdExtension *handle, uint32_t n, uintptr_t *out_dim);

/**
 * Full depth report as a JSON document (minimum/odd/H-depth, per-level
 * flags, cutoff, field). The string must be freed with `qd_string_free`.
 *
 * # Safety
 * `handle` must be a live handle; `out_json` must be valid.
 */
enum QdStatus qd_depth_report_json(struct QdExtension *handle, uint32_t cutoff, char **out_json);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void qd_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QUIVERDEPTH_H */
