#ifndef LZDAWG_H
#define LZDAWG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum LzStatus {
  LZ_STATUS_OK = 0,
  LZ_STATUS_NULL_POINTER = 1,
  LZ_STATUS_INVALID_ARGUMENT = 2,
  LZ_STATUS_ALPHABET_OVERFLOW = 3,
  LZ_STATUS_MEMORY_BUDGET = 4,
  LZ_STATUS_FINISHED = 5,
  LZ_STATUS_BAD_RUN = 6,
  LZ_STATUS_WRONG_MODE = 7,
  LZ_STATUS_POISONED = 8,
  LZ_STATUS_PANIC = 9,
} LzStatus;

/**
 * Values of `LzConfig::mode`.
 */
typedef enum LzMode {
  LZ_MODE_PACKED = 0,
  LZ_MODE_RLE = 1,
} LzMode;

/**
 * Opaque factorizer handle.
 */
typedef struct LzFactorizer LzFactorizer;

typedef struct LzConfig {
  /**
   * An `LzMode` value.
   */
  uint32_t mode;
  /**
   * Distinct byte values accepted by the packed mode (2..=256).
   */
  uint32_t sigma;
  /**
   * Characters per meta-character; 0 chooses automatically.
   */
  uint32_t block_chars;
  /**
   * Initial text length bound of the packed mode.
   */
  uint64_t initial_capacity;
  /**
   * Bit-array memory budget in bytes; 0 uses the library default.
   */
  uint64_t mem_budget;
} LzConfig;

/**
 * One factor. `is_literal` is 1 for a literal `byte`, 0 for a copy of
 * `len` bytes from 1-based position `src`.
 */
typedef struct LzFactor {
  uint64_t start;
  uint64_t src;
  uint64_t len;
  uint8_t byte;
  uint8_t is_literal;
} LzFactor;

typedef struct LzStats {
  uint64_t n;
  uint64_t z;
  /**
   * Runs pushed so far (RLE mode only).
   */
  uint64_t m;
  /**
   * Current block size (packed mode only).
   */
  uint32_t block_chars;
  uint32_t rebuilds;
  uint64_t dawg_states;
  uint64_t dawg_edges;
  uint64_t points;
} LzStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Defaults: packed mode, 256 symbols, automatic block size.
 */
struct LzConfig lz_config_default(void);

/**
 * Creates a factorizer. On success `*out` receives the handle; otherwise it
 * is set to null.
 *
 * # Safety
 * `config` must be null or point to a valid `LzConfig`; `out` must be null
 * or writable.
 */
enum LzStatus lz_factorizer_new(const struct LzConfig *config, struct LzFactorizer **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from `lz_factorizer_new` not yet freed.
 */
void lz_factorizer_free(struct LzFactorizer *h);

/**
 * Appends bytes. In RLE mode they are merged into runs.
 *
 * # Safety
 * `data` must point to `len` readable bytes (it may be null when `len` is 0).
 */
enum LzStatus lz_push(struct LzFactorizer *h, const uint8_t *data, uintptr_t len);

/**
 * Appends the run `ch^exp` (RLE mode only).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
enum LzStatus lz_push_run(struct LzFactorizer *h, uint8_t ch, uint64_t exp);

/**
 * Ends the input and commits the remaining factors. Repeated calls are
 * no-ops.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
enum LzStatus lz_finish(struct LzFactorizer *h);

/**
 * Number of committed factors not yet taken, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
uintptr_t lz_pending(const struct LzFactorizer *h);

/**
 * Moves up to `cap` committed factors into `buf`, oldest first, and stores
 * the count in `*written`.
 *
 * # Safety
 * `buf` must have room for `cap` factors (it may be null when `cap` is 0);
 * `written` must be writable.
 */
enum LzStatus lz_take(struct LzFactorizer *h,
                      struct LzFactor *buf,
                      uintptr_t cap,
                      uintptr_t *written);

/**
 * Fills `*out` with the current statistics.
 *
 * # Safety
 * `out` must be writable.
 */
enum LzStatus lz_stats(struct LzFactorizer *h, struct LzStats *out);

/**
 * Static, NUL-terminated description of an `LzStatus` value.
 */
const char *lz_status_message(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LZDAWG_H */
