#ifndef SCHURCC_H
#define SCHURCC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SchurccBMode {
  SCHURCC_B_MODE_DEFINITION = 0,
  SCHURCC_B_MODE_EXAMPLE = 1,
} SchurccBMode;

typedef enum SchurccMethod {
  SCHURCC_METHOD_FULL_SCAN = 0,
  SCHURCC_METHOD_RESTRICTED_SCAN = 1,
  SCHURCC_METHOD_NONCYCLIC = 2,
  SCHURCC_METHOD_ORACLE = 3,
  SCHURCC_METHOD_SHORTCUT_SMALL_EXPONENT = 4,
  SCHURCC_METHOD_SHORTCUT_NU_DOMINATES = 5,
  SCHURCC_METHOD_SHORTCUT_OUTSIDE_SPAN = 6,
} SchurccMethod;

/**
 * Result of every fallible call. Values match the CLI exit codes where
 * they overlap.
 */
typedef enum SchurccStatus {
  SCHURCC_STATUS_OK = 0,
  SCHURCC_STATUS_INVALID_INPUT = 1,
  SCHURCC_STATUS_PRIME_NOT_IN_FIELD = 2,
  SCHURCC_STATUS_INVARIANT_VIOLATION = 3,
  SCHURCC_STATUS_RESOURCE_LIMIT = 4,
  SCHURCC_STATUS_NULL_POINTER = 5,
  SCHURCC_STATUS_PANIC = 6,
} SchurccStatus;

typedef enum SchurccVerdict {
  SCHURCC_VERDICT_FINITE = 0,
  SCHURCC_VERDICT_INFINITE = 1,
} SchurccVerdict;

/**
 * Opaque field-and-prime context.
 */
typedef struct SchurccContext SchurccContext;

/**
 * Opaque abelian field.
 */
typedef struct SchurccField SchurccField;

/**
 * Invariants of a context.
 */
typedef struct SchurccContextInfo {
  uint64_t conductor;
  uint64_t degree;
  uint64_t p;
  uint32_t a;
  uint32_t s;
  uint32_t b;
  uint64_t n_f;
  uint64_t g_order;
  uint64_t c_order;
  uint64_t rho;
  uint64_t sigma;
  uint64_t q;
  uint32_t t;
  bool cyclic;
  /**
   * Zero in the cyclic case.
   */
  uint32_t d_nc;
} SchurccContextInfo;

typedef struct SchurccDecision {
  enum SchurccVerdict verdict;
  enum SchurccMethod method;
  bool has_witness;
  /**
   * Failing `psi` for scan witnesses, residue class for oracle witnesses.
   */
  uint64_t witness;
  /**
   * Prime realizing an oracle witness, zero if none was requested.
   */
  uint64_t witness_prime;
} SchurccDecision;

/**
 * Local data at an unramified odd prime.
 */
typedef struct SchurccLocalData {
  uint64_t psi;
  uint64_t f_r;
  uint32_t f;
  uint32_t d;
  uint32_t nu;
  uint32_t beta;
  uint64_t j_prime;
  uint64_t j;
  uint64_t eta;
  bool noncyclic_parity;
} SchurccLocalData;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *schurcc_last_error_message(void);

/**
 * Parses a field from inline `m:g1,g2,...` text or a field file path.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` writable.
 */
enum SchurccStatus schurcc_field_parse(const char *text, struct SchurccField **out);

/**
 * Fixed field of the subgroup of `(Z/mZ)*` generated by `gens`.
 *
 * # Safety
 * `gens` must point to `n_gens` values (or be null when `n_gens` is zero).
 */
enum SchurccStatus schurcc_field_new(uint64_t m,
                                     const uint64_t *gens,
                                     size_t n_gens,
                                     struct SchurccField **out);

/**
 * # Safety
 * `field` must come from a `schurcc_field_*` constructor, or be null.
 */
void schurcc_field_free(struct SchurccField *field);

/**
 * Conductor of the normalized field, zero for a null handle.
 *
 * # Safety
 * `field` must be a live handle or null.
 */
uint64_t schurcc_field_conductor(const struct SchurccField *field);

/**
 * Degree over Q, zero for a null handle.
 *
 * # Safety
 * `field` must be a live handle or null.
 */
uint64_t schurcc_field_degree(const struct SchurccField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
enum SchurccStatus schurcc_context_new(const struct SchurccField *field,
                                       uint64_t p,
                                       enum SchurccBMode mode,
                                       struct SchurccContext **out);

/**
 * # Safety
 * `ctx` must come from `schurcc_context_new`, or be null.
 */
void schurcc_context_free(struct SchurccContext *ctx);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum SchurccStatus schurcc_context_info(const struct SchurccContext *ctx,
                                        struct SchurccContextInfo *out);

/**
 * Decides finiteness of the index by the group-theoretic criterion.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum SchurccStatus schurcc_decide(const struct SchurccContext *ctx, struct SchurccDecision *out);

/**
 * Decides by scanning residue classes. `max_classes` zero means the default
 * bound; `realize_bound` nonzero realizes a failing class by a prime.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum SchurccStatus schurcc_oracle_decide(const struct SchurccContext *ctx,
                                         uint64_t max_classes,
                                         uint64_t realize_bound,
                                         struct SchurccDecision *out);

/**
 * Local data at an odd prime `r` not dividing the conductor or `p`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum SchurccStatus schurcc_local_data(const struct SchurccContext *ctx,
                                      uint64_t r,
                                      struct SchurccLocalData *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHURCC_H */
