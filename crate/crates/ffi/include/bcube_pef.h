/* C interface for the bcube-pef library. */

#ifndef BCUBE_PEF_H
#define BCUBE_PEF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes for every fallible function in this interface.
 */
typedef enum BcpStatus {
  /**
   * Success.
   */
  BCP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BCP_STATUS_NULL_ARGUMENT = 1,
  /**
   * Arguments describe an invalid topology, node, edge, or quadruple.
   */
  BCP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A node string or JSON document failed to parse.
   */
  BCP_STATUS_PARSE_ERROR = 3,
  /**
   * No Hamiltonian path was found.
   */
  BCP_STATUS_NO_PATH = 4,
  /**
   * No paired 2-disjoint path cover was found.
   */
  BCP_STATUS_NO_DPC = 5,
  /**
   * Unexpected internal failure.
   */
  BCP_STATUS_INTERNAL = 6,
} BcpStatus;

/**
 * Opaque fault-set handle; create with the `bcp_fault_set_*` constructors
 * and release with `bcp_fault_set_free`.
 */
typedef struct BcpFaultSet BcpFaultSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for the current thread, or null if none has been set.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *bcp_last_error_message(void);

/**
 * Free a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned by a `bcp_*` function and not freed before.
 */
void bcp_string_free(char *s);

/**
 * Create an empty fault set over BC(n, k).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BcpStatus bcp_fault_set_new(uint8_t n, uint8_t k, struct BcpFaultSet **out);

/**
 * Generate a random fault set within the per-dimension budgets. `fill` in
 * [0, 1] scales each budget; the draw is deterministic in `seed`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BcpStatus bcp_fault_set_generate(uint8_t n,
                                      uint8_t k,
                                      double fill,
                                      uint64_t seed,
                                      struct BcpFaultSet **out);

/**
 * Parse a fault set from its JSON document form
 * `{"n": .., "k": .., "edges": [["u", "v"], ..]}`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` a valid pointer.
 */
enum BcpStatus bcp_fault_set_from_json(const char *json, struct BcpFaultSet **out);

/**
 * Serialize a fault set to its JSON document form.
 *
 * # Safety
 * `fs` must be a live handle; `out` a valid pointer.
 */
enum BcpStatus bcp_fault_set_to_json(const struct BcpFaultSet *fs, char **out);

/**
 * Add the faulty edge (a, b), given as digit-string node names.
 *
 * # Safety
 * `fs` must be a live handle; `a` and `b` valid NUL-terminated strings.
 */
enum BcpStatus bcp_fault_set_add(struct BcpFaultSet *fs, const char *a, const char *b);

/**
 * Number of faulty edges in the set, or 0 for a null handle.
 *
 * # Safety
 * `fs` must be a live handle or null.
 */
uintptr_t bcp_fault_set_len(const struct BcpFaultSet *fs);

/**
 * Whether the fault set satisfies the partitioned-edge-fault budgets.
 *
 * # Safety
 * `fs` must be a live handle; `out` a valid pointer.
 */
enum BcpStatus bcp_fault_set_is_f_pef(const struct BcpFaultSet *fs, bool *out);

/**
 * Release a fault-set handle. Null is ignored.
 *
 * # Safety
 * `fs` must have been returned by a constructor and not freed before.
 */
void bcp_fault_set_free(struct BcpFaultSet *fs);

/**
 * Fault-avoiding Hamiltonian path from `s` to `t`. On success `*out_json`
 * holds a path document `{"n", "k", "nodes"}`.
 *
 * # Safety
 * `fs` must be a live handle; `s`, `t` valid strings; `out_json` a valid
 * pointer.
 */
enum BcpStatus bcp_ham_path(const struct BcpFaultSet *fs,
                            const char *s,
                            const char *t,
                            char **out_json);

/**
 * Fault-avoiding paired 2-disjoint path cover for (s1, t1, s2, t2). On
 * success `*out_json` holds a cover document `{"n", "k", "p1", "p2",
 * "case_trace"}`.
 *
 * # Safety
 * `fs` must be a live handle; endpoint arguments valid strings; `out_json`
 * a valid pointer.
 */
enum BcpStatus bcp_dpc(const struct BcpFaultSet *fs,
                       const char *s1,
                       const char *t1,
                       const char *s2,
                       const char *t2,
                       char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BCUBE_PEF_H */
