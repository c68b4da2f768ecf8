#ifndef DECOR_H
#define DECOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum DecorStatus {
  DECOR_STATUS_OK = 0,
  DECOR_STATUS_NULL_POINTER = 1,
  DECOR_STATUS_INVALID_UTF8 = 2,
  DECOR_STATUS_INVALID_INPUT = 3,
  DECOR_STATUS_NOT_FOUND = 4,
  DECOR_STATUS_TIMEOUT = 5,
  DECOR_STATUS_ARITY_LIMIT = 6,
  DECOR_STATUS_PANIC = 7,
} DecorStatus;

/*
 Opaque factor graph handle.
 */
typedef struct DecorGraph DecorGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a graph from NUL-terminated JSON. On success `*out` owns a handle
 to release with `decor_graph_free`.

 # Safety
 `json` must be a valid C string and `out` a valid pointer.
 */
enum DecorStatus decor_graph_from_json(const char *json, struct DecorGraph **out);

/*
 Releases a graph handle. Null is ignored.

 # Safety
 `graph` must come from `decor_graph_from_json` and not be freed twice.
 */
void decor_graph_free(struct DecorGraph *graph);

/*
 Number of variables in the graph.

 # Safety
 `graph` and `out` must be valid pointers.
 */
enum DecorStatus decor_graph_variable_count(const struct DecorGraph *graph, size_t *out);

/*
 Runs the detector on the named factor and writes
 `{"factor": ..., "subsets": [[arg names], ...]}` to `*out_json`, largest
 subsets first. `timeout_ms == 0` means no deadline.

 # Safety
 `graph`, `factor` and `out_json` must be valid pointers.
 */
enum DecorStatus decor_detect(const struct DecorGraph *graph,
                              const char *factor,
                              uint64_t timeout_ms,
                              char **out_json);

/*
 Checks whether the named factor is commutative in the given zero-based
 argument positions.

 # Safety
 `positions` must point to `len` readable values (or be null when `len`
 is 0); the other pointers must be valid.
 */
enum DecorStatus decor_is_commutative(const struct DecorGraph *graph,
                                      const char *factor,
                                      const size_t *positions,
                                      size_t len,
                                      bool *out);

/*
 Groups variables and factors by colour passing, using the evidence stored
 in the graph, and writes the grouping JSON to `*out_json`.

 # Safety
 `graph` and `out_json` must be valid pointers.
 */
enum DecorStatus decor_lift(const struct DecorGraph *graph, char **out_json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void decor_string_free(char *s);

/*
 Message of the last failed call on this thread, or null. Valid until the
 next call into the library on the same thread.
 */
const char *decor_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECOR_H */
