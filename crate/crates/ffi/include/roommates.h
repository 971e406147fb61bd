#ifndef ROOMMATES_H
#define ROOMMATES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call.
typedef enum {
  SR_STATUS_OK = 0,
  // The solver finished and found nothing within the bound.
  SR_STATUS_NOT_FOUND = 1,
  // A null pointer, bad UTF-8, or an index out of range.
  SR_STATUS_INVALID_ARGUMENT = 2,
  SR_STATUS_PARSE_ERROR = 3,
  SR_STATUS_DOMAIN_ERROR = 4,
  SR_STATUS_CAPACITY_ERROR = 5,
  // An internal error; the library state is unchanged.
  SR_STATUS_PANIC = 6,
} SrStatus;

// A validated preference profile.
typedef struct SrProfile SrProfile;

// A matching returned by a solver, with its objective value.
typedef struct SrSolution SrSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or an empty string.
// The pointer stays valid until the next failing call on this thread.
const char *sr_last_error_message(void);

// Parses instance text into a new profile stored in `*out`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer to
// writable storage for one handle.
SrStatus sr_profile_parse(const char *text, SrProfile **out);

// Releases a profile. Null is ignored.
//
// # Safety
// `profile` must be null or a handle from [`sr_profile_parse`] that has not
// been freed.
void sr_profile_free(SrProfile *profile);

// Number of agents, or 0 for a null handle.
//
// # Safety
// `profile` must be null or a live profile handle.
size_t sr_profile_agent_count(const SrProfile *profile);

// Name of agent `index`, owned by the profile, or null when out of range.
//
// # Safety
// `profile` must be null or a live profile handle.
const char *sr_profile_agent_name(const SrProfile *profile, size_t index);

// Canonical instance text; release it with [`sr_string_free`]. Null on a
// null handle.
//
// # Safety
// `profile` must be null or a live profile handle.
char *sr_profile_serialize(const SrProfile *profile);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from [`sr_profile_serialize`] not yet freed.
void sr_string_free(char *s);

// Stable matching whose egalitarian cost (unmatched agents pay their list
// length) is at most `gamma`. The value is the cost.
//
// # Safety
// `profile` must be a live profile handle and `out` writable storage for
// one handle.
SrStatus sr_solve_egal(const SrProfile *profile, size_t gamma, SrSolution **out);

// Cheapest stable matching when each unmatched agent costs `c`, if its
// cost is at most `gamma`.
//
// # Safety
// As for [`sr_solve_egal`].
SrStatus sr_solve_egal_constant(const SrProfile *profile, size_t gamma, size_t c, SrSolution **out);

// Matching with the fewest blocking pairs, if at most `max_pairs`. The
// value is the number of blocking pairs.
//
// # Safety
// As for [`sr_solve_egal`].
SrStatus sr_solve_min_blocking_pairs(const SrProfile *profile, size_t max_pairs, SrSolution **out);

// Matching with the fewest blocking agents, if at most `max_agents`. The
// value is the number of blocking agents.
//
// # Safety
// As for [`sr_solve_egal`].
SrStatus sr_solve_min_blocking_agents(const SrProfile *profile,
                                      size_t max_agents,
                                      SrSolution **out);

// Number of matched pairs, or 0 for a null handle.
//
// # Safety
// `solution` must be null or a live solution handle.
size_t sr_solution_pair_count(const SrSolution *solution);

// Objective value of the solution, or 0 for a null handle.
//
// # Safety
// `solution` must be null or a live solution handle.
size_t sr_solution_value(const SrSolution *solution);

// Writes the agent indices of pair `index` to `*a` and `*b` (`*a < *b`).
//
// # Safety
// `solution` must be a live solution handle; `a` and `b` must be writable.
SrStatus sr_solution_pair(const SrSolution *solution, size_t index, size_t *a, size_t *b);

// Releases a solution. Null is ignored.
//
// # Safety
// `solution` must be null or a live solution handle.
void sr_solution_free(SrSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROOMMATES_H */
