/* C interface for the lexicore assignment-game solver. */

#ifndef LEXICORE_H
#define LEXICORE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every API call.
 */
typedef enum LexicoreStatus {
  LEXICORE_STATUS_OK = 0,
  LEXICORE_STATUS_NULL_ARGUMENT = 1,
  LEXICORE_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or an invalid instance/imputation.
   */
  LEXICORE_STATUS_PARSE_ERROR = 3,
  /**
   * Instance too large for the brute-force oracle.
   */
  LEXICORE_STATUS_GUARD_EXCEEDED = 4,
  LEXICORE_STATUS_INTERNAL_ERROR = 5,
} LexicoreStatus;

/**
 * Which optimum to compute.
 */
typedef enum LexicoreObjective {
  LEXICORE_OBJECTIVE_LEXIMIN = 0,
  LEXICORE_OBJECTIVE_LEXIMAX = 1,
} LexicoreObjective;

/**
 * Opaque parsed instance.
 */
typedef struct LexicoreGame LexicoreGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call; never NULL.
 */
const char *lexicore_last_error_message(void);

/**
 * Parses an instance from JSON:
 * `{"left": n, "right": m, "edges": [{"u": 0, "v": 1, "w": 10}, ...]}` with
 * weights as integers or "p/q" strings. On success stores a handle in
 * `out_game`; free it with `lexicore_game_free`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out_game` must be a valid
 * pointer.
 */
enum LexicoreStatus lexicore_game_parse(const char *json, struct LexicoreGame **out_game);

/**
 * Releases a handle returned by `lexicore_game_parse`. NULL is a no-op.
 *
 * # Safety
 * `game` must be NULL or a pointer previously returned by
 * `lexicore_game_parse` that has not been freed yet.
 */
void lexicore_game_free(struct LexicoreGame *game);

/**
 * Number of left-side vertices; 0 if the handle is NULL.
 *
 * # Safety
 * `game` must be NULL or a live handle.
 */
size_t lexicore_game_left_size(const struct LexicoreGame *game);

/**
 * Number of right-side vertices; 0 if the handle is NULL.
 *
 * # Safety
 * `game` must be NULL or a live handle.
 */
size_t lexicore_game_right_size(const struct LexicoreGame *game);

/**
 * Number of edges; 0 if the handle is NULL.
 *
 * # Safety
 * `game` must be NULL or a live handle.
 */
size_t lexicore_game_edge_count(const struct LexicoreGame *game);

/**
 * Canonical byte-stable JSON serialization of the instance.
 *
 * # Safety
 * `game` must be a live handle; `out_json` a valid pointer.
 */
enum LexicoreStatus lexicore_game_to_json(const struct LexicoreGame *game, char **out_json);

/**
 * Worth of the game (maximum matching weight) as a decimal or "p/q" string.
 *
 * # Safety
 * `game` must be a live handle; `out_worth` a valid pointer.
 */
enum LexicoreStatus lexicore_worth(const struct LexicoreGame *game, char **out_worth);

/**
 * Computes the leximin or leximax core imputation. `out_json` receives
 * `{"worth": ..., "imputation": {"u": [...], "v": [...]}, "profile": [...]}`
 * with all numbers as exact strings.
 *
 * # Safety
 * `game` must be a live handle; `out_json` a valid pointer.
 */
enum LexicoreStatus lexicore_solve(const struct LexicoreGame *game,
                                   enum LexicoreObjective objective,
                                   char **out_json);

/**
 * Event log of a run, one JSON object per line. With `snapshots` each line
 * carries the imputation after the event.
 *
 * # Safety
 * `game` must be a live handle; `out_jsonl` a valid pointer.
 */
enum LexicoreStatus lexicore_trace(const struct LexicoreGame *game,
                                   enum LexicoreObjective objective,
                                   bool snapshots,
                                   char **out_jsonl);

/**
 * Labels every vertex and edge essential / viable / subpar.
 *
 * # Safety
 * `game` must be a live handle; `out_json` a valid pointer.
 */
enum LexicoreStatus lexicore_classify(const struct LexicoreGame *game, char **out_json);

/**
 * U-optimal and V-optimal core imputations.
 *
 * # Safety
 * `game` must be a live handle; `out_json` a valid pointer.
 */
enum LexicoreStatus lexicore_extremes(const struct LexicoreGame *game, char **out_json);

/**
 * Checks core membership of an imputation given as
 * `{"u": [...], "v": [...]}`. The report lands in `out_json`; a
 * non-core imputation is still `LEXICORE_STATUS_OK`; inspect `is_core`.
 *
 * # Safety
 * `game` must be a live handle; `imputation_json` a valid NUL-terminated
 * string; `out_json` a valid pointer.
 */
enum LexicoreStatus lexicore_check(const struct LexicoreGame *game,
                                   const char *imputation_json,
                                   char **out_json);

/**
 * Brute-force reference solution; fails with `LEXICORE_STATUS_GUARD_EXCEEDED`
 * on instances beyond desk scale.
 *
 * # Safety
 * `game` must be a live handle; `out_json` a valid pointer.
 */
enum LexicoreStatus lexicore_oracle_solve(const struct LexicoreGame *game,
                                          enum LexicoreObjective objective,
                                          char **out_json);

/**
 * Frees a string returned through any out-parameter. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been
 * freed yet.
 */
void lexicore_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEXICORE_H */
