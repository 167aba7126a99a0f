#ifndef TDTSYNTH_H
#define TDTSYNTH_H

#include <stddef.h>

#if defined(TDTSYNTH_BUILDING)
#define TDT_API __attribute__((visibility("default")))
#else
#define TDT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tdt_spec tdt_spec;             /* automaton: a spec (.tap) or a domain (.ta) */
typedef struct tdt_transducer tdt_transducer; /* deterministic top-down tree transducer */
typedef struct tdt_result tdt_result;         /* outcome of a synthesis call */

typedef enum {
  TDT_OK = 0,
  TDT_ERR_IO = 1,
  TDT_ERR_PARSE = 2,
  TDT_ERR_INVALID_ARGUMENT = 3,
  TDT_ERR_BUDGET = 4,
  TDT_ERR_STUCK = 5,
  TDT_ERR_INTERNAL = 6
} tdt_status;

typedef struct {
  int delay;           /* lookahead bound k, ignored when unbounded */
  int unbounded;       /* nonzero: unbounded game with stay moves */
  size_t max_vertices; /* exploration budget */
  int explain_stay;    /* nonzero: record one explanation per saturated vertex */
} tdt_synth_options;

/* Message of the last failed call on this thread; empty after success. */
TDT_API const char* tdt_last_error(void);
TDT_API const char* tdt_status_name(tdt_status status);
/* Frees strings handed out by this library. */
TDT_API void tdt_string_free(char* s);

TDT_API tdt_status tdt_spec_load(const char* path, tdt_spec** out);
TDT_API tdt_status tdt_spec_parse(const char* text, tdt_spec** out);
TDT_API int tdt_spec_is_convolution(const tdt_spec* spec);
TDT_API size_t tdt_spec_state_count(const tdt_spec* spec);
TDT_API void tdt_spec_free(tdt_spec* spec);

TDT_API void tdt_synth_options_init(tdt_synth_options* options);
/* domain may be NULL (every input tree is valid). */
TDT_API tdt_status tdt_synthesize(const tdt_spec* spec, const tdt_spec* domain, const tdt_synth_options* options,
                                  tdt_result** out);
TDT_API int tdt_result_realizable(const tdt_result* result);
TDT_API size_t tdt_result_vertices(const tdt_result* result);
/* Losing play for Out when unrealizable, one step per entry. */
TDT_API size_t tdt_result_counterexample_length(const tdt_result* result);
TDT_API const char* tdt_result_counterexample_step(const tdt_result* result, size_t i);
TDT_API size_t tdt_result_stay_count(const tdt_result* result);
TDT_API tdt_status tdt_result_stay(const tdt_result* result, size_t i, const char** vertex, const char** factorization,
                                   int* accepted);
/* Copy of the synthesized transducer; TDT_ERR_INVALID_ARGUMENT when unrealizable. */
TDT_API tdt_status tdt_result_transducer(const tdt_result* result, tdt_transducer** out);
TDT_API void tdt_result_free(tdt_result* result);

TDT_API tdt_status tdt_transducer_load(const char* path, tdt_transducer** out);
TDT_API tdt_status tdt_transducer_parse(const char* text, tdt_transducer** out);
TDT_API tdt_status tdt_transducer_save(const tdt_transducer* t, const char* path);
TDT_API tdt_status tdt_transducer_to_string(const tdt_transducer* t, char** out);
TDT_API size_t tdt_transducer_state_count(const tdt_transducer* t);
TDT_API void tdt_transducer_free(tdt_transducer* t);

/* Output term of t on the input term; TDT_ERR_STUCK when no rule applies. */
TDT_API tdt_status tdt_run(const tdt_transducer* t, const char* input, char** out);
/* Checks t against spec on every (domain) input of depth <= depth. report
   receives one line per failure: term TAB verdict. Any out pointer may be NULL. */
TDT_API tdt_status tdt_verify(const tdt_spec* spec, const tdt_transducer* t, int depth, const tdt_spec* domain,
                              size_t* checked, size_t* failures, char** report);
/* DOT rendering of the solved game arena. */
TDT_API tdt_status tdt_game_dot(const tdt_spec* spec, const tdt_spec* domain, const tdt_synth_options* options,
                                char** out);

#ifdef __cplusplus
}
#endif

#endif
