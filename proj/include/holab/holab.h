/*
 * Copyright (c) 2026, The holab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the holab library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every function
 * returns a status; on failure holab_last_error() describes it. Strings
 * returned through char** must be released with holab_string_free. */

#ifndef HOLAB_HOLAB_H_
#define HOLAB_HOLAB_H_

#include <stdint.h>

#if defined(_WIN32)
#define HOLAB_API __declspec(dllexport)
#else
#define HOLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum holab_status {
  HOLAB_OK = 0,
  HOLAB_ERR_INVALID_ARGUMENT = 1,
  HOLAB_ERR_PARSE = 2,
  HOLAB_ERR_MALFORMED_TRANSITION = 3,
  HOLAB_ERR_HORIZON_EXCEEDED = 4,
  HOLAB_ERR_INSTANCE_TOO_LARGE = 5,
  HOLAB_ERR_INCOMPLETE_RUN = 6,
  HOLAB_ERR_PRECONDITION = 7,
  HOLAB_ERR_CONFIG_MISMATCH = 8,
  HOLAB_ERR_INTERNAL = 9
} holab_status;

typedef struct holab_predicate holab_predicate;
typedef struct holab_strategy holab_strategy;
typedef struct holab_collection holab_collection;
typedef struct holab_run holab_run;

HOLAB_API const char* holab_version(void);
/* Message of the last failure on this thread, or "" */
HOLAB_API const char* holab_last_error(void);
HOLAB_API void holab_string_free(char* s);

/* Caps for exhaustive work on this thread; 0 keeps the current value. */
HOLAB_API void holab_set_limits(uint64_t max_collections, uint64_t max_states);

/* Predicates: "total", "crash:F=1", "broadcast:B=1", "initial:F=1", "lost1". */
HOLAB_API holab_status holab_predicate_parse(const char* descriptor, uint32_t n,
                                             uint32_t horizon, holab_predicate** out);
HOLAB_API void holab_predicate_free(holab_predicate* p);
HOLAB_API holab_status holab_predicate_descriptor(const holab_predicate* p, char** out);
HOLAB_API holab_status holab_predicate_contains(const holab_predicate* p,
                                                const holab_collection* c, int* out);
HOLAB_API holab_status holab_predicate_sample(const holab_predicate* p, uint64_t seed,
                                              holab_collection** out);
HOLAB_API holab_status holab_predicate_extend(const holab_predicate* p,
                                              const holab_collection* member,
                                              uint32_t extra_rounds,
                                              holab_collection** out);
/* {"predicate":..,"count":..,"members":[collection...]} */
HOLAB_API holab_status holab_predicate_enumerate_json(const holab_predicate* p, char** out);
HOLAB_API holab_status holab_predicate_round_symmetric(const holab_predicate* p, int* out);

/* Strategies: "nf:F=1", "pc:F=1", "asym", "asym:at-least", "cfdom", "rcdom",
 * "carefree:[{0,1},{0,1,2}]". context may be NULL except for cfdom/rcdom. */
HOLAB_API holab_status holab_strategy_parse(const char* descriptor, uint32_t n,
                                            const holab_predicate* context,
                                            holab_strategy** out);
HOLAB_API void holab_strategy_free(holab_strategy* s);
HOLAB_API holab_status holab_strategy_descriptor(const holab_strategy* s, char** out);

HOLAB_API holab_status holab_collection_from_json(const char* json, holab_collection** out);
HOLAB_API holab_status holab_collection_to_json(const holab_collection* c, char** out);
HOLAB_API holab_status holab_collection_total(uint32_t n, uint32_t horizon,
                                              holab_collection** out);
HOLAB_API void holab_collection_free(holab_collection* c);
/* The member extended by the rounds the strategy may read ahead. */
HOLAB_API holab_status holab_simulation_collection(const holab_predicate* p,
                                                   const holab_strategy* s,
                                                   const holab_collection* member,
                                                   holab_collection** out);

HOLAB_API holab_status holab_run_standard(const holab_collection* cho, holab_run** out);
/* target 0 means the collection horizon. info receives
 * {"target":..,"blocked":null|{"at":..,"stuck":[..]},...}; trace_jsonl may be NULL. */
HOLAB_API holab_status holab_run_earliest(const holab_strategy* s,
                                          const holab_collection* cdel, uint32_t target,
                                          holab_run** out, char** info, char** trace_jsonl);
/* delay_bound 0 means 4n. */
HOLAB_API holab_status holab_run_fair(const holab_strategy* s, const holab_collection* cdel,
                                      uint64_t seed, uint32_t delay_bound, uint32_t target,
                                      holab_run** out, char** info, char** trace_jsonl);
/* horizon 0 infers it from the run. */
HOLAB_API holab_status holab_run_from_json(const char* json, uint32_t horizon,
                                           holab_run** out);
HOLAB_API holab_status holab_run_to_json(const holab_run* run, char** out);
HOLAB_API holab_status holab_run_legality_json(const holab_run* run, char** out);
HOLAB_API holab_status holab_run_of_collection(const holab_run* run,
                                               const holab_collection* cdel, int* out);
/* {"violations":[{"index":..,"detail":..}]} */
HOLAB_API holab_status holab_run_strategy_check_json(const holab_run* run,
                                                     const holab_strategy* s,
                                                     uint32_t target, char** out);
HOLAB_API void holab_run_free(holab_run* run);

/* horizon 0 extracts every round all processes completed. */
HOLAB_API holab_status holab_extract_ho(const holab_run* run, uint32_t horizon,
                                        holab_collection** out);

/* mode: "exhaustive" or "sampled:<count>:<seed>". Reports are JSON. */
HOLAB_API holab_status holab_check_validity(const holab_strategy* s,
                                            const holab_predicate* p, const char* mode,
                                            char** report, int* proved_invalid);
HOLAB_API holab_status holab_pho_json(const holab_strategy* s, const holab_predicate* p,
                                      const char* mode, char** out);
/* verdict: 0 equivalent, 1 f2 dominates f1, 2 f1 dominates f2, 3 incomparable. */
HOLAB_API holab_status holab_check_domination(const holab_strategy* f1,
                                              const holab_strategy* f2,
                                              const holab_predicate* p, const char* mode,
                                              char** report, int* verdict);
/* kind: "nf", "B" or "pc". */
HOLAB_API holab_status holab_characterize(const holab_collection* cho, const char* kind,
                                          uint32_t param, char** report, int* holds);
/* variant: "literal" or "at-least". */
HOLAB_API holab_status holab_asym_claim(uint32_t n, uint32_t horizon, const char* mode,
                                        uint32_t seeds_per_collection, uint64_t seed,
                                        uint32_t delay_bound, const char* variant,
                                        char** report, int* holds);

#ifdef __cplusplus
}
#endif

#endif /* HOLAB_HOLAB_H_ */
