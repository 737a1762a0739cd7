#ifndef LLL_H
#define LLL_H

/* C interface of the resampling library. Every function returns an
 * lll_status; on failure lll_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with lll_string_free. Rationals are passed as "a" or "a/b". */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LLL_BUILDING_LIBRARY)
#    define LLL_API __declspec(dllexport)
#  else
#    define LLL_API __declspec(dllimport)
#  endif
#else
#  define LLL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lll_status {
  LLL_OK = 0,
  LLL_ERR_INVALID_ARGUMENT = 1,
  LLL_ERR_PARSE = 2,
  LLL_ERR_INCONSISTENT = 3,
  LLL_ERR_CONDITION = 4,
  LLL_ERR_BUDGET = 5,
  LLL_ERR_THRESHOLD = 6,
  LLL_ERR_OUT_OF_RANGE = 7,
  LLL_ERR_TAPE = 8,
  LLL_ERR_INTERNAL = 9
} lll_status;

typedef enum lll_extract_mode { LLL_EXTRACT_EXACT = 0, LLL_EXTRACT_MONTE_CARLO = 1 } lll_extract_mode;

/* A finite instance (variables, events, weights, epsilon). */
typedef struct lll_instance lll_instance;
/* An infinite instance given by enumerators: a built-in family or a finite
 * instance viewed as one. */
typedef struct lll_family lll_family;

LLL_API const char* lll_version(void);
LLL_API const char* lll_last_error(void);
LLL_API const char* lll_status_name(lll_status status);
LLL_API void lll_string_free(char* s);

/* ---- finite instances ---- */

LLL_API lll_status lll_instance_load(const char* path, lll_instance** out);
LLL_API lll_status lll_instance_parse(const char* text, lll_instance** out);
LLL_API void lll_instance_free(lll_instance* inst);
LLL_API lll_status lll_instance_counts(const lll_instance* inst, size_t* variables, size_t* events);

/* Per-event table of the condition; *pass is 1 when every row holds. */
LLL_API lll_status lll_check(const lll_instance* inst, int with_slack, int* pass, char** report);

/* Runs the finite algorithm. max_steps 0 selects the default budget.
 * values (may be NULL) receives one value per variable. On budget
 * exhaustion returns LLL_ERR_BUDGET and still fills the outputs.
 * log_text (may be NULL) receives the execution log. */
LLL_API lll_status lll_solve(const lll_instance* inst, uint64_t seed, uint64_t max_steps, uint32_t* values,
                             size_t values_len, uint64_t* resamples, char** report, char** log_text);

typedef struct lll_stats_options {
  uint64_t runs;          /* replicas, seeds seed_base + r */
  uint64_t seed_base;
  const char* stab_eps;   /* failure probability for the stabilization columns */
  uint64_t stab_vars;     /* variables 0 .. stab_vars-1 get a stabilization row */
} lll_stats_options;

LLL_API void lll_stats_options_default(lll_stats_options* opts);
/* CSV: section,key,runs,mean,ci,bound,n,ok */
LLL_API lll_status lll_stats(const lll_instance* inst, const lll_stats_options* opts, char** csv);

/* Witness tree of resample `step` (1-based) of a parsed log. */
LLL_API lll_status lll_witness_tree(const lll_instance* inst, const char* log_text, uint64_t step, char** report);

/* ---- infinite instances ---- */

/* name: none | single-bit | chain | uniform-chain | instance. m and eps
 * apply to uniform-chain, path to instance. eps may be NULL (1/10). */
LLL_API lll_status lll_family_create(const char* name, uint32_t m, const char* eps, const char* path,
                                     lll_family** out);
LLL_API void lll_family_free(lll_family* fam);

/* Snapshot lines "prefix <stage> <v_0> ... <v_stage>" for stages 0..upto. */
LLL_API lll_status lll_stages(const lll_family* fam, uint64_t upto, uint64_t seed, char** text);

typedef struct lll_extract_options {
  lll_extract_mode mode;
  uint32_t depth;        /* exact: tape prefixes of at most depth bits */
  uint64_t replicas;     /* monte carlo */
  uint64_t seed;
  const char* margin;    /* monte carlo pass fraction */
  uint32_t threads;      /* 0: hardware concurrency */
} lll_extract_options;

LLL_API void lll_extract_options_default(lll_extract_options* opts);
/* Extracts a_0 .. a_{length-1}. values (may be NULL) receives them. On a
 * threshold failure returns LLL_ERR_THRESHOLD with the achieved masses in
 * lll_last_error(). */
LLL_API lll_status lll_extract(const lll_family* fam, uint64_t length, const lll_extract_options* opts,
                               uint32_t* values, size_t values_len, char** report);

typedef struct lll_avoid_options {
  const char* alpha;      /* sparsity of the forbidden set */
  const char* epsilon;
  const char* delta;      /* NULL: (1 - alpha) / 8 */
  const char* alpha_prime;/* NULL: alpha + (1 - alpha) / 4 */
  int bi_infinite;        /* 1D: index positions of Z by 0, -1, 1, -2, ... */
  uint64_t replicas;
  uint64_t seed;
  const char* margin;
  uint32_t threads;
} lll_avoid_options;

LLL_API void lll_avoid_options_default(lll_avoid_options* opts);
/* forbidden: "zero-runs", "periodic" or a word file. *ok is 1 when every
 * window of length >= N avoids the set. */
LLL_API lll_status lll_avoid_1d(const char* forbidden, uint64_t length, const lll_avoid_options* opts, int* ok,
                                uint64_t* min_length, char** report);
/* forbidden: "zero-rects" or a pattern file. */
LLL_API lll_status lll_avoid_2d(const char* forbidden, int64_t radius, const lll_avoid_options* opts, int* ok,
                                uint64_t* min_length, char** report);

/* Smallest N with (1-eps) 2^-beta (1 - 2^(-gamma N) / (1 - 2^-gamma)) >= 1/2. */
LLL_API lll_status lll_min_clause_size(const char* alpha, const char* eps, uint64_t* n);

#ifdef __cplusplus
}
#endif

#endif
