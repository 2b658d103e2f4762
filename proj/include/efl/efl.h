#ifndef EFL_EFL_H
#define EFL_EFL_H

/*
 * C interface to the EFL library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns an efl_status; on failure a message is
 * available from efl_last_error() on the calling thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * efl_string_free. All functions are safe to call from several threads on
 * distinct handles; handles themselves are not synchronized.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define EFL_API __attribute__((visibility("default")))
#else
#define EFL_API
#endif

typedef enum efl_status {
  EFL_OK = 0,
  EFL_ERR_ARGUMENT = 1, /* null handle, bad flag value, precondition */
  EFL_ERR_PARSE = 2,    /* malformed formula, label or JSON */
  EFL_ERR_SCHEMA = 3,   /* well-formed input describing an invalid object */
  EFL_ERR_SEMANTICS = 4, /* unknown world or agent, undenoted nominal */
  EFL_ERR_INTERNAL = 5
} efl_status;

typedef enum efl_verdict { EFL_PROVED = 0, EFL_REFUTED = 1, EFL_UNKNOWN = 2 } efl_verdict;

typedef struct efl_config efl_config;
typedef struct efl_formula efl_formula;
typedef struct efl_sequent efl_sequent;
typedef struct efl_model efl_model;
typedef struct efl_derivation efl_derivation;
typedef struct efl_hilbert efl_hilbert;
typedef struct efl_result efl_result;

EFL_API const char* efl_last_error(void);
EFL_API const char* efl_version(void);
EFL_API void efl_string_free(char* s);

/* Logic, frame rules and search limits. Defaults: K, no frame rules, cut
   allowed when checking, fuel 10000, seed 0, no blocking. */
EFL_API efl_status efl_config_new(efl_config** out);
EFL_API void efl_config_free(efl_config* c);
EFL_API efl_status efl_config_set_logic(efl_config* c, const char* logic); /* "k" | "s4" | "s5" */
/* "atoms => atoms", or one of the names "irr", "sym", "refl". */
EFL_API efl_status efl_config_add_frame(efl_config* c, const char* spec);
EFL_API efl_status efl_config_set_cut(efl_config* c, int allow);
EFL_API efl_status efl_config_set_fuel(efl_config* c, uint64_t fuel);
EFL_API efl_status efl_config_set_seed(efl_config* c, uint64_t seed);
EFL_API efl_status efl_config_set_blocking(efl_config* c, int on);

EFL_API efl_status efl_formula_parse(const char* text, efl_formula** out);
EFL_API void efl_formula_free(efl_formula* f);
EFL_API efl_status efl_formula_render(const efl_formula* f, int sugar, char** out);
EFL_API size_t efl_formula_size(const efl_formula* f);

/* =>_{0} 0:@n phi with n fresh for phi. */
EFL_API efl_status efl_sequent_from_formula(const efl_formula* f, efl_sequent** out);
EFL_API efl_status efl_sequent_parse(const char* json, efl_sequent** out);
EFL_API void efl_sequent_free(efl_sequent* s);
EFL_API efl_status efl_sequent_to_json(const efl_sequent* s, char** out);
EFL_API efl_status efl_sequent_to_text(const efl_sequent* s, char** out);
/* Formulaic translation at the given label, or at the root when label is NULL. */
EFL_API efl_status efl_sequent_translate(const efl_sequent* s, const char* label, int sugar, char** out);

EFL_API efl_status efl_model_parse(const char* json, efl_model** out);
EFL_API void efl_model_free(efl_model* m);
EFL_API efl_status efl_model_satisfies(const efl_model* m, const char* world, const char* agent,
                                       const efl_formula* f, int* out);
EFL_API efl_status efl_model_in_class(const efl_model* m, const efl_config* c, int* out);

/* Proof search on a sequent. */
EFL_API efl_status efl_prove(const efl_sequent* s, const efl_config* c, efl_result** out);
EFL_API void efl_result_free(efl_result* r);
EFL_API efl_verdict efl_result_verdict(const efl_result* r);
EFL_API uint64_t efl_result_rules(const efl_result* r);
/* Copies the derivation out of a Proved result. */
EFL_API efl_status efl_result_derivation(const efl_result* r, efl_derivation** out);
/* Model and assignment of a Refuted result, as JSON. */
EFL_API efl_status efl_result_countermodel(const efl_result* r, char** out);

/* Exhaustive countermodel search within the bounds. *found is set to 1 and
   *countermodel (if not NULL) to JSON when one exists. */
EFL_API efl_status efl_oracle(const efl_sequent* s, const efl_config* c, int max_worlds, int max_agents, int* found,
                              char** countermodel);

EFL_API efl_status efl_derivation_parse(const char* json, efl_derivation** out);
EFL_API void efl_derivation_free(efl_derivation* d);
EFL_API efl_status efl_derivation_to_json(const efl_derivation* d, char** out);
EFL_API int efl_derivation_height(const efl_derivation* d);
/* *ok is 1 when the derivation checks; otherwise *report (if not NULL) lists the violations. */
EFL_API efl_status efl_derivation_check(const efl_derivation* d, const efl_config* c, int* ok, char** report);

EFL_API efl_status efl_hilbert_parse(const char* json, efl_hilbert** out);
EFL_API void efl_hilbert_free(efl_hilbert* h);
EFL_API efl_status efl_hilbert_to_json(const efl_hilbert* h, char** out);
EFL_API efl_status efl_hilbert_conclusion(const efl_hilbert* h, int sugar, char** out);
EFL_API efl_status efl_hilbert_check(const efl_hilbert* h, const efl_config* c, int* ok, char** report);

/* Hilbert proof of the root translation of a checking derivation. */
EFL_API efl_status efl_elaborate(const efl_derivation* d, const efl_config* c, efl_hilbert** out);
/* Derivation of =>_{0} 0:@n phi from a checking proof of phi, n fresh.
   When expected is not NULL the proof must conclude exactly that formula. */
EFL_API efl_status efl_embed(const efl_hilbert* h, const efl_formula* expected, const efl_config* c,
                             efl_derivation** out);

#ifdef __cplusplus
}
#endif

#endif
