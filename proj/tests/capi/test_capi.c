/* Drives the shared library from plain C. */

#include <stdio.h>
#include <string.h>

#include "efl/efl.h"

static int failures = 0;

#define EXPECT(cond)                                          \
  do {                                                        \
    if (!(cond)) {                                            \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                             \
    }                                                         \
  } while (0)

static efl_verdict prove_text(const char* text, efl_config* cfg) {
  efl_formula* f = NULL;
  efl_sequent* s = NULL;
  efl_result* r = NULL;
  efl_verdict v = EFL_UNKNOWN;
  if (efl_formula_parse(text, &f) == EFL_OK && efl_sequent_from_formula(f, &s) == EFL_OK &&
      efl_prove(s, cfg, &r) == EFL_OK) {
    v = efl_result_verdict(r);
  }
  efl_result_free(r);
  efl_sequent_free(s);
  efl_formula_free(f);
  return v;
}

int main(void) {
  efl_config* cfg = NULL;
  EXPECT(efl_config_new(&cfg) == EFL_OK);

  EXPECT(prove_text("@'n 'n", cfg) == EFL_PROVED);
  EXPECT(prove_text("p", cfg) == EFL_REFUTED);
  EXPECT(prove_text("@'n <F>'m -> @'m <F>'n", cfg) == EFL_REFUTED);
  EXPECT(efl_config_add_frame(cfg, "sym") == EFL_OK);
  EXPECT(prove_text("@'n <F>'m -> @'m <F>'n", cfg) == EFL_PROVED);

  EXPECT(efl_config_set_logic(cfg, "s9") != EFL_OK);
  EXPECT(strlen(efl_last_error()) > 0);
  EXPECT(efl_config_add_frame(cfg, "@'n'm") != EFL_OK);

  efl_formula* bad = NULL;
  EXPECT(efl_formula_parse("p &", &bad) == EFL_ERR_PARSE);
  EXPECT(bad == NULL);
  EXPECT(efl_formula_parse(NULL, &bad) == EFL_ERR_ARGUMENT);

  /* prove, export, reimport, check, elaborate, check */
  efl_config* plain = NULL;
  efl_config_new(&plain);
  efl_formula* f = NULL;
  efl_sequent* s = NULL;
  efl_result* r = NULL;
  efl_derivation* d = NULL;
  efl_derivation* back = NULL;
  efl_hilbert* h = NULL;
  char* json = NULL;
  char* text = NULL;
  int ok = 0;
  EXPECT(efl_formula_parse("@'n 'm -> []@'n 'm", &f) == EFL_OK);
  EXPECT(efl_formula_size(f) > 0);
  EXPECT(efl_formula_render(f, 1, &text) == EFL_OK);
  EXPECT(text && strcmp(text, "@'n 'm -> [] @'n 'm") == 0);
  efl_string_free(text);
  EXPECT(efl_sequent_from_formula(f, &s) == EFL_OK);
  EXPECT(efl_prove(s, plain, &r) == EFL_OK);
  EXPECT(efl_result_rules(r) > 0);
  EXPECT(efl_result_countermodel(r, &json) == EFL_ERR_ARGUMENT);
  EXPECT(efl_result_derivation(r, &d) == EFL_OK);
  EXPECT(efl_derivation_height(d) > 0);
  EXPECT(efl_derivation_to_json(d, &json) == EFL_OK);
  EXPECT(efl_derivation_parse(json, &back) == EFL_OK);
  efl_string_free(json);
  EXPECT(efl_derivation_check(back, plain, &ok, NULL) == EFL_OK && ok == 1);
  EXPECT(efl_elaborate(back, plain, &h) == EFL_OK);
  EXPECT(efl_hilbert_check(h, plain, &ok, NULL) == EFL_OK && ok == 1);
  EXPECT(efl_hilbert_conclusion(h, 0, &text) == EFL_OK);
  efl_string_free(text);
  EXPECT(efl_sequent_translate(s, NULL, 0, &text) == EFL_OK);
  efl_string_free(text);
  EXPECT(efl_sequent_translate(s, "0/'q:3", 0, &text) == EFL_ERR_ARGUMENT);

  /* embedding the elaborated proof gives a derivation that checks with cut */
  efl_derivation* e = NULL;
  EXPECT(efl_embed(h, NULL, plain, &e) == EFL_OK);
  EXPECT(efl_derivation_check(e, plain, &ok, NULL) == EFL_OK && ok == 1);
  EXPECT(efl_embed(h, f, plain, &e) == EFL_ERR_ARGUMENT);

  /* models and the oracle */
  efl_model* m = NULL;
  const char* model =
      "{\"version\":1,\"worlds\":[\"w\",\"v\"],\"agents\":[\"a\"],\"R\":{\"a\":[[\"w\",\"v\"]]},"
      "\"val\":{\"p\":[[\"v\",\"a\"]]},\"nominals\":{\"'n\":\"a\"}}";
  EXPECT(efl_model_parse(model, &m) == EFL_OK);
  efl_formula* box = NULL;
  efl_formula_parse("[]p", &box);
  EXPECT(efl_model_satisfies(m, "w", "a", box, &ok) == EFL_OK && ok == 1);
  EXPECT(efl_model_satisfies(m, "x", "a", box, &ok) == EFL_ERR_SEMANTICS);
  EXPECT(efl_model_in_class(m, plain, &ok) == EFL_OK && ok == 1);
  int found = 0;
  efl_sequent* bs = NULL;
  efl_sequent_from_formula(box, &bs);
  EXPECT(efl_oracle(bs, plain, 2, 2, &found, &json) == EFL_OK && found == 1);
  efl_string_free(json);
  EXPECT(efl_oracle(bs, plain, 0, 2, &found, NULL) == EFL_ERR_ARGUMENT);
  efl_model* empty = NULL;
  EXPECT(efl_model_parse("{\"version\":1,\"worlds\":[],\"agents\":[\"a\"]}", &empty) == EFL_ERR_SCHEMA);
  EXPECT(efl_model_parse("{\"version\":1,", &empty) == EFL_ERR_PARSE);

  efl_sequent_free(bs);
  efl_formula_free(box);
  efl_model_free(m);
  efl_derivation_free(e);
  efl_hilbert_free(h);
  efl_derivation_free(back);
  efl_derivation_free(d);
  efl_result_free(r);
  efl_sequent_free(s);
  efl_formula_free(f);
  efl_config_free(plain);
  efl_config_free(cfg);

  printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
