#include "efl/efl.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "efl/io.hpp"
#include "efl/parser.hpp"
#include "efl/search.hpp"

struct efl_config {
  efl::SystemConfig system;
  efl::SearchConfig search;
};
struct efl_formula {
  efl::Formula f;
};
struct efl_sequent {
  efl::TreeSequent s;
};
struct efl_model {
  efl::Model m;
};
struct efl_derivation {
  efl::Derivation d;
};
struct efl_hilbert {
  efl::HilbertProof h;
};
struct efl_result {
  efl::SearchOutcome r;
};

namespace {

thread_local std::string last_error;

efl_status fail(efl_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
efl_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const efl::ParseError& e) {
    return fail(EFL_ERR_PARSE, e.what());
  } catch (const efl::SchemaError& e) {
    return fail(EFL_ERR_SCHEMA, e.what());
  } catch (const efl::SemanticsError& e) {
    return fail(EFL_ERR_SEMANTICS, e.what());
  } catch (const std::out_of_range& e) {
    return fail(EFL_ERR_SEMANTICS, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(EFL_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EFL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EFL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EFL_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class... P>
bool any_null(const P*... p) {
  return ((p == nullptr) || ...);
}

#define EFL_REQUIRE(...) \
  if (any_null(__VA_ARGS__)) return fail(EFL_ERR_ARGUMENT, "null argument")

template <class T, class... A>
efl_status make(T** out, A&&... a) {
  *out = new T{std::forward<A>(a)...};
  return EFL_OK;
}

efl::RenderMode mode(int sugar) { return sugar ? efl::RenderMode::Sugar : efl::RenderMode::Core; }

}  // namespace

extern "C" {

const char* efl_last_error(void) { return last_error.c_str(); }
const char* efl_version(void) { return "1.0.0"; }
void efl_string_free(char* s) { std::free(s); }

efl_status efl_config_new(efl_config** out) {
  EFL_REQUIRE(out);
  return guard([&] { return make(out); });
}
void efl_config_free(efl_config* c) { delete c; }

efl_status efl_config_set_logic(efl_config* c, const char* logic) {
  EFL_REQUIRE(c, logic);
  return guard([&] {
    c->system.spec.logic = efl::parse_box_logic(logic);
    return EFL_OK;
  });
}

efl_status efl_config_add_frame(efl_config* c, const char* spec) {
  EFL_REQUIRE(c, spec);
  return guard([&] {
    auto ri = efl::RegularImplication::parse(spec);
    if (!c->system.spec.has_rule(ri)) c->system.spec.theta.push_back(std::move(ri));
    return EFL_OK;
  });
}

efl_status efl_config_set_cut(efl_config* c, int allow) {
  EFL_REQUIRE(c);
  c->system.allow_cut = allow != 0;
  return EFL_OK;
}

efl_status efl_config_set_fuel(efl_config* c, uint64_t fuel) {
  EFL_REQUIRE(c);
  c->search.fuel = fuel;
  return EFL_OK;
}

efl_status efl_config_set_seed(efl_config* c, uint64_t seed) {
  EFL_REQUIRE(c);
  c->search.seed = seed;
  return EFL_OK;
}

efl_status efl_config_set_blocking(efl_config* c, int on) {
  EFL_REQUIRE(c);
  c->search.blocking = on != 0;
  return EFL_OK;
}

efl_status efl_formula_parse(const char* text, efl_formula** out) {
  EFL_REQUIRE(text, out);
  return guard([&] { return make(out, efl::parse_formula(text)); });
}
void efl_formula_free(efl_formula* f) { delete f; }

efl_status efl_formula_render(const efl_formula* f, int sugar, char** out) {
  EFL_REQUIRE(f, out);
  return guard([&] {
    *out = dup(efl::render_formula(f->f, mode(sugar)));
    return EFL_OK;
  });
}

size_t efl_formula_size(const efl_formula* f) { return f ? f->f.size() : 0; }

efl_status efl_sequent_from_formula(const efl_formula* f, efl_sequent** out) {
  EFL_REQUIRE(f, out);
  return guard([&] { return make(out, efl::formula_sequent(f->f)); });
}

efl_status efl_sequent_parse(const char* json, efl_sequent** out) {
  EFL_REQUIRE(json, out);
  return guard([&] { return make(out, efl::parse_sequent(json)); });
}
void efl_sequent_free(efl_sequent* s) { delete s; }

efl_status efl_sequent_to_json(const efl_sequent* s, char** out) {
  EFL_REQUIRE(s, out);
  return guard([&] {
    *out = dup(efl::render_sequent_json(s->s));
    return EFL_OK;
  });
}

efl_status efl_sequent_to_text(const efl_sequent* s, char** out) {
  EFL_REQUIRE(s, out);
  return guard([&] {
    *out = dup(efl::render_sequent(s->s));
    return EFL_OK;
  });
}

efl_status efl_sequent_translate(const efl_sequent* s, const char* label, int sugar, char** out) {
  EFL_REQUIRE(s, out);
  return guard([&] {
    const efl::Label alpha = label ? efl::Label::parse(label) : s->s.tree.root();
    if (!s->s.tree.contains(alpha)) return fail(EFL_ERR_ARGUMENT, "label " + alpha.str() + " is not in the tree");
    *out = dup(efl::render_formula(efl::formulaic_translation(s->s, alpha), mode(sugar)));
    return EFL_OK;
  });
}

efl_status efl_model_parse(const char* json, efl_model** out) {
  EFL_REQUIRE(json, out);
  return guard([&] { return make(out, efl::parse_model(json)); });
}
void efl_model_free(efl_model* m) { delete m; }

efl_status efl_model_satisfies(const efl_model* m, const char* world, const char* agent, const efl_formula* f,
                               int* out) {
  EFL_REQUIRE(m, world, agent, f, out);
  return guard([&] {
    *out = efl::satisfies(m->m, world, agent, f->f) ? 1 : 0;
    return EFL_OK;
  });
}

efl_status efl_model_in_class(const efl_model* m, const efl_config* c, int* out) {
  EFL_REQUIRE(m, c, out);
  return guard([&] {
    *out = efl::frame_in_class(m->m, c->system.spec) ? 1 : 0;
    return EFL_OK;
  });
}

efl_status efl_prove(const efl_sequent* s, const efl_config* c, efl_result** out) {
  EFL_REQUIRE(s, c, out);
  return guard([&] { return make(out, efl::prove(s->s, c->system, c->search)); });
}
void efl_result_free(efl_result* r) { delete r; }

efl_verdict efl_result_verdict(const efl_result* r) {
  if (!r) return EFL_UNKNOWN;
  switch (r->r.verdict) {
    case efl::Verdict::Proved: return EFL_PROVED;
    case efl::Verdict::Refuted: return EFL_REFUTED;
    case efl::Verdict::Unknown: break;
  }
  return EFL_UNKNOWN;
}

uint64_t efl_result_rules(const efl_result* r) { return r ? r->r.stats.rules : 0; }

efl_status efl_result_derivation(const efl_result* r, efl_derivation** out) {
  EFL_REQUIRE(r, out);
  if (!r->r.derivation) return fail(EFL_ERR_ARGUMENT, "the result carries no derivation");
  return guard([&] { return make(out, *r->r.derivation); });
}

efl_status efl_result_countermodel(const efl_result* r, char** out) {
  EFL_REQUIRE(r, out);
  if (!r->r.countermodel) return fail(EFL_ERR_ARGUMENT, "the result carries no countermodel");
  return guard([&] {
    *out = dup(efl::render_countermodel(*r->r.countermodel));
    return EFL_OK;
  });
}

efl_status efl_oracle(const efl_sequent* s, const efl_config* c, int max_worlds, int max_agents, int* found,
                      char** countermodel) {
  EFL_REQUIRE(s, c, found);
  if (max_worlds < 1 || max_agents < 1) return fail(EFL_ERR_ARGUMENT, "bounds must be positive");
  return guard([&] {
    auto cm = efl::find_countermodel(s->s, max_worlds, max_agents, c->system.spec);
    *found = cm ? 1 : 0;
    if (countermodel) *countermodel = cm ? dup(efl::render_countermodel(*cm)) : nullptr;
    return EFL_OK;
  });
}

efl_status efl_derivation_parse(const char* json, efl_derivation** out) {
  EFL_REQUIRE(json, out);
  return guard([&] { return make(out, efl::parse_derivation(json)); });
}
void efl_derivation_free(efl_derivation* d) { delete d; }

efl_status efl_derivation_to_json(const efl_derivation* d, char** out) {
  EFL_REQUIRE(d, out);
  return guard([&] {
    *out = dup(efl::render_derivation(d->d));
    return EFL_OK;
  });
}

int efl_derivation_height(const efl_derivation* d) { return d ? d->d.height() : -1; }

efl_status efl_derivation_check(const efl_derivation* d, const efl_config* c, int* ok, char** report) {
  EFL_REQUIRE(d, c, ok);
  return guard([&] {
    auto res = efl::check_derivation(d->d, c->system);
    *ok = res.ok() ? 1 : 0;
    if (report) *report = res.ok() ? nullptr : dup(res.report());
    return EFL_OK;
  });
}

efl_status efl_hilbert_parse(const char* json, efl_hilbert** out) {
  EFL_REQUIRE(json, out);
  return guard([&] { return make(out, efl::parse_hilbert(json)); });
}
void efl_hilbert_free(efl_hilbert* h) { delete h; }

efl_status efl_hilbert_to_json(const efl_hilbert* h, char** out) {
  EFL_REQUIRE(h, out);
  return guard([&] {
    *out = dup(efl::render_hilbert(h->h));
    return EFL_OK;
  });
}

efl_status efl_hilbert_conclusion(const efl_hilbert* h, int sugar, char** out) {
  EFL_REQUIRE(h, out);
  return guard([&] {
    *out = dup(efl::render_formula(h->h.conclusion(), mode(sugar)));
    return EFL_OK;
  });
}

efl_status efl_hilbert_check(const efl_hilbert* h, const efl_config* c, int* ok, char** report) {
  EFL_REQUIRE(h, c, ok);
  return guard([&] {
    auto res = efl::check_hilbert(h->h, c->system.spec);
    *ok = res.ok() ? 1 : 0;
    if (report) *report = res.ok() ? nullptr : dup(res.report());
    return EFL_OK;
  });
}

efl_status efl_elaborate(const efl_derivation* d, const efl_config* c, efl_hilbert** out) {
  EFL_REQUIRE(d, c, out);
  return guard([&] { return make(out, efl::elaborate_to_hilbert(d->d, c->system)); });
}

efl_status efl_embed(const efl_hilbert* h, const efl_formula* expected, const efl_config* c, efl_derivation** out) {
  EFL_REQUIRE(h, c, out);
  return guard([&] {
    const efl::Formula& phi = h->h.conclusion();
    if (expected && expected->f != phi) {
      return fail(EFL_ERR_ARGUMENT, "the proof concludes " + efl::render_formula(phi) + ", not " +
                                        efl::render_formula(expected->f));
    }
    // Same wrapping nominal the prover would use for phi.
    const efl::Nominal n = efl::formula_sequent(phi).suc.begin()->formula.name();
    return make(out, efl::embed_hilbert(h->h, efl::LabelTree::single(), efl::Label::root_label(0), n, c->system));
  });
}

}  // extern "C"
