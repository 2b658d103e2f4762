// Command-line front end. Talks to the library only through efl.h.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "efl/efl.h"

namespace {

enum Exit { kOk = 0, kNo = 1, kUnknown = 2, kUsage = 64, kData = 65, kInternal = 70 };

// Carries an exit code out of deeply nested helpers.
struct Abort {
  int code;
  std::string message;
};

int exit_for(efl_status s) {
  switch (s) {
    case EFL_OK: return kOk;
    case EFL_ERR_ARGUMENT:
    case EFL_ERR_PARSE:
    case EFL_ERR_SCHEMA:
    case EFL_ERR_SEMANTICS: return kData;
    case EFL_ERR_INTERNAL: break;
  }
  return kInternal;
}

void ok(efl_status s, const std::string& what) {
  if (s != EFL_OK) throw Abort{exit_for(s), what + ": " + efl_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Config = Handle<efl_config, efl_config_free>;
using FormulaH = Handle<efl_formula, efl_formula_free>;
using SequentH = Handle<efl_sequent, efl_sequent_free>;
using ModelH = Handle<efl_model, efl_model_free>;
using DerivationH = Handle<efl_derivation, efl_derivation_free>;
using HilbertH = Handle<efl_hilbert, efl_hilbert_free>;
using ResultH = Handle<efl_result, efl_result_free>;

std::string take(char* s) {
  std::string out = s ? s : "";
  efl_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Abort{kUsage, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "-" or empty means stdout.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Abort{kUsage, "cannot write " + path};
}

struct Options {
  std::string logic = "k";
  std::vector<std::string> frames;
  std::uint64_t fuel = 10000;
  std::uint64_t seed = 0;
  bool no_cut = false;
  bool blocking = false;
  bool sugar = false;
  std::string input;  // formula or file, depending on the command
  std::string batch;
  unsigned jobs = 0;
  std::string emit_derivation, emit_countermodel, output;
  std::string model, world, agent, at;
  std::string formula, hilbert;
  int max_worlds = 2, max_agents = 2;
};

Config make_config(const Options& o) {
  efl_config* raw = nullptr;
  ok(efl_config_new(&raw), "config");
  Config c(raw);
  ok(efl_config_set_logic(c.get(), o.logic.c_str()), "--logic");
  for (const auto& f : o.frames) ok(efl_config_add_frame(c.get(), f.c_str()), "--frame " + f);
  ok(efl_config_set_cut(c.get(), o.no_cut ? 0 : 1), "--no-cut");
  ok(efl_config_set_fuel(c.get(), o.fuel), "--fuel");
  ok(efl_config_set_seed(c.get(), o.seed), "--seed");
  ok(efl_config_set_blocking(c.get(), o.blocking ? 1 : 0), "--blocking");
  return c;
}

FormulaH parse_formula(const std::string& text) {
  efl_formula* f = nullptr;
  ok(efl_formula_parse(text.c_str(), &f), "formula");
  return FormulaH(f);
}

SequentH wrap(const efl_formula* f) {
  efl_sequent* s = nullptr;
  ok(efl_sequent_from_formula(f, &s), "sequent");
  return SequentH(s);
}

SequentH load_sequent(const std::string& path) {
  efl_sequent* s = nullptr;
  ok(efl_sequent_parse(read_file(path).c_str(), &s), path);
  return SequentH(s);
}

DerivationH load_derivation(const std::string& path) {
  efl_derivation* d = nullptr;
  ok(efl_derivation_parse(read_file(path).c_str(), &d), path);
  return DerivationH(d);
}

HilbertH load_hilbert(const std::string& path) {
  efl_hilbert* h = nullptr;
  ok(efl_hilbert_parse(read_file(path).c_str(), &h), path);
  return HilbertH(h);
}

const char* verdict_name(efl_verdict v) {
  switch (v) {
    case EFL_PROVED: return "Proved";
    case EFL_REFUTED: return "Refuted";
    case EFL_UNKNOWN: break;
  }
  return "Unknown";
}

int verdict_exit(efl_verdict v) { return v == EFL_PROVED ? kOk : v == EFL_REFUTED ? kNo : kUnknown; }

int run_prove(const efl_sequent* s, const efl_config* c, const Options& o) {
  efl_result* raw = nullptr;
  ok(efl_prove(s, c, &raw), "search");
  ResultH r(raw);
  const efl_verdict v = efl_result_verdict(r.get());
  std::cout << verdict_name(v) << "\n";
  std::cerr << "rule applications: " << efl_result_rules(r.get()) << "\n";
  if (v == EFL_PROVED && !o.emit_derivation.empty()) {
    efl_derivation* d = nullptr;
    ok(efl_result_derivation(r.get(), &d), "derivation");
    DerivationH dh(d);
    char* json = nullptr;
    ok(efl_derivation_to_json(dh.get(), &json), "derivation");
    write_output(o.emit_derivation, take(json));
  }
  if (v == EFL_REFUTED) {
    char* json = nullptr;
    ok(efl_result_countermodel(r.get(), &json), "countermodel");
    // Without a destination the countermodel is a diagnostic.
    if (o.emit_countermodel.empty()) {
      std::cerr << "countermodel:\n" << take(json);
    } else {
      write_output(o.emit_countermodel, take(json));
    }
  }
  return verdict_exit(v);
}

// One query per non-empty line ('#' starts a comment); results in input order.
int run_batch(const efl_config* c, const Options& o) {
  std::istringstream in(read_file(o.batch));
  std::vector<std::pair<std::size_t, std::string>> queries;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    queries.emplace_back(n, line.substr(first, line.find_last_not_of(" \t\r") - first + 1));
  }
  std::vector<std::string> verdicts(queries.size());
  std::vector<int> codes(queries.size(), kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < queries.size();) {
      efl_formula* f = nullptr;
      efl_sequent* s = nullptr;
      efl_result* r = nullptr;
      efl_status st = efl_formula_parse(queries[i].second.c_str(), &f);
      if (st == EFL_OK) st = efl_sequent_from_formula(f, &s);
      if (st == EFL_OK) st = efl_prove(s, c, &r);
      if (st == EFL_OK) {
        const efl_verdict v = efl_result_verdict(r);
        verdicts[i] = verdict_name(v);
        codes[i] = verdict_exit(v);
      } else {
        verdicts[i] = std::string("Error: ") + efl_last_error();
        codes[i] = exit_for(st);
      }
      efl_result_free(r);
      efl_sequent_free(s);
      efl_formula_free(f);
    }
  };
  unsigned jobs = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, queries.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int code = kOk;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    std::cout << queries[i].first << "\t" << verdicts[i] << "\t" << queries[i].second << "\n";
    code = std::max(code, codes[i]);
  }
  return code;
}

int run_check(const Options& o) {
  auto f = parse_formula(o.input);
  efl_model* raw = nullptr;
  ok(efl_model_parse(read_file(o.model).c_str(), &raw), o.model);
  ModelH m(raw);
  int truth = 0;
  ok(efl_model_satisfies(m.get(), o.world.c_str(), o.agent.c_str(), f.get(), &truth), "check");
  std::cout << (truth ? "true" : "false") << "\n";
  return truth ? kOk : kNo;
}

int run_oracle(const efl_config* c, const Options& o) {
  auto f = parse_formula(o.input);
  auto s = wrap(f.get());
  int found = 0;
  char* json = nullptr;
  ok(efl_oracle(s.get(), c, o.max_worlds, o.max_agents, &found, &json), "oracle");
  std::string model = take(json);
  if (!found) {
    std::cout << "no countermodel with at most " << o.max_worlds << " worlds and " << o.max_agents << " agents\n";
    return kOk;
  }
  write_output(o.emit_countermodel, model);
  return kNo;
}

int run_translate(const Options& o) {
  auto s = load_sequent(o.input);
  char* out = nullptr;
  ok(efl_sequent_translate(s.get(), o.at.empty() ? nullptr : o.at.c_str(), o.sugar ? 1 : 0, &out), "translate");
  std::cout << take(out) << "\n";
  return kOk;
}

int report(int good, char* text) {
  if (good) {
    std::cout << "ok\n";
    return kOk;
  }
  std::cerr << take(text);
  return kNo;
}

int run_check_derivation(const efl_config* c, const Options& o) {
  auto d = load_derivation(o.input);
  int good = 0;
  char* text = nullptr;
  ok(efl_derivation_check(d.get(), c, &good, &text), "check");
  return report(good, text);
}

int run_check_hilbert(const efl_config* c, const Options& o) {
  auto h = load_hilbert(o.input);
  int good = 0;
  char* text = nullptr;
  ok(efl_hilbert_check(h.get(), c, &good, &text), "check");
  return report(good, text);
}

int run_elaborate(const efl_config* c, const Options& o) {
  auto d = load_derivation(o.input);
  int good = 0;
  char* text = nullptr;
  ok(efl_derivation_check(d.get(), c, &good, &text), "check");
  if (!good) return report(good, text);
  efl_hilbert* raw = nullptr;
  ok(efl_elaborate(d.get(), c, &raw), "elaborate");
  HilbertH h(raw);
  char* json = nullptr;
  ok(efl_hilbert_to_json(h.get(), &json), "elaborate");
  write_output(o.output, take(json));
  return kOk;
}

int run_embed(const efl_config* c, const Options& o) {
  auto f = parse_formula(o.formula);
  auto h = load_hilbert(o.hilbert);
  int good = 0;
  char* text = nullptr;
  ok(efl_hilbert_check(h.get(), c, &good, &text), "check");
  if (!good) return report(good, text);
  efl_derivation* raw = nullptr;
  ok(efl_embed(h.get(), f.get(), c, &raw), "embed");
  DerivationH d(raw);
  char* json = nullptr;
  ok(efl_derivation_to_json(d.get(), &json), "embed");
  write_output(o.output, take(json));
  return kOk;
}

void system_flags(CLI::App* cmd, Options& o, bool search) {
  cmd->add_option("--logic", o.logic, "box logic: k, s4 or s5")
      ->check(CLI::IsMember({"k", "s4", "s5"}, CLI::ignore_case));
  cmd->add_option("--frame", o.frames, "regular implication \"atoms => atoms\", or irr, sym, refl")->allow_extra_args(false);
  if (search) {
    cmd->add_option("--fuel", o.fuel, "rule applications before giving up")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "tie-breaking seed");
    cmd->add_flag("--blocking", o.blocking, "experimental loop check for S4/S5");
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Epistemic logic of friendship: prover, checkers and proof translations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(efl_version()));

  auto* prove = app.add_subcommand("prove", "prove a formula");
  prove->add_option("formula", o.input, "formula");
  prove->add_option("--batch", o.batch, "file with one formula per line")->check(CLI::ExistingFile);
  prove->add_option("--jobs", o.jobs, "worker threads for --batch");
  prove->add_option("--emit-derivation", o.emit_derivation, "write the derivation here");
  prove->add_option("--emit-countermodel", o.emit_countermodel, "write the countermodel here");
  system_flags(prove, o, true);

  auto* prove_seq = app.add_subcommand("prove-seq", "prove a sequent file");
  prove_seq->add_option("file", o.input, "sequent file")->required();
  prove_seq->add_option("--emit-derivation", o.emit_derivation, "write the derivation here");
  prove_seq->add_option("--emit-countermodel", o.emit_countermodel, "write the countermodel here");
  system_flags(prove_seq, o, true);

  auto* check = app.add_subcommand("check", "evaluate a formula in a model");
  check->add_option("formula", o.input, "formula")->required();
  check->add_option("--model", o.model, "model file")->required();
  check->add_option("--world", o.world, "world id")->required();
  check->add_option("--agent", o.agent, "agent id")->required();

  auto* oracle = app.add_subcommand("oracle", "search all small models for a countermodel");
  oracle->add_option("formula", o.input, "formula")->required();
  oracle->add_option("--max-worlds", o.max_worlds, "world bound")->check(CLI::PositiveNumber);
  oracle->add_option("--max-agents", o.max_agents, "agent bound")->check(CLI::PositiveNumber);
  oracle->add_option("--emit-countermodel,-o", o.emit_countermodel, "write the countermodel here");
  system_flags(oracle, o, false);

  auto* translate = app.add_subcommand("translate", "formulaic translation of a sequent file");
  translate->add_option("file", o.input, "sequent file")->required();
  translate->add_option("--at", o.at, "label, default the root");
  translate->add_flag("--sugar", o.sugar, "render with derived connectives");

  auto* check_der = app.add_subcommand("check-derivation", "check a derivation file");
  check_der->add_option("file", o.input, "derivation file")->required();
  check_der->add_flag("--no-cut", o.no_cut, "reject cut");
  system_flags(check_der, o, false);

  auto* check_hil = app.add_subcommand("check-hilbert", "check a Hilbert proof file");
  check_hil->add_option("file", o.input, "Hilbert proof file")->required();
  system_flags(check_hil, o, false);

  auto* elaborate = app.add_subcommand("elaborate", "Hilbert proof of a derivation's translation");
  elaborate->add_option("file", o.input, "derivation file")->required();
  elaborate->add_option("-o,--output", o.output, "output file, default stdout");
  system_flags(elaborate, o, false);

  auto* embed = app.add_subcommand("embed", "derivation of =>_0 0:@n phi from a Hilbert proof of phi");
  embed->add_option("--formula", o.formula, "the proved formula")->required();
  embed->add_option("--hilbert", o.hilbert, "Hilbert proof file")->required();
  embed->add_option("-o,--output", o.output, "output file, default stdout");
  system_flags(embed, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (prove->parsed() && o.input.empty() == o.batch.empty()) {
      throw Abort{kUsage, "prove takes a formula or --batch FILE"};
    }
    Config c = make_config(o);
    if (prove->parsed()) {
      if (!o.batch.empty()) return run_batch(c.get(), o);
      auto f = parse_formula(o.input);
      auto s = wrap(f.get());
      return run_prove(s.get(), c.get(), o);
    }
    if (prove_seq->parsed()) {
      auto s = load_sequent(o.input);
      return run_prove(s.get(), c.get(), o);
    }
    if (check->parsed()) return run_check(o);
    if (oracle->parsed()) return run_oracle(c.get(), o);
    if (translate->parsed()) return run_translate(o);
    if (check_der->parsed()) return run_check_derivation(c.get(), o);
    if (check_hil->parsed()) return run_check_hilbert(c.get(), o);
    if (elaborate->parsed()) return run_elaborate(c.get(), o);
    if (embed->parsed()) return run_embed(c.get(), o);
  } catch (const Abort& a) {
    std::cerr << "efl: " << a.message << "\n";
    return a.code;
  } catch (const std::exception& e) {
    std::cerr << "efl: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
