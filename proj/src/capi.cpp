#include "tdtsynth/tdtsynth.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "tdtsynth/io.hpp"
#include "tdtsynth/oracle.hpp"
#include "tdtsynth/synth.hpp"

struct tdt_spec {
  tdt::TopDownAutomaton automaton;
};

struct tdt_transducer {
  tdt::Transducer transducer;
};

struct tdt_result {
  tdt::SynthResult result;
};

namespace {

thread_local std::string last_error;

tdt_status fail(tdt_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
tdt_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const tdt::StuckError& e) {
    return fail(TDT_ERR_STUCK, e.what());
  } catch (const tdt::ParseError& e) {
    return fail(TDT_ERR_PARSE, e.what());
  } catch (const tdt::IoError& e) {
    return fail(TDT_ERR_IO, e.what());
  } catch (const tdt::BudgetExceeded& e) {
    return fail(TDT_ERR_BUDGET, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TDT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(TDT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(TDT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TDT_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tdt::SynthOptions convert(const tdt_synth_options* o, const tdt_spec* domain) {
  tdt_synth_options defaults;
  tdt_synth_options_init(&defaults);
  if (!o) o = &defaults;
  if (!o->unbounded && o->delay < 0) throw std::invalid_argument("delay bound must be non-negative");
  tdt::SynthOptions s;
  s.delay = o->unbounded ? std::nullopt : std::optional<int>(o->delay);
  s.domain = domain ? &domain->automaton : nullptr;
  s.max_vertices = o->max_vertices ? o->max_vertices : defaults.max_vertices;
  return s;
}

#define TDT_REQUIRE(cond)                                              \
  do {                                                                 \
    if (!(cond)) return fail(TDT_ERR_INVALID_ARGUMENT, #cond " failed"); \
  } while (0)

}  // namespace

extern "C" {

const char* tdt_last_error(void) { return last_error.c_str(); }

const char* tdt_status_name(tdt_status status) {
  switch (status) {
    case TDT_OK: return "ok";
    case TDT_ERR_IO: return "io error";
    case TDT_ERR_PARSE: return "parse error";
    case TDT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TDT_ERR_BUDGET: return "budget exceeded";
    case TDT_ERR_STUCK: return "stuck";
    case TDT_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void tdt_string_free(char* s) { std::free(s); }

tdt_status tdt_spec_load(const char* path, tdt_spec** out) {
  TDT_REQUIRE(path && out);
  return guard([&] {
    *out = new tdt_spec{tdt::load_automaton(path)};
    return TDT_OK;
  });
}

tdt_status tdt_spec_parse(const char* text, tdt_spec** out) {
  TDT_REQUIRE(text && out);
  return guard([&] {
    *out = new tdt_spec{tdt::parse_automaton(text)};
    return TDT_OK;
  });
}

int tdt_spec_is_convolution(const tdt_spec* spec) { return spec && spec->automaton.is_convolution(); }
size_t tdt_spec_state_count(const tdt_spec* spec) { return spec ? spec->automaton.state_count() : 0; }
void tdt_spec_free(tdt_spec* spec) { delete spec; }

void tdt_synth_options_init(tdt_synth_options* options) {
  if (!options) return;
  options->delay = 1;
  options->unbounded = 0;
  options->max_vertices = 1000000;
  options->explain_stay = 0;
}

tdt_status tdt_synthesize(const tdt_spec* spec, const tdt_spec* domain, const tdt_synth_options* options,
                          tdt_result** out) {
  TDT_REQUIRE(spec && out);
  return guard([&] {
    if (!spec->automaton.is_convolution()) throw std::invalid_argument("the specification automaton needs an output alphabet");
    if (domain && domain->automaton.is_convolution()) throw std::invalid_argument("the domain must be a plain automaton");
    auto r = std::make_unique<tdt_result>(tdt_result{tdt::synthesize(spec->automaton, convert(options, domain))});
    if (!options || !options->explain_stay) r->result.stay_explanations.clear();
    *out = r.release();
    return TDT_OK;
  });
}

int tdt_result_realizable(const tdt_result* result) { return result && result->result.realizable; }
size_t tdt_result_vertices(const tdt_result* result) { return result ? result->result.vertices : 0; }

size_t tdt_result_counterexample_length(const tdt_result* result) {
  return result ? result->result.counterexample.size() : 0;
}

const char* tdt_result_counterexample_step(const tdt_result* result, size_t i) {
  if (!result || i >= result->result.counterexample.size()) return nullptr;
  return result->result.counterexample[i].c_str();
}

size_t tdt_result_stay_count(const tdt_result* result) { return result ? result->result.stay_explanations.size() : 0; }

tdt_status tdt_result_stay(const tdt_result* result, size_t i, const char** vertex, const char** factorization,
                           int* accepted) {
  TDT_REQUIRE(result && i < result->result.stay_explanations.size());
  const auto& e = result->result.stay_explanations[i];
  if (vertex) *vertex = e.vertex.c_str();
  if (factorization) *factorization = e.factorization.c_str();
  if (accepted) *accepted = e.accepted;
  last_error.clear();
  return TDT_OK;
}

tdt_status tdt_result_transducer(const tdt_result* result, tdt_transducer** out) {
  TDT_REQUIRE(result && out);
  if (!result->result.transducer) return fail(TDT_ERR_INVALID_ARGUMENT, "no transducer: the specification is unrealizable");
  return guard([&] {
    *out = new tdt_transducer{*result->result.transducer};
    return TDT_OK;
  });
}

void tdt_result_free(tdt_result* result) { delete result; }

tdt_status tdt_transducer_load(const char* path, tdt_transducer** out) {
  TDT_REQUIRE(path && out);
  return guard([&] {
    *out = new tdt_transducer{tdt::load_transducer(path)};
    return TDT_OK;
  });
}

tdt_status tdt_transducer_parse(const char* text, tdt_transducer** out) {
  TDT_REQUIRE(text && out);
  return guard([&] {
    *out = new tdt_transducer{tdt::parse_transducer(text)};
    return TDT_OK;
  });
}

tdt_status tdt_transducer_save(const tdt_transducer* t, const char* path) {
  TDT_REQUIRE(t && path);
  return guard([&] {
    tdt::write_file(path, tdt::print_transducer(t->transducer));
    return TDT_OK;
  });
}

tdt_status tdt_transducer_to_string(const tdt_transducer* t, char** out) {
  TDT_REQUIRE(t && out);
  return guard([&] {
    *out = dup(tdt::print_transducer(t->transducer));
    return TDT_OK;
  });
}

size_t tdt_transducer_state_count(const tdt_transducer* t) { return t ? t->transducer.state_count() : 0; }
void tdt_transducer_free(tdt_transducer* t) { delete t; }

tdt_status tdt_run(const tdt_transducer* t, const char* input, char** out) {
  TDT_REQUIRE(t && input && out);
  return guard([&] {
    tdt::Tree in = tdt::parse_term(input, t->transducer.input());
    *out = dup(tdt::print_term(tdt::execute(t->transducer, in), t->transducer.output()));
    return TDT_OK;
  });
}

tdt_status tdt_verify(const tdt_spec* spec, const tdt_transducer* t, int depth, const tdt_spec* domain,
                      size_t* checked, size_t* failures, char** report) {
  TDT_REQUIRE(spec && t && depth >= 0);
  return guard([&] {
    if (!spec->automaton.is_convolution()) throw std::invalid_argument("the specification automaton needs an output alphabet");
    auto r = tdt::verify_uniformizer(spec->automaton, t->transducer, depth, domain ? &domain->automaton : nullptr);
    if (checked) *checked = r.checked;
    if (failures) *failures = r.failures.size();
    if (report) *report = dup(tdt::format_report(r, spec->automaton.input()));
    return TDT_OK;
  });
}

tdt_status tdt_game_dot(const tdt_spec* spec, const tdt_spec* domain, const tdt_synth_options* options, char** out) {
  TDT_REQUIRE(spec && out);
  return guard([&] {
    if (!spec->automaton.is_convolution()) throw std::invalid_argument("the specification automaton needs an output alphabet");
    tdt::SynthOptions s = convert(options, domain);
    std::unique_ptr<tdt::DomainView> view = s.domain ? std::make_unique<tdt::DomainView>(spec->automaton.input(), *s.domain)
                                                     : std::make_unique<tdt::DomainView>(spec->automaton.input());
    tdt::Predicates preds(spec->automaton, *view);
    tdt::GameOptions go;
    go.delay = s.delay;
    go.max_vertices = s.max_vertices;
    tdt::UniformizationArena arena(preds, go);
    tdt::Solution sol = tdt::solve(arena, tdt::SolveOptions{s.max_vertices});
    *out = dup(tdt::to_dot(arena, sol));
    return TDT_OK;
  });
}

}  // extern "C"
