#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "tdtsynth/tdtsynth.h"

namespace {

std::string corpus(const char* name) { return std::string(TDT_CORPUS) + "/" + name; }

tdt_spec* load(const char* name) {
  tdt_spec* s = nullptr;
  REQUIRE(tdt_spec_load(corpus(name).c_str(), &s) == TDT_OK);
  return s;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  tdt_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("synthesize, run and verify through the C interface") {
  tdt_spec* spec = load("spec1.tap");
  CHECK(tdt_spec_is_convolution(spec));
  CHECK(tdt_spec_state_count(spec) == 3);

  tdt_synth_options o;
  tdt_synth_options_init(&o);
  CHECK(o.delay == 1);
  tdt_result* r = nullptr;
  REQUIRE(tdt_synthesize(spec, nullptr, &o, &r) == TDT_OK);
  CHECK(tdt_result_realizable(r));
  CHECK(tdt_result_vertices(r) == 10);
  CHECK(tdt_result_counterexample_length(r) == 0);

  tdt_transducer* t = nullptr;
  REQUIRE(tdt_result_transducer(r, &t) == TDT_OK);
  char* out = nullptr;
  REQUIRE(tdt_run(t, "f(f(a,a),a)", &out) == TDT_OK);
  CHECK(take(out) == "f(f(b,b),b)");

  size_t checked = 0, failures = 1;
  char* report = nullptr;
  REQUIRE(tdt_verify(spec, t, 3, nullptr, &checked, &failures, &report) == TDT_OK);
  CHECK(checked == 26);
  CHECK(failures == 0);
  CHECK(take(report).empty());

  char* text = nullptr;
  REQUIRE(tdt_transducer_to_string(t, &text) == TDT_OK);
  std::string printed = take(text);
  tdt_transducer* back = nullptr;
  REQUIRE(tdt_transducer_parse(printed.c_str(), &back) == TDT_OK);
  CHECK(tdt_transducer_state_count(back) == tdt_transducer_state_count(t));
  tdt_transducer_free(back);

  char* dot = nullptr;
  REQUIRE(tdt_game_dot(spec, nullptr, &o, &dot) == TDT_OK);
  CHECK(take(dot).rfind("digraph", 0) == 0);

  tdt_transducer_free(t);
  tdt_result_free(r);
  tdt_spec_free(spec);
}

TEST_CASE("unrealizable specs and stay explanations") {
  tdt_spec* par = load("par.tap");
  tdt_synth_options o;
  tdt_synth_options_init(&o);
  o.unbounded = 1;
  o.explain_stay = 1;
  tdt_result* r = nullptr;
  REQUIRE(tdt_synthesize(par, nullptr, &o, &r) == TDT_OK);
  CHECK_FALSE(tdt_result_realizable(r));
  CHECK(tdt_result_counterexample_length(r) > 0);
  CHECK(tdt_result_counterexample_step(r, 0) != nullptr);
  CHECK(tdt_result_counterexample_step(r, 100000) == nullptr);
  CHECK(tdt_result_stay_count(r) > 0);
  const char *vertex = nullptr, *fact = nullptr;
  int accepted = -1;
  REQUIRE(tdt_result_stay(r, 0, &vertex, &fact, &accepted) == TDT_OK);
  CHECK(std::string(fact).find("x=") == 0);
  CHECK(accepted == 0);
  tdt_transducer* t = nullptr;
  CHECK(tdt_result_transducer(r, &t) == TDT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tdt_last_error()).find("unrealizable") != std::string::npos);
  tdt_result_free(r);

  o.explain_stay = 0;
  REQUIRE(tdt_synthesize(par, nullptr, &o, &r) == TDT_OK);
  CHECK(tdt_result_stay_count(r) == 0);
  tdt_result_free(r);
  tdt_spec_free(par);
}

TEST_CASE("domains") {
  tdt_spec* spec = load("ex5.tap");
  tdt_spec* dom = load("ex5_dom.ta");
  CHECK_FALSE(tdt_spec_is_convolution(dom));
  tdt_result* r = nullptr;
  REQUIRE(tdt_synthesize(spec, dom, nullptr, &r) == TDT_OK);
  CHECK(tdt_result_realizable(r));
  tdt_result_free(r);
  CHECK(tdt_synthesize(dom, nullptr, nullptr, &r) == TDT_ERR_INVALID_ARGUMENT);
  CHECK(tdt_synthesize(spec, spec, nullptr, &r) == TDT_ERR_INVALID_ARGUMENT);
  tdt_spec_free(dom);
  tdt_spec_free(spec);
}

TEST_CASE("error codes") {
  tdt_spec* s = nullptr;
  CHECK(tdt_spec_load("/nonexistent/file.tap", &s) == TDT_ERR_IO);
  CHECK(std::string(tdt_last_error()).size() > 0);
  CHECK(tdt_spec_parse("input f:2\nstates q\nq zz -> q\n", &s) == TDT_ERR_PARSE);
  CHECK(std::string(tdt_last_error()).find("line") != std::string::npos);
  CHECK(tdt_spec_load(nullptr, &s) == TDT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tdt_status_name(TDT_ERR_BUDGET)) == "budget exceeded");

  tdt_transducer* t = nullptr;
  REQUIRE(tdt_transducer_load(corpus("delg.tdt").c_str(), &t) == TDT_OK);
  char* out = nullptr;
  REQUIRE(tdt_run(t, "f(g(h(a)),a)", &out) == TDT_OK);
  CHECK(take(out) == "f(h(a),a)");
  CHECK(tdt_run(t, "f(a)", &out) == TDT_ERR_PARSE);
  CHECK(tdt_transducer_save(t, "/nonexistent/dir/x.tdt") == TDT_ERR_IO);
  tdt_transducer_free(t);

  tdt_transducer* partial = nullptr;
  REQUIRE(tdt_transducer_parse("input f:2 a:0\noutput a:0\nstates q\ninitial q\nq a -> a\n", &partial) == TDT_OK);
  CHECK(tdt_run(partial, "f(a,a)", &out) == TDT_ERR_STUCK);
  tdt_transducer_free(partial);

  tdt_spec* spec = load("hb.tap");
  tdt_synth_options o;
  tdt_synth_options_init(&o);
  o.unbounded = 1;
  o.max_vertices = 3;
  tdt_result* r = nullptr;
  CHECK(tdt_synthesize(spec, nullptr, &o, &r) == TDT_ERR_BUDGET);
  o.unbounded = 0;
  o.delay = -1;
  CHECK(tdt_synthesize(spec, nullptr, &o, &r) == TDT_ERR_INVALID_ARGUMENT);
  tdt_spec_free(spec);
}
