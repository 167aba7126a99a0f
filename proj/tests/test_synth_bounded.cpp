#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tdtsynth/synth.hpp"

using namespace tdt;
using namespace tdt::testing;

namespace {

std::string run_on(const Transducer& T, const std::string& input) {
  return print_term(execute(T, parse_term(input, T.input())), T.output());
}

int verify_depth(const RankedAlphabet& in) {
  int max_arity = 0;
  for (std::size_t s = 0; s < in.size(); ++s) max_arity = std::max(max_arity, in.arity(static_cast<SymbolId>(s)));
  return max_arity >= 2 ? 4 : 7;
}

}  // namespace

TEST_CASE("same-domain spec with one step of lookahead") {
  auto A = load("spec1.tap");
  auto r = synthesize_bounded(A, 1);
  REQUIRE(r.realizable);
  CHECK(r.vertices == 10);
  REQUIRE(r.transducer);
  const auto& T = *r.transducer;
  CHECK(T.is_deterministic());
  CHECK(run_on(T, "a") == "b");
  CHECK(run_on(T, "f(a,a)") == "f(b,b)");
  CHECK(run_on(T, "f(f(a,a),a)") == "f(f(b,b),b)");
  auto report = verify_uniformizer(A, T, 4);
  CHECK(report.checked == count_trees(A.input(), 4));
  CHECK(report.ok());
}

TEST_CASE("identity is realizable without lookahead") {
  auto A = load("id.tap");
  for (int k : {0, 1, 2}) {
    auto r = synthesize_bounded(A, k);
    REQUIRE(r.realizable);
    for (const auto& t : enumerate_trees(A.input(), 3))
      CHECK(execute(*r.transducer, t) == t);
  }
}

TEST_CASE("inputs without any output") {
  auto A = parse_automaton(R"(input f:2 a:0
output b:0
states q
initial q
q a|b
)");
  auto r = synthesize_bounded(A, 2);
  CHECK_FALSE(r.realizable);
  CHECK_FALSE(r.transducer);
  CHECK_FALSE(r.counterexample.empty());
}

TEST_CASE("parity of the whole word is out of reach") {
  auto A = load("par.tap");
  for (int k = 0; k <= 3; ++k) {
    auto r = synthesize_bounded(A, k);
    CHECK_FALSE(r.realizable);
    CHECK(r.counterexample.size() >= 2);
  }
}

TEST_CASE("lookahead of two letters") {
  auto A = load("look.tap");
  CHECK_FALSE(synthesize_bounded(A, 1).realizable);
  auto r = synthesize_bounded(A, 2);
  REQUIRE(r.realizable);
  const auto& T = *r.transducer;
  CHECK(run_on(T, "g(h(a))") == "h(h(a))");
  CHECK(run_on(T, "h(g(g(a)))") == "g(g(g(a)))");
  CHECK(run_on(T, "a") == "a");
  bool relay = false;
  for (std::size_t q = 0; q < T.state_count(); ++q) relay |= T.state_name(static_cast<StateId>(q))[0] == 'd';
  CHECK(relay);
  int worst = 0;
  for (const auto& t : enumerate_trees(A.input(), 6)) worst = std::max(worst, max_delay(T, t));
  CHECK(worst == 1);
  CHECK(verify_uniformizer(A, T, 7).ok());
}

TEST_CASE("valid domain restriction") {
  auto A = load("ex5.tap");
  auto D = load("ex5_dom.ta");
  CHECK_FALSE(synthesize_bounded(A, 1).realizable);
  auto r = synthesize_bounded(A, 1, &D);
  REQUIRE(r.realizable);
  CHECK(r.vertices == 7);
  auto report = verify_uniformizer(A, *r.transducer, 4, &D);
  CHECK(report.checked > 0);
  CHECK(report.ok());
}

TEST_CASE("corpus: soundness, delay bound and monotonicity") {
  for (std::string name : {"spec1.tap", "id.tap", "par.tap", "hb.tap", "look.tap", "lookleft.tap", "full.tap"}) {
    CAPTURE(name);
    auto A = load(name);
    bool before = false;
    for (int k = 1; k <= 3; ++k) {
      Predicates P(A);
      auto arena = build_arena_bounded(P, k);
      auto sol = solve(*arena);
      CHECK(static_cast<double>(sol.vertex_count()) <= arena_size_bound(A, k));
      const bool now = sol.out_wins();
      if (before) CHECK(now);
      before = now;
      if (!now) continue;
      auto T = extract_transducer(*arena, sol);
      const int d = verify_depth(A.input());
      CHECK(verify_uniformizer(A, T, d).ok());
      for (const auto& t : enumerate_trees(A.input(), d - 1)) CHECK(max_delay(T, t) <= k);
    }
  }
}

TEST_CASE("random specs: extracted transducers are uniformizers") {
  std::mt19937 rng(2718);
  RankedAlphabet in({{"f", 2}, {"g", 1}, {"a", 0}});
  RankedAlphabet out({{"h", 2}, {"k", 1}, {"b", 0}});
  int realizable = 0;
  for (int round = 0; round < 120; ++round) {
    auto A = random_convolution_automaton(rng, in, out, 1 + round % 3, 0.75);
    bool before = false;
    for (int k = 1; k <= 2; ++k) {
      Predicates P(A);
      auto arena = build_arena_bounded(P, k, 200'000);
      Solution sol;
      try {
        sol = solve(*arena, SolveOptions{200'000});
      } catch (const BudgetExceeded&) {
        break;
      }
      if (before) CHECK(sol.out_wins());
      before = sol.out_wins();
      if (!sol.out_wins()) continue;
      ++realizable;
      auto T = extract_transducer(*arena, sol);
      auto report = verify_uniformizer(A, T, 3);
      CHECK_MESSAGE(report.ok(), format_report(report, in));
    }
  }
  CHECK(realizable > 10);
}
