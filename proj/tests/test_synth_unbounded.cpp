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

bool has_idempotent_segment(Predicates& P, const LabeledPath& pi) {
  for (std::size_t a = 0; a < pi.length(); ++a)
    for (std::size_t b = a + 1; b <= pi.length() && b - 1 < pi.dirs.size(); ++b)
      if (is_idempotent(P, pi.slice(a, b, false), pi.dirs[b - 1])) return true;
  return false;
}

}  // namespace

TEST_CASE("path-recognizable relations") {
  auto A = load("spec1.tap");
  // every output path needs an f, so one path never suffices
  CHECK_FALSE(decide_path_recognizable(A, 0, LabeledPath{}));

  auto H = load("hb.tap");
  auto w = decide_path_recognizable(H, 0, LabeledPath{});
  REQUIRE(w);
  auto F = build_path_recognizable_tdt(*w);
  CHECK(is_path_recognizable_shape(F));
  CHECK(run_on(F, "g(g(a))") == "a");
  CHECK(run_on(F, "g(h(g(a)))") == "b");
  CHECK(verify_uniformizer(H, F, 7).ok());

  auto U = load("full.tap");
  auto wu = decide_path_recognizable(U, 0, LabeledPath{});
  REQUIRE(wu);
  auto FU = build_path_recognizable_tdt(*wu);
  CHECK(verify_uniformizer(U, FU, 4).ok());
}

TEST_CASE("forced prefix") {
  auto H = load("hb.tap");
  auto forced = parse_path("g.1.h", H.input());
  auto w = decide_path_recognizable(H, 0, forced);
  REQUIRE(w);
  auto F = build_path_recognizable_tdt(*w);
  CHECK(run_on(F, "g(h(a))") == "b");
  CHECK(run_on(F, "g(h(g(h(a))))") == "b");
  // the prefix g.1.g still allows both answers later on
  auto w2 = decide_path_recognizable(H, 0, parse_path("g.1.g", H.input()));
  REQUIRE(w2);
  auto F2 = build_path_recognizable_tdt(*w2);
  CHECK(run_on(F2, "g(g(a))") == "a");
  CHECK(run_on(F2, "g(g(h(a)))") == "b");
}

TEST_CASE("unbounded lookahead on a single path") {
  auto H = load("hb.tap");
  for (int k = 1; k <= 3; ++k) CHECK_FALSE(synthesize_bounded(H, k).realizable);
  auto r = synthesize_unbounded(H);
  REQUIRE(r.realizable);
  const auto& T = *r.transducer;
  CHECK(verify_uniformizer(H, T, 6).ok());
  bool fragment = false;
  for (std::size_t q = 0; q < T.state_count(); ++q) {
    auto s = static_cast<StateId>(q);
    if (T.state_name(s)[0] != 'p') continue;
    fragment = true;
    CHECK(is_path_recognizable_shape(T, reachable_states(T, s)));
  }
  CHECK(fragment);
  CHECK_FALSE(r.stay_explanations.empty());
  bool accepted = false;
  for (const auto& e : r.stay_explanations) {
    CHECK(e.factorization.find("y=") != std::string::npos);
    accepted |= e.accepted;
  }
  CHECK(accepted);
}

TEST_CASE("parity stays unrealizable") {
  auto r = synthesize_unbounded(load("par.tap"));
  CHECK_FALSE(r.realizable);
  CHECK_FALSE(r.counterexample.empty());
}

TEST_CASE("valid domain with unbounded lookahead") {
  auto A = load("ex5.tap");
  auto D = load("ex5_dom.ta");
  CHECK_FALSE(synthesize_unbounded(A).realizable);
  auto r = synthesize_unbounded(A, &D);
  REQUIRE(r.realizable);
  CHECK(verify_uniformizer(A, *r.transducer, 4, &D).ok());
}

TEST_CASE("corpus: bounded realizability implies unbounded") {
  for (std::string name : {"spec1.tap", "id.tap", "par.tap", "hb.tap", "look.tap", "lookleft.tap", "full.tap"}) {
    CAPTURE(name);
    auto A = load(name);
    bool bounded = false;
    for (int k = 1; k <= 3; ++k) bounded |= synthesize_bounded(A, k).realizable;
    auto r = synthesize_unbounded(A);
    if (bounded) CHECK(r.realizable);
    if (r.realizable) CHECK(verify_uniformizer(A, *r.transducer, 4).ok());
  }
}

TEST_CASE("saturation and stay moves") {
  for (std::string name : {"hb.tap", "par.tap", "look.tap"}) {
    CAPTURE(name);
    auto A = load(name);
    Predicates P(A);
    auto arena = build_arena_unbounded(P);
    auto sol = solve(*arena);
    for (VertexId v : sol.vertices()) {
      const auto& gv = arena->vertex(v);
      if (gv.kind != GameVertex::Kind::OutPath) continue;
      const bool sat = arena->saturated(v);
      CHECK(sat == has_idempotent_segment(P, gv.pi));
      bool delay = false, stay = false;
      const auto& info = arena->move_info(v);
      const auto& moves = sol.moves(v);
      for (std::size_t m = 0; m < info.size(); ++m) {
        delay |= info[m].kind == MoveInfo::Kind::Delay;
        if (info[m].kind == MoveInfo::Kind::Stay) {
          stay = true;
          CHECK(moves[m].target == v);
          CHECK(arena->stay_witness(v) != nullptr);
        }
      }
      const bool inner = A.input().arity(gv.pi.labels.back()) > 0;
      CHECK(delay == (!sat && inner));
      if (!sat) CHECK_FALSE(stay);
    }
  }
}

TEST_CASE("random specs: unbounded transducers are uniformizers") {
  std::mt19937 rng(314);
  RankedAlphabet in({{"h", 1}, {"g", 1}, {"a", 0}});
  RankedAlphabet out({{"h", 1}, {"b", 0}, {"c", 0}});
  int realizable = 0;
  for (int round = 0; round < 60; ++round) {
    auto A = random_convolution_automaton(rng, in, out, 1 + round % 3, 0.7);
    SynthOptions o;
    o.delay = std::nullopt;
    o.max_vertices = 100'000;
    SynthResult r;
    try {
      r = synthesize(A, o);
    } catch (const BudgetExceeded&) {
      continue;
    }
    if (synthesize_bounded(A, 1).realizable) CHECK(r.realizable);
    if (!r.realizable) continue;
    ++realizable;
    auto report = verify_uniformizer(A, *r.transducer, 6);
    CHECK_MESSAGE(report.ok(), format_report(report, in));
  }
  CHECK(realizable > 5);
}
