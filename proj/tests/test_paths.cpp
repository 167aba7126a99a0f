#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tdtsynth/paths.hpp"

using namespace tdt;
using namespace tdt::testing;

namespace {

LabeledPath random_path(std::mt19937& rng, const RankedAlphabet& in, std::size_t len) {
  std::vector<SymbolId> inner;
  for (std::size_t s = 0; s < in.size(); ++s)
    if (in.arity(static_cast<SymbolId>(s)) > 0) inner.push_back(static_cast<SymbolId>(s));
  LabeledPath p;
  for (std::size_t k = 0; k < len; ++k) {
    SymbolId f = inner[std::uniform_int_distribution<std::size_t>(0, inner.size() - 1)(rng)];
    p = p.with_symbol(f);
    if (k + 1 < len) p = p.with_direction(std::uniform_int_distribution<int>(1, in.arity(f))(rng));
  }
  return p;
}

int random_dir(std::mt19937& rng, const RankedAlphabet& in, const LabeledPath& p) {
  return std::uniform_int_distribution<int>(1, in.arity(p.labels.back()))(rng);
}

}  // namespace

TEST_CASE("path syntax") {
  auto A = load("spec1.tap");
  auto p = parse_path("f.2.f.1.a", A.input());
  CHECK(p.length() == 3);
  CHECK(p.dirs == Address{2, 1});
  CHECK_FALSE(p.ends_in_direction());
  CHECK(print_path(p, A.input()) == "f.2.f.1.a");
  CHECK(parse_path("f.1", A.input()).ends_in_direction());
  CHECK_THROWS(parse_path("f.3", A.input()));
  CHECK_THROWS(parse_path("a.1", A.input()));
  CHECK(p.slice(1, 3, false) == parse_path("f.1.a", A.input()));
  CHECK(p.slice(0, 2, true) == parse_path("f.2.f.1", A.input()));
  CHECK(concat(parse_path("f.2", A.input()), parse_path("f.1.a", A.input())) == p);
}

TEST_CASE("trees containing a labelled path") {
  auto A = load("spec1.tap");
  Tree t = parse_term("f(a,f(f(a,a),a))", A.input());
  CHECK(trees_with_path(t, parse_path("f.2.f.1.f", A.input())));
  CHECK(trees_with_path(t, parse_path("f.1.a", A.input())));
  CHECK_FALSE(trees_with_path(t, parse_path("f.1.f", A.input())));
  CHECK_FALSE(trees_with_path(t, parse_path("f.2.f.1.f.1.f", A.input())));
  CHECK(trees_with_path(t, LabeledPath{}));
}

TEST_CASE("runs along a convolved path") {
  auto A = load("spec1.tap");
  auto x = parse_path("f.1.a", A.input());
  auto y = parse_path("f.1.b", A.output());
  auto xy = path_convolution(x, y, A.convolution());
  auto r = run_on_path(A, 0, xy);
  REQUIRE(r.spine.size() == 2);
  CHECK(r.spine[0] == 0);
  CHECK(r.spine[1] == *A.find_state("qf"));
  CHECK(r.accepting);

  auto yg = parse_path("g.1.b", A.output());
  auto r2 = run_on_path(A, 0, path_convolution(x, yg, A.convolution()));
  // q has no (a, b) transition
  CHECK_FALSE(r2.accepting);
}

TEST_CASE("state transformations") {
  auto A = load("spec1.tap");
  auto f = parse_path("f", A.input());
  // the sibling of the path would need an output uniform over every input
  CHECK(tau(A, f, 1, parse_path("f", A.output()))[0] == kNoState);
  CHECK(tau(A, f, 1, parse_path("g", A.output()))[0] == kNoState);

  auto P = load("par.tap");
  auto h = parse_path("h", P.input());
  auto c = parse_path("c", P.output());
  auto s0 = *P.find_state("s0"), s1 = *P.find_state("s1"), r = *P.find_state("r");
  auto fn = tau(P, h, 1, c);
  CHECK(fn[static_cast<std::size_t>(s0)] == s1);
  CHECK(fn[static_cast<std::size_t>(s1)] == s0);
  CHECK(fn[static_cast<std::size_t>(r)] == kNoState);
  CHECK(tau(P, h, 1, parse_path("e", P.output()))[static_cast<std::size_t>(r)] == s1);
  CHECK_THROWS(tau(P, h, 1, parse_path("d", P.output())));
}

TEST_CASE("idempotent segments") {
  auto P = load("par.tap");
  auto h = parse_path("h", P.input());
  CHECK_FALSE(is_idempotent(P, h, 1));
  CHECK(is_idempotent(P, parse_path("h.1.h", P.input()), 1));
  CHECK_FALSE(is_idempotent(P, parse_path("g", P.input()), 1));
  CHECK(is_idempotent(P, parse_path("g.1.g", P.input()), 1));
  CHECK_FALSE(is_idempotent(P, parse_path("h.1.g", P.input()), 1));

  auto pi = parse_path("h.1.h.1.h.1.h.1", P.input());
  auto fac = find_idempotent_factorization(P, pi);
  REQUIRE(fac);
  CHECK(fac->y_from == 0);
  CHECK(fac->y_to == 2);
  CHECK(fac->x.empty());
  CHECK(fac->y == parse_path("h.1.h", P.input()));
  CHECK(fac->j == 1);
  CHECK(concat(fac->y.with_direction(fac->j), fac->z) == pi);

  auto mixed = find_idempotent_factorization(P, parse_path("h.1.g.1.g.1", P.input()));
  REQUIRE(mixed);
  CHECK(mixed->y_from == 1);
  CHECK(mixed->x == parse_path("h", P.input()));
  CHECK(mixed->i == 1);
  CHECK(mixed->z.empty());

  CHECK_FALSE(find_idempotent_factorization(P, parse_path("h.1", P.input())));
  CHECK_FALSE(find_idempotent_factorization(P, parse_path("h.1.g.1", P.input())));
}

TEST_CASE("profiles compose along concatenation") {
  std::mt19937 rng(5);
  RankedAlphabet in({{"f", 2}, {"g", 1}, {"a", 0}});
  RankedAlphabet out({{"f", 2}, {"h", 1}, {"b", 0}});
  for (int round = 0; round < 60; ++round) {
    auto A = random_convolution_automaton(rng, in, out, 1 + round % 3, 0.6);
    Predicates P(A);
    auto x = random_path(rng, in, 1 + static_cast<std::size_t>(round % 3));
    int i = random_dir(rng, in, x);
    auto y = random_path(rng, in, 1 + static_cast<std::size_t>(round % 2));
    int j = random_dir(rng, in, y);
    auto direct = profile(P, concat(x.with_direction(i), y), j);
    auto composed = compose_profiles(profile(P, x, i), profile(P, y, j));
    CHECK(direct == composed);
  }
}

TEST_CASE("tau values appear in the profile") {
  std::mt19937 rng(9);
  RankedAlphabet in({{"f", 2}, {"a", 0}});
  RankedAlphabet out({{"f", 2}, {"g", 1}, {"b", 0}});
  for (int round = 0; round < 40; ++round) {
    auto A = random_convolution_automaton(rng, in, out, 2, 0.7);
    Predicates P(A);
    auto x = random_path(rng, in, 2);
    int i = random_dir(rng, in, x);
    LabeledPath y;
    for (std::size_t k = 0; k < x.length(); ++k) {
      if (k > 0) y = y.with_direction(x.dirs[k - 1]);
      y = y.with_symbol(k + 1 < x.length() ? 0 : (i == 1 ? 1 : 0));
    }
    auto fn = tau(P, x, i, y);
    auto prof = profile(P, x, i);
    CHECK(std::find(prof.eq.begin(), prof.eq.end(), fn) != prof.eq.end());
  }
}

TEST_CASE("pumping") {
  RankedAlphabet in({{"h", 1}, {"g", 1}, {"a", 0}});
  Tree t = parse_term("h(g(h(a)))", in);
  CHECK(print_term(pump(t, Address{}, Address{1}, 0), in) == "g(h(a))");
  CHECK(print_term(pump(t, Address{}, Address{1}, 1), in) == "h(g(h(a)))");
  CHECK(print_term(pump(t, Address{}, Address{1}, 3), in) == "h(h(h(g(h(a)))))");
  CHECK(print_term(pump(t, Address{1}, Address{1, 1}, 2), in) == "h(g(h(g(h(a)))))");
  CHECK_THROWS(pump(t, Address{}, Address{}, 1));
  CHECK_THROWS(pump(t, Address{2}, Address{1}, 1));

  auto P = load("par.tap");
  auto pi = parse_path("h.1.h", P.input());
  Tree w = parse_term("h(h(a))", P.input());
  CHECK(print_term(pump(w, LabeledPath{}, 0, pi, 1, 2), P.input()) == "h(h(h(h(a))))");

  // pumping inside the valid domain stays inside it
  auto D = load("ex5_dom.ta");
  Tree d = parse_term("f(b,f(a,f(a,a)))", D.input());
  REQUIRE(accepts(D, d));
  for (int n = 0; n < 4; ++n) CHECK(accepts(D, pump(d, Address{2}, Address{2}, n)));
}
