#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "tdtsynth/terms.hpp"

using namespace tdt;

namespace {

RankedAlphabet ex1() { return RankedAlphabet({{"f", 2}, {"g", 1}, {"h", 1}, {"a", 0}}); }

Tree random_tree(std::mt19937& rng, const RankedAlphabet& a, int depth) {
  std::vector<SymbolId> pool;
  for (std::size_t s = 0; s < a.size(); ++s)
    if (depth > 0 || a.arity(static_cast<SymbolId>(s)) == 0) pool.push_back(static_cast<SymbolId>(s));
  SymbolId s = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  Tree t(s);
  for (int i = 0; i < a.arity(s); ++i) t.children.push_back(random_tree(rng, a, depth - 1));
  return t;
}

std::set<Address> address_set(const Tree& t) {
  auto d = domain(t);
  return {d.begin(), d.end()};
}

}  // namespace

TEST_CASE("alphabet lookup is by name and arity") {
  RankedAlphabet a({{"f", 2}, {"f", 1}, {"a", 0}});
  CHECK(a.find("f", 2).has_value());
  CHECK(a.find("f", 1).has_value());
  CHECK(*a.find("f", 2) != *a.find("f", 1));
  CHECK_FALSE(a.find("f", 0).has_value());
  CHECK(a.find_all("f").size() == 2);
  CHECK_NOTHROW(a.validate());
  CHECK_THROWS_AS(RankedAlphabet({{"f", 2}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(RankedAlphabet().validate(), std::invalid_argument);
}

TEST_CASE("parse_term reads the running example and rejects bad arity") {
  auto a = ex1();
  Tree t = parse_term("f(g(h(a)),a)", a);
  CHECK(t.symbol == *a.find("f", 2));
  CHECK(t.children.size() == 2);
  CHECK(t.children[0].symbol == *a.find("g", 1));
  CHECK(print_term(t, a) == "f(g(h(a)),a)");
  CHECK(parse_term(" f ( a , a ) ", a) == parse_term("f(a,a)", a));
  Tree leaf = parse_term("a", a);
  CHECK(leaf.is_leaf());
  CHECK_THROWS_AS(parse_term("f(a)", a), ParseError);
  CHECK_THROWS_AS(parse_term("z", a), ParseError);
  CHECK_THROWS_AS(parse_term("f(a,a", a), ParseError);
  CHECK_THROWS_AS(parse_term("f(a,a))", a), ParseError);
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_term("f(a,q)", ex1());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.column() == 5);
  }
}

TEST_CASE("convolution pads with bottom over the union of domains") {
  RankedAlphabet in({{"f", 2}, {"a", 0}}), out({{"f", 2}, {"g", 2}, {"b", 0}});
  ConvolutionAlphabet conv(in, out);
  Tree t = parse_term("f(a,a)", in), b = parse_term("b", out);
  Tree c = convolution(t, b, conv);
  CHECK(print_term(c, conv) == "f|b(a|_,a|_)");
  CHECK(conv.arity(c.symbol) == 2);
  CHECK(print_term(convolution(parse_term("a", in), b, conv), conv) == "a|b");

  CHECK(print_term(convolve_bot(parse_term("a", in), Side::Input, conv), conv) == "a|_");
  CHECK(print_term(convolve_bot(t, Side::Input, conv), conv) == "f|_(a|_,a|_)");
  CHECK(print_term(convolve_bot(b, Side::Output, conv), conv) == "_|b");
  CHECK(parse_term("f|b(a|_,a|_)", conv) == c);
}

TEST_CASE("pair arity is the maximum of the component arities") {
  RankedAlphabet in({{"f", 2}, {"g", 1}, {"a", 0}}), out({{"h", 1}, {"b", 0}});
  ConvolutionAlphabet conv(in, out);
  for (SymbolId x = kBottom; x < static_cast<SymbolId>(in.size()); ++x)
    for (SymbolId y = kBottom; y < static_cast<SymbolId>(out.size()); ++y) {
      if (x == kBottom && y == kBottom) continue;
      SymbolId p = conv.pair(x, y);
      CHECK(conv.valid(p));
      CHECK(conv.split(p) == std::make_pair(x, y));
      int ax = x == kBottom ? 0 : in.arity(x), ay = y == kBottom ? 0 : out.arity(y);
      CHECK(conv.arity(p) == std::max(ax, ay));
    }
  CHECK_FALSE(conv.valid(0));
}

TEST_CASE("self convolution labels every node (x,x)") {
  auto a = ex1();
  ConvolutionAlphabet conv(a, a);
  Tree t = parse_term("f(g(h(a)),a)", a);
  Tree c = convolution(t, t, conv);
  CHECK(address_set(c) == address_set(t));
  std::function<void(const Tree&)> walk = [&](const Tree& n) {
    auto [x, y] = conv.split(n.symbol);
    CHECK(x == y);
    for (const auto& ch : n.children) walk(ch);
  };
  walk(c);
}

TEST_CASE("special trees and contexts") {
  RankedAlphabet a({{"f", 2}, {"h", 1}, {"a", 0}, {"b", 0}});
  Tree s1 = parse_term("f(*,a)", a);
  Tree s2 = parse_term("h(*)", a);
  CHECK(has_hole(s1));
  CHECK(print_term(splice(s1, s2), a) == "f(h(*),a)");
  CHECK(splice(Tree(kHole), s2) == s2);
  CHECK(print_term(splice(s1, parse_term("b", a)), a) == "f(b,a)");
  CHECK_FALSE(has_hole(splice(s1, parse_term("b", a))));
  CHECK_THROWS(splice(parse_term("a", a), s2));

  Tree t = parse_term("f(h(a),b)", a);
  CHECK(print_term(cut(t, {1}), a) == "f(*,b)");
  CHECK(print_term(cut(t, {1, 1}), a) == "f(h(*),b)");

  CHECK(print_term(substitute(parse_term("x1", a), {parse_term("a", a)}), a) == "a");
  CHECK(print_term(substitute(parse_term("f(x1,x2)", a), {parse_term("a", a), parse_term("b", a)}), a) == "f(a,b)");
  CHECK(print_term(substitute(parse_term("h(x1)", a), {parse_term("f(a,a)", a)}), a) == "h(f(a,a))");
  CHECK(variable_count(parse_term("f(x1,x2)", a)) == 2);
  CHECK_THROWS(substitute(parse_term("f(x1,x2)", a), {parse_term("a", a)}));
}

TEST_CASE("max_path_len_along counts the deepest comparable node") {
  auto a = ex1();
  CHECK(max_path_len_along(parse_term("a", a), {}) == 0);
  Tree t = parse_term("f(h(a),a)", a);
  CHECK(max_path_len_along(t, {1}) == 2);
  CHECK(max_path_len_along(t, {2, 2, 2, 2}) == 1);
  CHECK(max_path_len_along(t, {}) == 2);
}

TEST_CASE("random trees: round trip, projection, splice associativity") {
  std::mt19937 rng(7);
  auto a = ex1();
  RankedAlphabet out({{"k", 2}, {"m", 1}, {"b", 0}});
  ConvolutionAlphabet conv(a, out);
  for (int i = 0; i < 300; ++i) {
    Tree t = random_tree(rng, a, 4);
    Tree u = random_tree(rng, out, 4);
    CHECK(parse_term(print_term(t, a), a) == t);

    Tree c = convolution(t, u, conv);
    auto dt = address_set(t), du = address_set(u), dc = address_set(c);
    std::set<Address> uni = dt;
    uni.insert(du.begin(), du.end());
    CHECK(dc == uni);
    CHECK(project(c, Side::Input, conv) == t);
    CHECK(project(c, Side::Output, conv) == u);
    CHECK(parse_term(print_term(c, conv), conv) == c);

    // (t·s1)·s2 = t·(s1·s2) on holes cut out of random trees
    auto addrs = domain(t);
    Address p = addrs[std::uniform_int_distribution<std::size_t>(0, addrs.size() - 1)(rng)];
    Tree s0 = cut(t, p);
    Tree s1 = cut(random_tree(rng, a, 2), {});
    Tree r = random_tree(rng, a, 2);
    auto a1 = domain(r);
    Tree s1b = cut(r, a1.back());
    CHECK(splice(splice(s0, s1b), s1) == splice(s0, splice(s1b, s1)));
  }
}

TEST_CASE("tree measures") {
  auto a = ex1();
  Tree t = parse_term("f(g(h(a)),a)", a);
  CHECK(depth(t) == 3);
  CHECK(size(t) == 5);
  CHECK(subtree(t, {1, 1})->symbol == *a.find("h", 1));
  CHECK(subtree(t, {3}) == nullptr);
  CHECK(format_address({1, 1}) == "11");
}
