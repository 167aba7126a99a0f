#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "support.hpp"
#include "tdtsynth/safety_game.hpp"
#include "tdtsynth/synth.hpp"

using namespace tdt;
using namespace tdt::testing;

namespace {

struct RandomArena {
  std::vector<Player> owners;
  std::vector<std::vector<std::size_t>> edges;

  ExplicitArena build() const {
    ExplicitArena a;
    for (std::size_t v = 0; v < owners.size(); ++v) a.add_vertex(owners[v], "v" + std::to_string(v));
    for (std::size_t v = 0; v < owners.size(); ++v)
      for (auto w : edges[v]) a.add_edge(v, w, std::to_string(w));
    return a;
  }
};

RandomArena random_arena(std::mt19937& rng, std::size_t n) {
  RandomArena r;
  std::uniform_int_distribution<int> owner(0, 1), degree(0, 3);
  std::uniform_int_distribution<std::size_t> target(0, n - 1);
  for (std::size_t v = 0; v < n; ++v) {
    r.owners.push_back(owner(rng) ? Player::Out : Player::In);
    std::vector<std::size_t> e;
    for (int d = degree(rng); d > 0; --d) e.push_back(target(rng));
    r.edges.push_back(e);
  }
  return r;
}

/// Every play of length ≤ depth that follows the strategy avoids bad vertices.
bool strategy_safe(const Solution& s, VertexId v, int depth) {
  if (s.bad(v)) return false;
  if (depth == 0) return true;
  const auto& moves = s.moves(v);
  if (s.owner(v) == Player::Out) return strategy_safe(s, moves[*s.strategy(v)].target, depth - 1);
  for (const auto& m : moves)
    if (!strategy_safe(s, m.target, depth - 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("trivial arenas") {
  ExplicitArena dead;
  dead.set_initial(dead.add_vertex(Player::Out, "stuck"));
  CHECK_FALSE(solve(dead).out_wins());

  ExplicitArena loop;
  auto v = loop.add_vertex(Player::In, "loop");
  loop.add_edge(v, v);
  loop.set_initial(v);
  CHECK(solve(loop).out_wins());

  ExplicitArena end;
  end.set_initial(end.add_vertex(Player::In, "end"));
  auto s = solve(end);
  CHECK(s.out_wins());
  auto play = simulate(s, [](VertexId, const std::vector<Move>&) { return std::optional<std::size_t>(0); }, 10);
  CHECK(play.vertices.size() == 1);
  CHECK_FALSE(play.hit_bad);
}

TEST_CASE("strategy gaps and counterexamples") {
  ExplicitArena a;
  auto i0 = a.add_vertex(Player::In, "i0");
  auto o1 = a.add_vertex(Player::Out, "o1");
  auto o2 = a.add_vertex(Player::Out, "o2");
  a.add_edge(i0, o1, "left");
  a.add_edge(i0, o2, "right");
  auto o3 = a.add_vertex(Player::Out, "o3");
  a.add_edge(o1, i0, "back");
  a.add_edge(o2, o3, "down");
  a.set_initial(i0);
  auto s = solve(a);
  CHECK_FALSE(s.out_wins());
  auto cex = s.counterexample();
  REQUIRE(cex.size() == 3);
  CHECK(cex[1].first == o2);
  CHECK(cex[1].second == "right");
  CHECK(cex.back().first == o3);
  CHECK(s.winning(o1) == false);
  CHECK(*s.rank(i0) > *s.rank(o2));
  CHECK(*s.rank(o2) > *s.rank(o3));
  CHECK_THROWS_AS(simulate(s, [](VertexId, const std::vector<Move>&) { return std::optional<std::size_t>(1); }, 5),
                  StrategyGap);
}

TEST_CASE("budget is enforced") {
  ExplicitArena a;
  VertexId prev = a.add_vertex(Player::In, "0");
  a.set_initial(prev);
  for (int i = 1; i < 50; ++i) {
    auto v = a.add_vertex(i % 2 ? Player::Out : Player::In, std::to_string(i));
    a.add_edge(prev, v);
    prev = v;
  }
  CHECK_THROWS_AS(solve(a, SolveOptions{10}), BudgetExceeded);
  CHECK_NOTHROW(solve(a, SolveOptions{100}));
}

TEST_CASE("random arenas: determinacy, safe strategies, monotonicity") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto r = random_arena(rng, 4 + static_cast<std::size_t>(i % 12));
    auto arena = r.build();
    auto s = solve(arena);
    for (VertexId v : s.vertices()) {
      // winning for exactly one player: Out-winning vertices have a safe strategy
      if (s.winning(v)) {
        CHECK(strategy_safe(s, v, 8));
      } else {
        CHECK(s.rank(v).has_value());
      }
    }
    // adding Out moves never shrinks Out's region
    RandomArena more = r;
    std::uniform_int_distribution<std::size_t> target(0, r.owners.size() - 1);
    for (std::size_t v = 0; v < more.owners.size(); ++v)
      if (more.owners[v] == Player::Out) more.edges[v].push_back(target(rng));
    auto arena2 = more.build();
    auto s2 = solve(arena2);
    for (VertexId v : s.vertices())
      if (s.winning(v)) CHECK(s2.winning(v));
  }
}

TEST_CASE("the k=1 game for the same-domain spec against random opponents") {
  auto A = load("spec1.tap");
  Predicates P(A);
  auto arena = build_arena_bounded(P, 1);
  auto s = solve(*arena);
  REQUIRE(s.out_wins());
  std::mt19937 rng(1);
  int bad = 0;
  for (int run = 0; run < 1000; ++run) {
    auto play = simulate(
        s,
        [&](VertexId, const std::vector<Move>& m) -> std::optional<std::size_t> {
          if (m.empty()) return std::nullopt;
          return std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng);
        },
        40);
    bad += play.hit_bad;
  }
  CHECK(bad == 0);
  CHECK(strategy_safe(s, s.initial, 8));

  auto dot = to_dot(*arena, s);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("shape=box") != std::string::npos);
  CHECK(dot.find("rounded") != std::string::npos);
  CHECK(dot.find("bold") != std::string::npos);
}
