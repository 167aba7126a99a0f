#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdt {

enum class Player { In, Out };

using VertexId = std::size_t;

struct Move {
  VertexId target;
  std::string label;
};

/// Arena explored on demand. Implementations intern vertices and hand out
/// dense ids; successors(v) must return the same list for the same v.
class Arena {
 public:
  virtual ~Arena() = default;
  virtual VertexId initial() = 0;
  virtual Player owner(VertexId v) = 0;
  virtual std::vector<Move> successors(VertexId v) = 0;
  virtual std::string describe(VertexId v) = 0;
};

/// Arena given up front; handy for tests and small examples.
class ExplicitArena : public Arena {
 public:
  VertexId add_vertex(Player owner, std::string name);
  void add_edge(VertexId from, VertexId to, std::string label = {});
  void set_initial(VertexId v) { initial_ = v; }

  VertexId initial() override { return initial_; }
  Player owner(VertexId v) override { return owners_.at(v); }
  std::vector<Move> successors(VertexId v) override { return edges_.at(v); }
  std::string describe(VertexId v) override { return names_.at(v); }
  std::size_t size() const { return owners_.size(); }

 private:
  std::vector<Player> owners_;
  std::vector<std::string> names_;
  std::vector<std::vector<Move>> edges_;
  VertexId initial_ = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StrategyGap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  std::size_t max_vertices = 1'000'000;
};

/// Result of solving the reachable part of an arena. Out wants to avoid its
/// own dead ends forever; In's dead ends are safe for Out.
class Solution {
 public:
  bool out_wins() const { return winning(initial); }
  bool reachable(VertexId v) const { return v < seen_.size() && seen_[v]; }
  bool winning(VertexId v) const { return reachable(v) && !losing_[v]; }
  bool bad(VertexId v) const { return reachable(v) && owner_[v] == Player::Out && moves_[v].empty(); }
  Player owner(VertexId v) const { return owner_.at(v); }
  const std::vector<Move>& moves(VertexId v) const { return moves_.at(v); }
  /// Out's positional choice (index into moves(v)) on its winning vertices.
  std::optional<std::size_t> strategy(VertexId v) const;
  /// Number of attractor layers separating a losing vertex from the bad set.
  std::optional<std::size_t> rank(VertexId v) const;
  const std::vector<VertexId>& vertices() const { return order_; }
  std::size_t vertex_count() const { return order_.size(); }
  std::size_t edge_count() const;

  /// A shortest play from the initial vertex into the bad set when In wins:
  /// In follows decreasing ranks, Out tries its moves in order.
  std::vector<std::pair<VertexId, std::string>> counterexample() const;

  VertexId initial = 0;

 private:
  friend Solution solve(Arena&, const SolveOptions&);
  std::vector<VertexId> order_;
  std::vector<char> seen_;
  std::vector<char> losing_;
  std::vector<Player> owner_;
  std::vector<std::vector<Move>> moves_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> choice_;
};

inline constexpr std::size_t kNoChoice = static_cast<std::size_t>(-1);

/// Forward exploration of the reachable arena followed by the backward
/// attractor to Out's dead ends. Throws BudgetExceeded past max_vertices.
Solution solve(Arena& arena, const SolveOptions& options = {});

struct Play {
  std::vector<VertexId> vertices;
  std::vector<std::string> labels;
  bool hit_bad = false;
};

/// Picks a move index for In, or nullopt to stop (no moves).
using Adversary = std::function<std::optional<std::size_t>(VertexId, const std::vector<Move>&)>;

/// Plays Out's strategy against `adversary` from `start` for at most
/// max_steps moves. Throws StrategyGap on an Out vertex outside the winning
/// region.
Play simulate(const Solution& solution, const Adversary& adversary, std::size_t max_steps,
              std::optional<VertexId> start = std::nullopt);

/// DOT rendering of the reachable arena: In vertices are boxes, Out vertices
/// rounded boxes, dead Out vertices red, strategy edges bold.
std::string to_dot(Arena& arena, const Solution& solution);

}  // namespace tdt
