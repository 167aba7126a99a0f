#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "tdtsynth/synth.hpp"

namespace tdt {

struct EntryKey {
  bool ended = false;
  StateId q = kNoState;
  int m = 0;  // overlay depth; 0 for ended entries

  friend bool operator<(const EntryKey& x, const EntryKey& y) {
    return std::tie(x.ended, x.q, x.m) < std::tie(y.ended, y.q, y.m);
  }
  friend bool operator==(const EntryKey& x, const EntryKey& y) {
    return x.ended == y.ended && x.q == y.q && x.m == y.m;
  }
};

struct Position {
  std::map<EntryKey, Tree> entries;
  StateId b = 0;
  int phase = -1;  // index into the forced prefix, -1 once it is consumed

  friend bool operator<(const Position& x, const Position& y) {
    if (x.b != y.b) return x.b < y.b;
    if (x.phase != y.phase) return x.phase < y.phase;
    return x.entries < y.entries;
  }
};

class PathRecArena : public Arena {
 public:
  PathRecArena(Predicates& preds, StateId q, StateId b, LabeledPath forced, int depth);

  VertexId initial() override { return initial_; }
  Player owner(VertexId v) override;
  std::vector<Move> successors(VertexId v) override;
  std::string describe(VertexId v) override;

  enum class NodeKind { In, Out, Won, Dead };
  struct Node {
    NodeKind kind;
    std::size_t pos = 0;  // position index (In, Out)
    SymbolId f = 0;       // proposed input symbol (Out)
  };
  struct OutMove {
    bool close = false;
    int dir = 0;
    Tree output;  // emitted tree for close moves
  };

  const Node& node(VertexId v) const { return nodes_.at(v); }
  const Position& position(std::size_t i) const { return positions_.at(i); }
  /// Parallel to successors(v) for Out vertices.
  const std::vector<OutMove>& out_moves(VertexId v) const { return out_info_.at(v); }
  std::optional<VertexId> find_out(std::size_t pos, SymbolId f) const;
  /// Output that wins outright from a free position: a uniform output under
  /// an overlay entry, or the finished output of an ended entry in W.
  std::optional<Tree> immediate_win(const Position& p);

  Predicates& predicates() const { return preds_; }
  StateId start_state() const { return q0_; }
  StateId start_domain() const { return b0_; }
  const LabeledPath& forced() const { return forced_; }
  /// Out vertex choosing the direction after the last forced symbol.
  std::optional<VertexId> forced_exit() const;
  std::size_t size() const { return nodes_.size(); }

 private:
  VertexId in_vertex(Position p);
  VertexId out_vertex(std::size_t pos, SymbolId f);
  VertexId special(NodeKind kind);
  Position update(const Position& p, SymbolId f, int d);
  std::optional<Tree> close(const Position& p, SymbolId a);
  std::string describe_position(const Position& p) const;

  Predicates& preds_;
  StateId q0_, b0_;
  LabeledPath forced_;
  int depth_;
  std::vector<Position> positions_;
  std::map<Position, std::size_t> position_index_;
  std::vector<Node> nodes_;
  std::map<std::size_t, VertexId> in_of_;
  std::map<std::pair<std::size_t, SymbolId>, VertexId> out_of_;
  std::map<VertexId, std::vector<OutMove>> out_info_;
  std::optional<VertexId> won_, dead_;
  VertexId initial_ = 0;
};

}  // namespace tdt
