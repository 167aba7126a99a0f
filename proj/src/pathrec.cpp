#include "pathrec.hpp"

#include <sstream>

namespace tdt {

PathRecArena::PathRecArena(Predicates& preds, StateId q, StateId b, LabeledPath forced, int depth)
    : preds_(preds), q0_(q), b0_(b), forced_(std::move(forced)), depth_(depth) {
  if (forced_.ends_in_direction()) throw std::invalid_argument("forced prefix must end in a symbol");
  Position p;
  p.entries.emplace(EntryKey{false, q, 0}, Tree(kHole));
  p.b = b;
  p.phase = forced_.empty() ? -1 : 0;
  initial_ = in_vertex(std::move(p));
}

VertexId PathRecArena::special(NodeKind kind) {
  auto& slot = kind == NodeKind::Won ? won_ : dead_;
  if (!slot) {
    nodes_.push_back({kind, 0, 0});
    slot = nodes_.size() - 1;
  }
  return *slot;
}

VertexId PathRecArena::in_vertex(Position p) {
  if (p.entries.empty()) return special(NodeKind::Dead);
  auto it = position_index_.find(p);
  std::size_t idx;
  if (it == position_index_.end()) {
    idx = positions_.size();
    positions_.push_back(p);
    position_index_.emplace(std::move(p), idx);
  } else {
    idx = it->second;
  }
  auto v = in_of_.find(idx);
  if (v != in_of_.end()) return v->second;
  nodes_.push_back({NodeKind::In, idx, 0});
  in_of_[idx] = nodes_.size() - 1;
  return nodes_.size() - 1;
}

VertexId PathRecArena::out_vertex(std::size_t pos, SymbolId f) {
  auto key = std::make_pair(pos, f);
  auto it = out_of_.find(key);
  if (it != out_of_.end()) return it->second;
  nodes_.push_back({NodeKind::Out, pos, f});
  out_of_[key] = nodes_.size() - 1;
  return nodes_.size() - 1;
}

std::optional<VertexId> PathRecArena::find_out(std::size_t pos, SymbolId f) const {
  auto it = out_of_.find({pos, f});
  if (it == out_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> PathRecArena::forced_exit() const {
  if (forced_.empty()) return std::nullopt;
  for (const auto& [key, v] : out_of_) {
    const Position& p = positions_[key.first];
    if (p.phase == static_cast<int>(forced_.length()) - 1) return v;
  }
  return std::nullopt;
}

Player PathRecArena::owner(VertexId v) {
  switch (nodes_.at(v).kind) {
    case NodeKind::In:
    case NodeKind::Won:
      return Player::In;
    default:
      return Player::Out;
  }
}

std::optional<Tree> PathRecArena::immediate_win(const Position& p) {
  for (const auto& [key, rep] : p.entries) {
    if (key.ended) {
      if (preds_.univ_input(key.q, p.b)) return rep;
    } else if (auto w = preds_.uniform_output({{key.q, p.b}}, {})) {
      return splice(rep, *w);
    }
  }
  return std::nullopt;
}

Position PathRecArena::update(const Position& p, SymbolId f, int d) {
  const auto& A = preds_.spec();
  const auto* mv = preds_.domain().move(p.b, f);
  Position next;
  next.phase = p.phase >= 0 && p.phase + 1 < static_cast<int>(forced_.length()) ? p.phase + 1 : -1;
  if (!mv) return next;
  next.b = mv->children[static_cast<std::size_t>(d - 1)];
  const int n = A.input().arity(f);
  auto child_b = [&](int l) { return mv->children[static_cast<std::size_t>(l - 1)]; };
  for (const auto& [key, rep] : p.entries) {
    if (key.ended) {
      const auto* tr = A.next(key.q, A.pair(f, kBottom));
      if (!tr) continue;
      bool ok = true;
      for (int l = 1; l <= n && ok; ++l)
        if (l != d) ok = preds_.univ_input((*tr)[static_cast<std::size_t>(l - 1)], child_b(l));
      if (ok) next.entries.emplace(EntryKey{true, (*tr)[static_cast<std::size_t>(d - 1)], 0}, rep);
      continue;
    }
    for (std::size_t gi = 0; gi < A.output().size(); ++gi) {
      SymbolId g = static_cast<SymbolId>(gi);
      const auto* tr = A.next(key.q, A.pair(f, g));
      if (!tr) continue;
      const int m = A.output().arity(g);
      Tree s(g);
      bool ok = true;
      for (int l = 1; l <= std::max(n, m) && ok; ++l) {
        StateId ql = (*tr)[static_cast<std::size_t>(l - 1)];
        if (l == d) {
          if (l <= m) s.children.emplace_back(kHole);
          continue;
        }
        if (l <= n && l <= m) {
          auto w = preds_.uniform_output({{ql, child_b(l)}}, {});
          if (w) s.children.push_back(std::move(*w));
          ok = w.has_value();
        } else if (l <= n) {
          ok = preds_.univ_input(ql, child_b(l));
        } else {
          auto w = preds_.exists_output(ql);
          if (w) s.children.push_back(std::move(*w));
          ok = w.has_value();
        }
      }
      if (!ok) continue;
      StateId qd = (*tr)[static_cast<std::size_t>(d - 1)];
      if (d <= m) {
        if (key.m + 1 > depth_) continue;
        next.entries.emplace(EntryKey{false, qd, key.m + 1}, splice(rep, s));
      } else {
        next.entries.emplace(EntryKey{true, qd, 0}, splice(rep, s));
      }
    }
  }
  return next;
}

std::optional<Tree> PathRecArena::close(const Position& p, SymbolId a) {
  const auto& A = preds_.spec();
  if (!preds_.domain().move(p.b, a)) return std::nullopt;
  for (const auto& [key, rep] : p.entries) {
    if (key.ended) {
      if (A.next(key.q, A.pair(a, kBottom))) return rep;
      continue;
    }
    for (std::size_t gi = 0; gi < A.output().size(); ++gi) {
      SymbolId g = static_cast<SymbolId>(gi);
      const auto* tr = A.next(key.q, A.pair(a, g));
      if (!tr) continue;
      Tree s(g);
      bool ok = true;
      for (StateId ql : *tr) {
        auto w = preds_.exists_output(ql);
        if (!w) {
          ok = false;
          break;
        }
        s.children.push_back(std::move(*w));
      }
      if (ok) return splice(rep, s);
    }
  }
  return std::nullopt;
}

std::vector<Move> PathRecArena::successors(VertexId v) {
  const Node node = nodes_.at(v);
  const auto& in = preds_.spec().input();
  std::vector<Move> moves;
  if (node.kind == NodeKind::Won || node.kind == NodeKind::Dead) return moves;
  if (node.kind == NodeKind::In) {
    const Position p = positions_[node.pos];
    if (p.phase >= 0) {
      moves.push_back({out_vertex(node.pos, forced_.labels[static_cast<std::size_t>(p.phase)]),
                       in.name(forced_.labels[static_cast<std::size_t>(p.phase)])});
      return moves;
    }
    if (immediate_win(p)) return moves;
    for (const auto& mv : preds_.domain().legal(p.b)) moves.push_back({out_vertex(node.pos, mv.symbol), in.name(mv.symbol)});
    return moves;
  }
  const Position p = positions_[node.pos];
  std::vector<OutMove> info;
  const int n = in.arity(node.f);
  if (n == 0) {
    if (auto t = close(p, node.f)) {
      moves.push_back({special(NodeKind::Won), "close"});
      info.push_back({true, 0, std::move(*t)});
    }
  } else {
    const bool fixed = p.phase >= 0 && p.phase + 1 < static_cast<int>(forced_.length());
    for (int d = 1; d <= n; ++d) {
      if (fixed && d != forced_.dirs[static_cast<std::size_t>(p.phase)]) continue;
      moves.push_back({in_vertex(update(p, node.f, d)), "dir " + std::to_string(d)});
      info.push_back({false, d, Tree()});
    }
  }
  out_info_[v] = std::move(info);
  return moves;
}

std::string PathRecArena::describe_position(const Position& p) const {
  const auto& A = preds_.spec();
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [key, rep] : p.entries) {
    os << (first ? "" : ", ") << (key.ended ? "end " : "ovl ") << A.state_name(key.q);
    if (!key.ended) os << "@" << key.m;
    os << ": " << print_term(rep, A.output());
    first = false;
  }
  os << "}";
  if (preds_.domain().restricted()) os << " dom " << preds_.domain().state_name(p.b);
  if (p.phase >= 0) os << " forced#" << p.phase;
  return os.str();
}

std::string PathRecArena::describe(VertexId v) {
  const Node& node = nodes_.at(v);
  switch (node.kind) {
    case NodeKind::Won:
      return "won";
    case NodeKind::Dead:
      return "dead";
    case NodeKind::In:
      return describe_position(positions_[node.pos]);
    case NodeKind::Out:
      return describe_position(positions_[node.pos]) + " reads " + preds_.spec().input().name(node.f);
  }
  return {};
}

std::optional<PathRecWitness> decide_path_recognizable(Predicates& preds, StateId q, StateId b,
                                                       const LabeledPath& forced, std::optional<int> depth,
                                                       std::size_t max_vertices) {
  check_path(forced, preds.spec().input());
  int D = depth.value_or(static_cast<int>(forced.length() + preds.spec().state_count()) + 1);
  auto arena = std::make_shared<PathRecArena>(preds, q, b, forced, D);
  auto solution = std::make_shared<Solution>(solve(*arena, SolveOptions{max_vertices}));
  if (!solution->out_wins()) return std::nullopt;
  return PathRecWitness{nullptr, arena, solution};
}

std::optional<PathRecWitness> decide_path_recognizable(const TopDownAutomaton& a, StateId q, const LabeledPath& forced) {
  auto preds = std::make_shared<Predicates>(a);
  auto w = decide_path_recognizable(*preds, q, preds->domain().initial(), forced);
  if (w) w->owned = std::move(preds);
  return w;
}

}  // namespace tdt
