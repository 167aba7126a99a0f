#include "tdtsynth/synth.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "pathrec.hpp"

namespace tdt {

UniformizationArena::UniformizationArena(Predicates& preds, GameOptions options)
    : preds_(preds), options_(std::move(options)), profiles_(preds) {}

VertexId UniformizationArena::intern(GameVertex v) {
  auto it = index_.find(v);
  if (it != index_.end()) return it->second;
  VertexId id = vertices_.size();
  vertices_.push_back(v);
  index_.emplace(std::move(v), id);
  return id;
}

std::optional<VertexId> UniformizationArena::find(const GameVertex& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId UniformizationArena::initial() {
  GameVertex v;
  v.kind = GameVertex::Kind::InSet;
  v.set = {{preds_.spec().initials().front(), preds_.domain().initial()}};
  return intern(std::move(v));
}

Player UniformizationArena::owner(VertexId v) {
  return vertices_.at(v).kind == GameVertex::Kind::OutPath ? Player::Out : Player::In;
}

StateId UniformizationArena::domain_state_at_end(StateId b, const LabeledPath& pi) const {
  for (std::size_t k = 0; k < pi.length(); ++k) {
    const auto* mv = preds_.domain().move(b, pi.labels[k]);
    if (!mv) throw std::logic_error("pending input left the domain");
    if (k < pi.dirs.size()) b = mv->children[static_cast<std::size_t>(pi.dirs[k] - 1)];
  }
  return b;
}

bool UniformizationArena::univ_input_along(StateId q, StateId b, const LabeledPath& pi) const {
  const auto& A = preds_.spec();
  for (std::size_t k = 0; k < pi.length(); ++k) {
    SymbolId f = pi.labels[k];
    const auto* mv = preds_.domain().move(b, f);
    if (!mv) return false;
    const auto* tr = A.next(q, A.pair(f, kBottom));
    if (!tr) return false;
    const int n = A.input().arity(f);
    const int d = k < pi.dirs.size() ? pi.dirs[k] : 0;
    for (int l = 1; l <= n; ++l)
      if (l != d && !preds_.univ_input((*tr)[static_cast<std::size_t>(l - 1)], mv->children[static_cast<std::size_t>(l - 1)]))
        return false;
    if (d == 0) return true;
    q = (*tr)[static_cast<std::size_t>(d - 1)];
    b = mv->children[static_cast<std::size_t>(d - 1)];
  }
  return true;
}

bool UniformizationArena::saturated(VertexId v) {
  auto it = saturated_.find(v);
  if (it != saturated_.end()) return it->second;
  bool s = profiles_.find_idempotent_factorization(vertices_.at(v).pi).has_value();
  saturated_[v] = s;
  return s;
}

const PathRecWitness* UniformizationArena::stay_witness(VertexId v) const {
  auto it = stay_.find(v);
  return it == stay_.end() ? nullptr : &it->second;
}

std::vector<Move> UniformizationArena::successors(VertexId v) {
  if (info_.size() < vertices_.size()) info_.resize(vertices_.size());
  std::vector<Move> moves;
  std::vector<MoveInfo> info;
  const GameVertex gv = vertices_.at(v);
  const auto& in = preds_.spec().input();
  switch (gv.kind) {
    case GameVertex::Kind::InSet:
      for (const auto& [q, b] : gv.set)
        for (const auto& mv : preds_.domain().legal(b)) {
          GameVertex t{GameVertex::Kind::OutPath, {}, q, b, LabeledPath{{mv.symbol}, {}}};
          moves.push_back({intern(std::move(t)), in.name(mv.symbol)});
          info.push_back({MoveInfo::Kind::Input, mv.symbol, 0});
        }
      break;
    case GameVertex::Kind::InPath: {
      StateId end = domain_state_at_end(gv.b, gv.pi);
      for (const auto& mv : preds_.domain().legal(end)) {
        GameVertex t{GameVertex::Kind::OutPath, {}, gv.q, gv.b, gv.pi.with_symbol(mv.symbol)};
        moves.push_back({intern(std::move(t)), in.name(mv.symbol)});
        info.push_back({MoveInfo::Kind::Input, mv.symbol, 0});
      }
      break;
    }
    case GameVertex::Kind::OutPath:
      moves = out_moves(v, info);
      break;
  }
  if (info_.size() < vertices_.size()) info_.resize(vertices_.size());
  info_[v] = std::move(info);
  return moves;
}

std::vector<Move> UniformizationArena::out_moves(VertexId v, std::vector<MoveInfo>& info) {
  const GameVertex gv = vertices_.at(v);
  const auto& A = preds_.spec();
  const SymbolId f = gv.pi.labels.front();
  const auto* mv = preds_.domain().move(gv.b, f);
  if (!mv) throw std::logic_error("pending input left the domain");
  const int n = A.input().arity(f);
  auto child_b = [&](int l) { return mv->children[static_cast<std::size_t>(l - 1)]; };
  std::vector<Move> moves;

  for (std::size_t gi = 0; gi < A.output().size(); ++gi) {
    const SymbolId g = static_cast<SymbolId>(gi);
    const auto* tr = A.next(gv.q, A.pair(f, g));
    if (!tr) continue;
    const int m = A.output().arity(g);
    auto child_q = [&](int l) { return (*tr)[static_cast<std::size_t>(l - 1)]; };

    if (gv.pi.length() == 1) {
      std::vector<StatePair> set;
      bool ok = true;
      for (int l = 1; l <= std::max(n, m) && ok; ++l) {
        if (l <= n && l <= m)
          set.emplace_back(child_q(l), child_b(l));
        else if (l <= n)
          ok = preds_.univ_input(child_q(l), child_b(l));
        else
          ok = preds_.exists_output(child_q(l)).has_value();
      }
      if (!ok) continue;
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      GameVertex t{GameVertex::Kind::InSet, std::move(set), kNoState, 0, {}};
      moves.push_back({intern(std::move(t)), A.output().name(g)});
      info.push_back({MoveInfo::Kind::Emit, g, 0});
      continue;
    }

    const int j = gv.pi.dirs.front();
    bool ok = true;
    for (int l = 1; l <= std::max(n, m) && ok; ++l) {
      if (l == j) continue;
      if (l <= n && l <= m)
        ok = preds_.uniform_output({{child_q(l), child_b(l)}}, {}).has_value();
      else if (l <= n)
        ok = preds_.univ_input(child_q(l), child_b(l));
      else
        ok = preds_.exists_output(child_q(l)).has_value();
    }
    if (!ok) continue;
    LabeledPath rest = gv.pi.slice(1, gv.pi.length(), false);
    if (j <= m) {
      GameVertex t{GameVertex::Kind::OutPath, {}, child_q(j), child_b(j), std::move(rest)};
      moves.push_back({intern(std::move(t)), A.output().name(g)});
      info.push_back({MoveInfo::Kind::Advance, g, 0});
    } else if (univ_input_along(child_q(j), child_b(j), rest)) {
      GameVertex t{GameVertex::Kind::InSet, {}, kNoState, 0, {}};
      moves.push_back({intern(std::move(t)), A.output().name(g)});
      info.push_back({MoveInfo::Kind::Complete, g, 0});
    }
  }

  const SymbolId last = gv.pi.labels.back();
  const bool extend = unbounded() ? !saturated(v) : static_cast<int>(gv.pi.length()) < delay();
  if (extend) {
    for (int d = 1; d <= A.input().arity(last); ++d) {
      GameVertex t{GameVertex::Kind::InPath, {}, gv.q, gv.b, gv.pi.with_direction(d)};
      moves.push_back({intern(std::move(t)), "dir " + std::to_string(d)});
      info.push_back({MoveInfo::Kind::Delay, 0, d});
    }
  }
  if (unbounded() && saturated(v)) {
    auto fact = profiles_.find_idempotent_factorization(gv.pi);
    auto witness = decide_path_recognizable(preds_, gv.q, gv.b, gv.pi, options_.pathrec_depth, options_.max_vertices);
    std::ostringstream fs;
    fs << "x=" << print_path(fact->x, A.input()) << " i=" << fact->i << " y=" << print_path(fact->y, A.input())
       << " j=" << fact->j << " z=" << print_path(fact->z, A.input());
    explanations_.push_back({describe(v), fs.str(), witness.has_value()});
    if (witness) {
      stay_.emplace(v, std::move(*witness));
      moves.push_back({v, "stay"});
      info.push_back({MoveInfo::Kind::Stay, 0, 0});
    }
  }
  return moves;
}

std::string UniformizationArena::describe(VertexId v) {
  const GameVertex& gv = vertices_.at(v);
  const auto& A = preds_.spec();
  const bool dom = preds_.domain().restricted();
  auto pair_name = [&](StateId q, StateId b) {
    return dom ? A.state_name(q) + "/" + preds_.domain().state_name(b) : A.state_name(q);
  };
  std::ostringstream os;
  if (gv.kind == GameVertex::Kind::InSet) {
    os << "{";
    for (std::size_t i = 0; i < gv.set.size(); ++i) os << (i ? "," : "") << pair_name(gv.set[i].first, gv.set[i].second);
    os << "}";
    return os.str();
  }
  os << "(" << pair_name(gv.q, gv.b) << ", " << print_path(gv.pi, A.input()) << ")";
  return os.str();
}

std::unique_ptr<UniformizationArena> build_arena_bounded(Predicates& preds, int k, std::size_t max_vertices) {
  if (k < 0) throw std::invalid_argument("delay bound must be non-negative");
  GameOptions o;
  o.delay = k;
  o.max_vertices = max_vertices;
  return std::make_unique<UniformizationArena>(preds, o);
}

std::unique_ptr<UniformizationArena> build_arena_unbounded(Predicates& preds, std::size_t max_vertices) {
  GameOptions o;
  o.delay = std::nullopt;
  o.max_vertices = max_vertices;
  return std::make_unique<UniformizationArena>(preds, o);
}

double arena_size_bound(const TopDownAutomaton& a, int k, std::size_t domain_states) {
  const int kk = std::max(k, 1);
  const double qb = static_cast<double>(a.state_count() * domain_states);
  const double sigma = static_cast<double>(a.input().size());
  const double dirs = static_cast<double>(std::max(a.input().max_arity(), 1));
  double bound = std::pow(2.0, qb);
  for (int l = 1; l <= kk; ++l) bound += qb * std::pow(sigma, l) * std::pow(dirs, l - 1);
  for (int l = 1; l < kk; ++l) bound += qb * std::pow(sigma, l) * std::pow(dirs, l);
  return bound;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

class TransducerBuilder {
 public:
  TransducerBuilder(UniformizationArena& arena, const Solution& solution)
      : arena_(arena), sol_(solution), preds_(arena.predicates()), A_(preds_.spec()), T_(A_.input(), A_.output()) {}

  Transducer build() {
    const GameVertex& init = arena_.vertex(sol_.initial);
    T_.set_initial(state_for(Key::entry(init.set.front().first, init.set.front().second)));
    while (!pending_.empty()) {
      Key key = pending_.front();
      pending_.pop_front();
      process(key);
    }
    return std::move(T_);
  }

  /// Stand-alone fragment for a path-recognizable witness.
  Transducer build_fragment(const PathRecWitness& w) {
    const PathRecArena& pa = *w.arena;
    const LabeledPath& forced = pa.forced();
    if (forced.empty()) {
      T_.set_initial(state_for(frag_key(w, w.solution->initial)));
    } else {
      // Relay along the forced prefix, then continue as the grafted fragment.
      std::vector<StateId> relay;
      for (std::size_t k = 0; k < forced.length(); ++k) relay.push_back(add_state("f" + std::to_string(k), "forced prefix node " + std::to_string(k)));
      T_.set_initial(relay.front());
      for (std::size_t k = 0; k + 1 < forced.length(); ++k)
        T_.add_rule({relay[k], forced.labels[k], RuleTree::call(relay[k + 1], forced.dirs[k]), {}});
      T_.add_rule({relay.back(), forced.labels.back(), frag_move(w, *pa.forced_exit(), RuleTree::hole()), {}});
    }
    while (!pending_.empty()) {
      Key key = pending_.front();
      pending_.pop_front();
      process(key);
    }
    return std::move(T_);
  }

 private:
  struct Key {
    enum Kind { Entry, Relay, Frag, Closed } kind;
    StateId q = kNoState, b = 0;
    VertexId v = 0;
    const PathRecArena* arena = nullptr;
    Tree rep;

    static Key entry(StateId q, StateId b) { return {Entry, q, b, 0, nullptr, {}}; }
    static Key relay(VertexId v) { return {Relay, kNoState, 0, v, nullptr, {}}; }
    static Key frag(const PathRecArena* a, VertexId v) { return {Frag, kNoState, 0, v, a, {}}; }
    static Key closed(Tree rep, StateId b) { return {Closed, kNoState, b, 0, nullptr, std::move(rep)}; }

    friend bool operator<(const Key& x, const Key& y) {
      if (x.kind != y.kind) return x.kind < y.kind;
      if (x.q != y.q) return x.q < y.q;
      if (x.b != y.b) return x.b < y.b;
      if (x.v != y.v) return x.v < y.v;
      if (x.arena != y.arena) return std::less<const PathRecArena*>()(x.arena, y.arena);
      return x.rep < y.rep;
    }
  };

  StateId add_state(std::string name, std::string comment) {
    while (T_.find_state(name)) name += "_";
    StateId s = T_.add_state(name);
    T_.set_state_comment(s, std::move(comment));
    return s;
  }

  StateId state_for(const Key& key) {
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    std::string name, comment;
    const auto& dom = preds_.domain();
    switch (key.kind) {
      case Key::Entry:
        name = A_.state_name(key.q);
        if (dom.restricted()) name += "__" + dom.state_name(key.b);
        break;
      case Key::Relay:
        name = "d" + std::to_string(++relays_);
        comment = "delayed at " + arena_.describe(key.v);
        break;
      case Key::Frag:
        name = "p" + std::to_string(++fragments_);
        comment = "path reader " + const_cast<PathRecArena*>(key.arena)->describe(key.v);
        break;
      case Key::Closed:
        name = "p" + std::to_string(++fragments_);
        comment = "output fixed to " + print_term(key.rep, A_.output());
        if (dom.restricted()) comment += ", domain " + dom.state_name(key.b);
        break;
    }
    StateId s = add_state(name, comment);
    ids_.emplace(key, s);
    pending_.push_back(key);
    return s;
  }

  RuleTree uniform_witness(StateId q, StateId b) {
    auto w = preds_.uniform_output({{q, b}}, {});
    if (!w) throw std::logic_error("extraction: uniform output vanished");
    return RuleTree::from_tree(*w);
  }

  RuleTree exists_witness(StateId q) {
    auto w = preds_.exists_output(q);
    if (!w) throw std::logic_error("extraction: output witness vanished");
    return RuleTree::from_tree(*w);
  }

  void process(const Key& key) {
    const auto& dom = preds_.domain();
    const StateId self = ids_.at(key);
    switch (key.kind) {
      case Key::Entry:
        for (const auto& mv : dom.legal(key.b)) {
          GameVertex out{GameVertex::Kind::OutPath, {}, key.q, key.b, LabeledPath{{mv.symbol}, {}}};
          T_.add_rule({self, mv.symbol, follow(lookup(out), RuleTree::hole()), {}});
        }
        break;
      case Key::Relay: {
        const GameVertex gv = arena_.vertex(key.v);
        StateId end = arena_.domain_state_at_end(gv.b, gv.pi);
        for (const auto& mv : dom.legal(end)) {
          GameVertex out{GameVertex::Kind::OutPath, {}, gv.q, gv.b, gv.pi.with_symbol(mv.symbol)};
          T_.add_rule({self, mv.symbol, follow(lookup(out), RuleTree::hole()), {}});
        }
        break;
      }
      case Key::Frag: {
        const PathRecWitness& w = witness_of(key.arena);
        const auto& node = w.arena->node(key.v);
        const Position& p = w.arena->position(node.pos);
        for (const auto& mv : dom.legal(p.b)) {
          auto o = w.arena->find_out(node.pos, mv.symbol);
          if (!o) throw std::logic_error("extraction: unexplored path-reader vertex");
          T_.add_rule({self, mv.symbol, frag_move(w, *o, RuleTree::hole()), {}});
        }
        break;
      }
      case Key::Closed:
        for (const auto& mv : dom.legal(key.b)) {
          RuleTree rhs = mv.children.empty() ? RuleTree::from_tree(key.rep)
                                             : RuleTree::call(state_for(Key::closed(key.rep, mv.children.front())), 1);
          T_.add_rule({self, mv.symbol, std::move(rhs), {}});
        }
        break;
    }
  }

  VertexId lookup(const GameVertex& gv) {
    auto v = arena_.find(gv);
    if (!v || !sol_.reachable(*v)) throw StrategyGap("extraction reached an unexplored vertex");
    return *v;
  }

  const PathRecWitness& witness_of(const PathRecArena* a) {
    auto it = witnesses_.find(a);
    if (it == witnesses_.end()) throw std::logic_error("extraction: unknown path-reader witness");
    return it->second;
  }

  Key frag_key(const PathRecWitness& w, VertexId in_vertex) {
    witnesses_.emplace(w.arena.get(), w);
    const auto& node = w.arena->node(in_vertex);
    const Position& p = w.arena->position(node.pos);
    if (auto rep = w.arena->immediate_win(p)) return Key::closed(*rep, p.b);
    return Key::frag(w.arena.get(), in_vertex);
  }

  RuleTree frag_move(const PathRecWitness& w, VertexId out, RuleTree context) {
    witnesses_.emplace(w.arena.get(), w);
    auto idx = w.solution->strategy(out);
    if (!idx) throw StrategyGap("path reader has no winning move at " + w.arena->describe(out));
    const auto& om = w.arena->out_moves(out).at(*idx);
    if (om.close) return splice(context, RuleTree::from_tree(om.output));
    VertexId target = w.solution->moves(out).at(*idx).target;
    return splice(context, RuleTree::call(state_for(frag_key(w, target)), om.dir));
  }

  RuleTree follow(VertexId v, RuleTree context) {
    for (;;) {
      auto idx = sol_.strategy(v);
      if (!idx) throw StrategyGap("no winning move at " + arena_.describe(v));
      const MoveInfo info = arena_.move_info(v).at(*idx);
      const Move move = sol_.moves(v).at(*idx);
      const GameVertex gv = arena_.vertex(v);
      const SymbolId f = gv.pi.labels.front();
      const int n = A_.input().arity(f);
      const DomainMove* mv = preds_.domain().move(gv.b, f);
      switch (info.kind) {
        case MoveInfo::Kind::Emit: {
          const auto& tr = *A_.next(gv.q, A_.pair(f, info.symbol));
          const int m = A_.output().arity(info.symbol);
          RuleTree t = RuleTree::node(info.symbol);
          for (int l = 1; l <= m; ++l) {
            StateId ql = tr[static_cast<std::size_t>(l - 1)];
            if (l <= n)
              t.children.push_back(RuleTree::call(state_for(Key::entry(ql, mv->children[static_cast<std::size_t>(l - 1)])), l));
            else
              t.children.push_back(exists_witness(ql));
          }
          return splice(context, t);
        }
        case MoveInfo::Kind::Advance:
        case MoveInfo::Kind::Complete: {
          const auto& tr = *A_.next(gv.q, A_.pair(f, info.symbol));
          const int m = A_.output().arity(info.symbol);
          const int j = gv.pi.dirs.front();
          RuleTree s = RuleTree::node(info.symbol);
          for (int l = 1; l <= m; ++l) {
            StateId ql = tr[static_cast<std::size_t>(l - 1)];
            if (l == j)
              s.children.push_back(RuleTree::hole());
            else if (l <= n)
              s.children.push_back(uniform_witness(ql, mv->children[static_cast<std::size_t>(l - 1)]));
            else
              s.children.push_back(exists_witness(ql));
          }
          context = splice(context, s);
          if (info.kind == MoveInfo::Kind::Complete) return context;
          v = move.target;
          continue;
        }
        case MoveInfo::Kind::Delay:
          return splice(context, RuleTree::call(state_for(Key::relay(move.target)), info.dir));
        case MoveInfo::Kind::Stay: {
          const PathRecWitness* w = arena_.stay_witness(v);
          if (!w) throw std::logic_error("extraction: stay move without witness");
          auto exit = w->arena->forced_exit();
          if (!exit) throw std::logic_error("extraction: stay witness without forced prefix");
          return frag_move(*w, *exit, std::move(context));
        }
        case MoveInfo::Kind::Input:
          throw std::logic_error("extraction: input move at an Out vertex");
      }
    }
  }

  UniformizationArena& arena_;
  const Solution& sol_;
  Predicates& preds_;
  const TopDownAutomaton& A_;
  Transducer T_;
  std::map<Key, StateId> ids_;
  std::deque<Key> pending_;
  std::map<const PathRecArena*, PathRecWitness> witnesses_;
  int relays_ = 0;
  int fragments_ = 0;
};

/// Builder over a path-reader witness only.
class FragmentOnly {
 public:
  static Transducer build(const PathRecWitness& w) {
    GameOptions o;
    UniformizationArena dummy(w.arena->predicates(), o);
    Solution empty;
    TransducerBuilder b(dummy, empty);
    return b.build_fragment(w);
  }
};

}  // namespace

Transducer extract_transducer(UniformizationArena& arena, const Solution& solution) {
  if (!solution.out_wins()) throw StrategyGap("Out does not win from the initial vertex");
  TransducerBuilder b(arena, solution);
  return b.build();
}

Transducer build_path_recognizable_tdt(const PathRecWitness& witness) { return FragmentOnly::build(witness); }

// ---------------------------------------------------------------------------

SynthResult synthesize(const TopDownAutomaton& spec, const SynthOptions& options) {
  std::unique_ptr<DomainView> view = options.domain ? std::make_unique<DomainView>(spec.input(), *options.domain)
                                                    : std::make_unique<DomainView>(spec.input());
  Predicates preds(spec, *view);
  GameOptions go;
  go.delay = options.delay;
  go.max_vertices = options.max_vertices;
  go.pathrec_depth = options.pathrec_depth;
  if (go.delay && *go.delay < 0) throw std::invalid_argument("delay bound must be non-negative");
  UniformizationArena arena(preds, go);
  Solution sol = solve(arena, SolveOptions{options.max_vertices});
  SynthResult r;
  r.vertices = sol.vertex_count();
  r.stay_explanations = arena.stay_explanations();
  r.realizable = sol.out_wins();
  if (r.realizable) {
    r.transducer = extract_transducer(arena, sol);
  } else {
    for (const auto& [v, label] : sol.counterexample())
      r.counterexample.push_back(label.empty() ? arena.describe(v) : label + " -> " + arena.describe(v));
  }
  return r;
}

SynthResult synthesize_bounded(const TopDownAutomaton& spec, int k, const TopDownAutomaton* domain) {
  SynthOptions o;
  o.delay = k;
  o.domain = domain;
  return synthesize(spec, o);
}

SynthResult synthesize_unbounded(const TopDownAutomaton& spec, const TopDownAutomaton* domain) {
  SynthOptions o;
  o.delay = std::nullopt;
  o.domain = domain;
  return synthesize(spec, o);
}

}  // namespace tdt
