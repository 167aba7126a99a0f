#include "tdtsynth/safety_game.hpp"

#include <deque>
#include <sstream>

namespace tdt {

VertexId ExplicitArena::add_vertex(Player owner, std::string name) {
  owners_.push_back(owner);
  names_.push_back(std::move(name));
  edges_.emplace_back();
  return owners_.size() - 1;
}

void ExplicitArena::add_edge(VertexId from, VertexId to, std::string label) {
  if (to >= owners_.size()) throw std::out_of_range("edge target");
  edges_.at(from).push_back({to, std::move(label)});
}

std::optional<std::size_t> Solution::strategy(VertexId v) const {
  if (!winning(v) || owner_[v] != Player::Out || choice_[v] == kNoChoice) return std::nullopt;
  return choice_[v];
}

std::optional<std::size_t> Solution::rank(VertexId v) const {
  if (!reachable(v) || !losing_[v]) return std::nullopt;
  return rank_[v];
}

std::size_t Solution::edge_count() const {
  std::size_t n = 0;
  for (VertexId v : order_) n += moves_[v].size();
  return n;
}

std::vector<std::pair<VertexId, std::string>> Solution::counterexample() const {
  std::vector<std::pair<VertexId, std::string>> play;
  if (out_wins()) return play;
  VertexId v = initial;
  play.emplace_back(v, "");
  while (!moves_[v].empty()) {
    const auto& ms = moves_[v];
    std::size_t best = 0;
    if (owner_[v] == Player::In) {
      for (std::size_t i = 0; i < ms.size(); ++i) {
        VertexId t = ms[i].target;
        if (losing_[t] && (!losing_[ms[best].target] || rank_[t] < rank_[ms[best].target])) best = i;
      }
    }
    v = ms[best].target;
    play.emplace_back(v, ms[best].label);
  }
  return play;
}

namespace {

template <typename T>
void grow(std::vector<T>& v, std::size_t n, const T& fill) {
  if (v.size() < n) v.resize(n, fill);
}

}  // namespace

Solution solve(Arena& arena, const SolveOptions& options) {
  Solution s;
  s.initial = arena.initial();
  auto touch = [&](VertexId v) {
    grow(s.seen_, v + 1, char{0});
    grow(s.owner_, v + 1, Player::In);
    grow(s.moves_, v + 1, std::vector<Move>{});
  };

  // Forward exploration.
  std::deque<VertexId> queue{s.initial};
  touch(s.initial);
  s.seen_[s.initial] = 1;
  s.order_.push_back(s.initial);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    s.owner_[v] = arena.owner(v);
    s.moves_[v] = arena.successors(v);
    for (const auto& m : s.moves_[v]) {
      touch(m.target);
      if (s.seen_[m.target]) continue;
      s.seen_[m.target] = 1;
      s.order_.push_back(m.target);
      if (s.order_.size() > options.max_vertices)
        throw BudgetExceeded("game exploration exceeded " + std::to_string(options.max_vertices) + " vertices");
      queue.push_back(m.target);
    }
  }

  // Backward attractor to Out's dead ends, layered breadth-first.
  const std::size_t n = s.seen_.size();
  std::vector<std::vector<VertexId>> preds(n);
  std::vector<std::size_t> pending(n, 0);
  for (VertexId v : s.order_) {
    for (const auto& m : s.moves_[v]) preds[m.target].push_back(v);
    pending[v] = s.moves_[v].size();
  }
  s.losing_.assign(n, 0);
  s.rank_.assign(n, 0);
  std::deque<VertexId> work;
  for (VertexId v : s.order_)
    if (s.owner_[v] == Player::Out && s.moves_[v].empty()) {
      s.losing_[v] = 1;
      work.push_back(v);
    }
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    for (VertexId p : preds[v]) {
      if (s.losing_[p]) continue;
      if (s.owner_[p] == Player::In || --pending[p] == 0) {
        s.losing_[p] = 1;
        s.rank_[p] = s.rank_[v] + 1;
        work.push_back(p);
      }
    }
  }

  s.choice_.assign(n, kNoChoice);
  for (VertexId v : s.order_) {
    if (s.losing_[v] || s.owner_[v] != Player::Out) continue;
    const auto& ms = s.moves_[v];
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (!s.losing_[ms[i].target]) {
        s.choice_[v] = i;
        break;
      }
  }
  return s;
}

Play simulate(const Solution& solution, const Adversary& adversary, std::size_t max_steps,
              std::optional<VertexId> start) {
  Play play;
  VertexId v = start.value_or(solution.initial);
  if (!solution.reachable(v)) throw std::invalid_argument("simulate: start vertex was not explored");
  play.vertices.push_back(v);
  for (std::size_t step = 0; step < max_steps; ++step) {
    const auto& ms = solution.moves(v);
    std::size_t pick = 0;
    if (solution.owner(v) == Player::Out) {
      if (ms.empty()) {
        play.hit_bad = true;
        return play;
      }
      auto choice = solution.strategy(v);
      if (!choice) throw StrategyGap("strategy undefined at Out vertex " + std::to_string(v));
      pick = *choice;
    } else {
      if (ms.empty()) return play;
      auto choice = adversary(v, ms);
      if (!choice) return play;
      if (*choice >= ms.size()) throw std::out_of_range("adversary picked a missing move");
      pick = *choice;
    }
    play.labels.push_back(ms[pick].label);
    v = ms[pick].target;
    play.vertices.push_back(v);
  }
  if (solution.bad(v)) play.hit_bad = true;
  return play;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(Arena& arena, const Solution& solution) {
  std::ostringstream os;
  os << "digraph arena {\n  rankdir=TB;\n";
  for (VertexId v : solution.vertices()) {
    os << "  v" << v << " [label=\"" << escape(arena.describe(v)) << "\", shape=box";
    if (solution.owner(v) == Player::Out) os << ", style=rounded";
    if (solution.bad(v)) os << ", color=red";
    if (v == solution.initial) os << ", penwidth=2";
    os << "];\n";
  }
  for (VertexId v : solution.vertices()) {
    auto choice = solution.strategy(v);
    const auto& ms = solution.moves(v);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      os << "  v" << v << " -> v" << ms[i].target;
      os << " [label=\"" << escape(ms[i].label) << "\"";
      if (choice && *choice == i) os << ", style=bold";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace tdt
