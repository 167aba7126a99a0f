#include "tdtsynth/automata.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace tdt {

TopDownAutomaton::TopDownAutomaton(RankedAlphabet input)
    : conv_(std::move(input), RankedAlphabet{}), has_output_(false) {}

TopDownAutomaton::TopDownAutomaton(RankedAlphabet input, RankedAlphabet output)
    : conv_(std::move(input), std::move(output)), has_output_(true) {}

int TopDownAutomaton::symbol_arity(SymbolId s) const {
  return has_output_ ? conv_.arity(s) : conv_.input().arity(s);
}

std::string TopDownAutomaton::symbol_name(SymbolId s) const {
  return has_output_ ? conv_.name(s) : conv_.input().name(s);
}

std::vector<SymbolId> TopDownAutomaton::symbols() const {
  std::vector<SymbolId> out;
  if (!has_output_) {
    for (std::size_t i = 0; i < input().size(); ++i) out.push_back(static_cast<SymbolId>(i));
    return out;
  }
  for (std::size_t p = 1; p < conv_.slots(); ++p) out.push_back(static_cast<SymbolId>(p));
  return out;
}

StateId TopDownAutomaton::add_state(std::string name) {
  if (find_state(name)) throw std::invalid_argument("duplicate state '" + name + "'");
  states_.push_back(std::move(name));
  return static_cast<StateId>(states_.size() - 1);
}

std::optional<StateId> TopDownAutomaton::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == name) return static_cast<StateId>(i);
  return std::nullopt;
}

void TopDownAutomaton::add_initial(StateId q) {
  if (q < 0 || static_cast<std::size_t>(q) >= states_.size()) throw std::out_of_range("initial state");
  if (std::find(initials_.begin(), initials_.end(), q) == initials_.end()) initials_.push_back(q);
}

void TopDownAutomaton::add_transition(StateId q, SymbolId symbol, std::vector<StateId> children) {
  if (q < 0 || static_cast<std::size_t>(q) >= states_.size()) throw std::out_of_range("transition source");
  if (has_output_ ? !conv_.valid(symbol) : (symbol < 0 || static_cast<std::size_t>(symbol) >= input().size()))
    throw std::out_of_range("transition symbol");
  if (static_cast<int>(children.size()) != symbol_arity(symbol))
    throw std::invalid_argument("transition (" + state_name(q) + ", " + symbol_name(symbol) + ") has " +
                                std::to_string(children.size()) + " successor states, expected " +
                                std::to_string(symbol_arity(symbol)));
  for (StateId c : children)
    if (c < 0 || static_cast<std::size_t>(c) >= states_.size()) throw std::out_of_range("transition target");
  auto& slot = delta_[{q, symbol}];
  if (std::find(slot.begin(), slot.end(), children) != slot.end()) return;
  slot.push_back(children);
  ordered_.emplace_back(q, symbol, std::move(children));
}

const std::vector<std::vector<StateId>>& TopDownAutomaton::transitions(StateId q, SymbolId symbol) const {
  static const std::vector<std::vector<StateId>> kNone;
  auto it = delta_.find({q, symbol});
  return it == delta_.end() ? kNone : it->second;
}

const std::vector<StateId>* TopDownAutomaton::next(StateId q, SymbolId symbol) const {
  auto it = delta_.find({q, symbol});
  if (it == delta_.end() || it->second.empty()) return nullptr;
  return &it->second.front();
}

std::size_t TopDownAutomaton::transition_count() const { return ordered_.size(); }

bool TopDownAutomaton::is_deterministic() const {
  if (initials_.size() != 1) return false;
  return std::all_of(delta_.begin(), delta_.end(), [](const auto& kv) { return kv.second.size() <= 1; });
}

std::string TopDownAutomaton::print_term(const Tree& t) const {
  return has_output_ ? tdt::print_term(t, conv_) : tdt::print_term(t, conv_.input());
}

Tree TopDownAutomaton::parse_term(std::string_view text) const {
  return has_output_ ? tdt::parse_term(text, conv_) : tdt::parse_term(text, conv_.input());
}

// ---------------------------------------------------------------------------
// Runs

StateId Run::at(const Address& u) const {
  for (const auto& [addr, q] : states)
    if (addr == u) return q;
  return kNoState;
}

namespace {

class RunSearch {
 public:
  explicit RunSearch(const TopDownAutomaton& a) : a_(a) {}

  bool accepts(StateId q, const Tree& t) {
    auto key = std::make_pair(&t, q);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = false;
    for (const auto& tuple : a_.transitions(q, t.symbol)) {
      if (tuple.size() != t.children.size()) continue;
      bool all = true;
      for (std::size_t i = 0; i < tuple.size() && all; ++i) all = accepts(tuple[i], t.children[i]);
      if (all) {
        ok = true;
        break;
      }
    }
    memo_[key] = ok;
    return ok;
  }

  void build(StateId q, const Tree& t, Address& u, Run& out) {
    out.states.emplace_back(u, q);
    for (const auto& tuple : a_.transitions(q, t.symbol)) {
      if (tuple.size() != t.children.size()) continue;
      bool all = true;
      for (std::size_t i = 0; i < tuple.size() && all; ++i) all = accepts(tuple[i], t.children[i]);
      if (!all) continue;
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        u.push_back(static_cast<int>(i + 1));
        build(tuple[i], t.children[i], u, out);
        u.pop_back();
      }
      return;
    }
  }

 private:
  const TopDownAutomaton& a_;
  std::map<std::pair<const Tree*, StateId>, bool> memo_;
};

void check_symbols(const TopDownAutomaton& a, const Tree& t) {
  bool ok = a.is_convolution() ? a.convolution().valid(t.symbol)
                               : t.symbol >= 0 && static_cast<std::size_t>(t.symbol) < a.input().size();
  if (!ok || a.symbol_arity(t.symbol) != static_cast<int>(t.children.size()))
    throw std::invalid_argument("tree is not over the automaton's alphabet");
  for (const auto& c : t.children) check_symbols(a, c);
}

}  // namespace

std::optional<Run> run_from(const TopDownAutomaton& a, StateId q, const Tree& t) {
  check_symbols(a, t);
  RunSearch search(a);
  if (!search.accepts(q, t)) return std::nullopt;
  Run r;
  Address u;
  search.build(q, t, u, r);
  return r;
}

std::optional<Run> run(const TopDownAutomaton& a, const Tree& t) {
  check_symbols(a, t);
  RunSearch search(a);
  for (StateId q : a.initials()) {
    if (!search.accepts(q, t)) continue;
    Run r;
    Address u;
    search.build(q, t, u, r);
    return r;
  }
  return std::nullopt;
}

bool accepts(const TopDownAutomaton& a, const Tree& t) { return run(a, t).has_value(); }

bool accepts_from(const TopDownAutomaton& a, StateId q, const Tree& t) {
  check_symbols(a, t);
  RunSearch search(a);
  return search.accepts(q, t);
}

std::vector<bool> productive_states(const TopDownAutomaton& a) {
  std::vector<bool> prod(a.state_count(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [q, sym, children] : a.transition_list()) {
      if (prod[static_cast<std::size_t>(q)]) continue;
      if (std::all_of(children.begin(), children.end(), [&](StateId c) { return prod[static_cast<std::size_t>(c)]; })) {
        prod[static_cast<std::size_t>(q)] = true;
        changed = true;
      }
    }
  }
  return prod;
}

// ---------------------------------------------------------------------------
// DomainView

DomainView::DomainView(const RankedAlphabet& input) {
  legal_.resize(1);
  for (std::size_t f = 0; f < input.size(); ++f)
    legal_[0].push_back({static_cast<SymbolId>(f),
                         std::vector<StateId>(static_cast<std::size_t>(input.arity(static_cast<SymbolId>(f))), 0)});
}

DomainView::DomainView(const RankedAlphabet& input, const TopDownAutomaton& dom) : dom_(&dom) {
  if (dom.is_convolution()) throw std::invalid_argument("domain automaton must be over the input alphabet");
  if (!(dom.input() == input)) throw std::invalid_argument("domain automaton alphabet differs from the specification's input alphabet");
  if (!dom.is_deterministic()) throw std::invalid_argument("domain automaton must be deterministic");
  auto prod = productive_states(dom);
  legal_.resize(dom.state_count());
  for (std::size_t b = 0; b < dom.state_count(); ++b) {
    for (std::size_t f = 0; f < input.size(); ++f) {
      const auto* children = dom.next(static_cast<StateId>(b), static_cast<SymbolId>(f));
      if (!children) continue;
      if (!std::all_of(children->begin(), children->end(), [&](StateId c) { return prod[static_cast<std::size_t>(c)]; }))
        continue;
      legal_[b].push_back({static_cast<SymbolId>(f), *children});
    }
  }
}

StateId DomainView::initial() const { return dom_ ? dom_->initials().front() : 0; }

std::size_t DomainView::state_count() const { return legal_.size(); }

const DomainMove* DomainView::move(StateId b, SymbolId f) const {
  for (const auto& m : legal(b))
    if (m.symbol == f) return &m;
  return nullptr;
}

std::string DomainView::state_name(StateId b) const { return dom_ ? dom_->state_name(b) : std::string("*"); }

// ---------------------------------------------------------------------------
// Predicates

Predicates::Predicates(const TopDownAutomaton& spec, const DomainView& domain) : spec_(spec), domain_(&domain) {
  if (!spec.is_convolution()) throw std::invalid_argument("specification must be a convolution automaton");
  if (!spec.is_deterministic()) throw std::invalid_argument("specification automaton must be deterministic");
  for (std::size_t i = 0; i < spec.input().size(); ++i) in_syms_.push_back(static_cast<SymbolId>(i));
  for (std::size_t i = 0; i < spec.output().size(); ++i) out_syms_.push_back(static_cast<SymbolId>(i));
  compute_universal();
  compute_exists();
}

Predicates::Predicates(const TopDownAutomaton& spec)
    : spec_(spec), owned_domain_(std::make_unique<DomainView>(spec.input())), domain_(owned_domain_.get()) {
  if (!spec.is_convolution()) throw std::invalid_argument("specification must be a convolution automaton");
  if (!spec.is_deterministic()) throw std::invalid_argument("specification automaton must be deterministic");
  for (std::size_t i = 0; i < spec.input().size(); ++i) in_syms_.push_back(static_cast<SymbolId>(i));
  for (std::size_t i = 0; i < spec.output().size(); ++i) out_syms_.push_back(static_cast<SymbolId>(i));
  compute_universal();
  compute_exists();
}

void Predicates::compute_universal() {
  // Greatest fixpoint: (q, b) stays until some legal input symbol from b has
  // no ⊥-padded transition from q, or leads to a pair already removed.
  std::size_t nq = spec_.state_count(), nb = domain_->state_count();
  universal_.assign(nq, std::vector<char>(nb, 1));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t q = 0; q < nq; ++q)
      for (std::size_t b = 0; b < nb; ++b) {
        if (!universal_[q][b]) continue;
        for (const auto& m : domain_->legal(static_cast<StateId>(b))) {
          const auto* tr = spec_.next(static_cast<StateId>(q), spec_.pair(m.symbol, kBottom));
          bool ok = tr != nullptr;
          for (std::size_t l = 0; ok && l < m.children.size(); ++l)
            ok = universal_[static_cast<std::size_t>((*tr)[l])][static_cast<std::size_t>(m.children[l])];
          if (!ok) {
            universal_[q][b] = 0;
            changed = true;
            break;
          }
        }
      }
  }
}

void Predicates::compute_exists() {
  // Least fixpoint in rounds; the first output symbol (declaration order)
  // solvable in the earliest round gives a minimal-height witness.
  exists_.assign(spec_.state_count(), std::nullopt);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::pair<std::size_t, Tree>> fresh;
    for (std::size_t q = 0; q < spec_.state_count(); ++q) {
      if (exists_[q]) continue;
      for (SymbolId g : out_syms_) {
        const auto* tr = spec_.next(static_cast<StateId>(q), spec_.pair(kBottom, g));
        if (!tr) continue;
        bool ok = std::all_of(tr->begin(), tr->end(), [&](StateId c) { return exists_[static_cast<std::size_t>(c)].has_value(); });
        if (!ok) continue;
        Tree w(g);
        for (StateId c : *tr) w.children.push_back(*exists_[static_cast<std::size_t>(c)]);
        fresh.emplace_back(q, std::move(w));
        break;
      }
    }
    for (auto& [q, w] : fresh) {
      exists_[q] = std::move(w);
      changed = true;
    }
  }
}

bool Predicates::univ_input(StateId q, StateId b) {
  return universal_.at(static_cast<std::size_t>(q)).at(static_cast<std::size_t>(b)) != 0;
}

std::optional<Tree> Predicates::exists_output(StateId q) { return exists_.at(static_cast<std::size_t>(q)); }

std::optional<Predicates::Option> Predicates::local_option(const Key& key, SymbolId g) {
  const int m = spec_.output().arity(g);
  std::vector<std::set<StatePair>> eq(static_cast<std::size_t>(m));
  std::vector<std::set<StateId>> bot(static_cast<std::size_t>(m));
  for (const auto& [q, b] : key.first) {
    for (const auto& mv : domain_->legal(b)) {
      const auto* tr = spec_.next(q, spec_.pair(mv.symbol, g));
      if (!tr) return std::nullopt;
      const int n = static_cast<int>(mv.children.size());
      for (int l = 1; l <= std::max(n, m); ++l) {
        StateId ql = (*tr)[static_cast<std::size_t>(l - 1)];
        if (l <= n && l <= m) {
          eq[static_cast<std::size_t>(l - 1)].insert({ql, mv.children[static_cast<std::size_t>(l - 1)]});
        } else if (l <= n) {
          if (!univ_input(ql, mv.children[static_cast<std::size_t>(l - 1)])) return std::nullopt;
        } else {
          bot[static_cast<std::size_t>(l - 1)].insert(ql);
        }
      }
    }
  }
  for (StateId q : key.second) {
    const auto* tr = spec_.next(q, spec_.pair(kBottom, g));
    if (!tr) return std::nullopt;
    for (int l = 0; l < m; ++l) bot[static_cast<std::size_t>(l)].insert((*tr)[static_cast<std::size_t>(l)]);
  }
  Option opt{g, {}};
  for (int l = 0; l < m; ++l)
    opt.children.emplace_back(std::vector<StatePair>(eq[static_cast<std::size_t>(l)].begin(), eq[static_cast<std::size_t>(l)].end()),
                              std::vector<StateId>(bot[static_cast<std::size_t>(l)].begin(), bot[static_cast<std::size_t>(l)].end()));
  return opt;
}

void Predicates::solve_from(const Key& root) {
  // Forward: expand every obligation pair reachable from root.
  std::vector<Key> fresh;
  std::vector<Key> stack{root};
  while (!stack.empty()) {
    Key key = std::move(stack.back());
    stack.pop_back();
    Node& node = nodes_[key];
    if (node.expanded) continue;
    node.expanded = true;
    fresh.push_back(key);
    for (SymbolId g : out_syms_) {
      auto opt = local_option(key, g);
      if (!opt) continue;
      for (const auto& child : opt->children)
        if (!nodes_[child].expanded) stack.push_back(child);
      nodes_[key].options.push_back(std::move(*opt));
    }
  }
  // Backward: least fixpoint in rounds over the freshly expanded pairs.
  // Previously decided pairs keep their (exact) status.
  for (int round = 0;; ++round) {
    std::vector<std::pair<Key*, std::size_t>> solved_now;
    for (auto& key : fresh) {
      Node& node = nodes_.at(key);
      if (node.solution) continue;
      for (std::size_t i = 0; i < node.options.size(); ++i) {
        const auto& opt = node.options[i];
        bool ok = std::all_of(opt.children.begin(), opt.children.end(), [&](const Key& c) {
          const Node& cn = nodes_.at(c);
          return cn.solution.has_value() && (cn.decided || cn.round < round);
        });
        if (ok) {
          solved_now.emplace_back(&key, i);
          break;
        }
      }
    }
    if (solved_now.empty()) break;
    for (auto& [key, i] : solved_now) {
      Node& node = nodes_.at(*key);
      node.solution = i;
      node.round = round;
    }
  }
  for (auto& key : fresh) nodes_.at(key).decided = true;
}

Tree Predicates::build_witness(const Key& key) const {
  const Node& node = nodes_.at(key);
  const Option& opt = node.options.at(*node.solution);
  Tree t(opt.g);
  for (const auto& c : opt.children) t.children.push_back(build_witness(c));
  return t;
}

std::optional<Tree> Predicates::uniform_output(const std::vector<StatePair>& eq, const std::vector<StateId>& bot) {
  std::lock_guard lock(mutex_);
  Key key{eq, bot};
  std::sort(key.first.begin(), key.first.end());
  key.first.erase(std::unique(key.first.begin(), key.first.end()), key.first.end());
  std::sort(key.second.begin(), key.second.end());
  key.second.erase(std::unique(key.second.begin(), key.second.end()), key.second.end());
  auto it = nodes_.find(key);
  if (it == nodes_.end() || !it->second.decided) solve_from(key);
  const Node& node = nodes_.at(key);
  if (!node.solution) return std::nullopt;
  return build_witness(key);
}

std::size_t Predicates::uniform_pairs_explored() const {
  std::lock_guard lock(mutex_);
  return nodes_.size();
}

// ---------------------------------------------------------------------------

bool pred_univ_input(const TopDownAutomaton& a, StateId q) {
  Predicates p(a);
  return p.univ_input(q, 0);
}

std::optional<Tree> pred_exists_output(const TopDownAutomaton& a, StateId q) {
  Predicates p(a);
  return p.exists_output(q);
}

std::optional<Tree> uniform_output(const TopDownAutomaton& a, const std::set<StateId>& eq,
                                   const std::set<StateId>& bot) {
  Predicates p(a);
  std::vector<StatePair> pairs;
  for (StateId q : eq) pairs.emplace_back(q, 0);
  return p.uniform_output(pairs, std::vector<StateId>(bot.begin(), bot.end()));
}

}  // namespace tdt
