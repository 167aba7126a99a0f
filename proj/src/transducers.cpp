#include "tdtsynth/transducers.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tdt {

RuleTree RuleTree::from_tree(const Tree& t) {
  if (t.symbol == kHole) return hole();
  RuleTree r = node(t.symbol);
  for (const auto& c : t.children) r.children.push_back(from_tree(c));
  return r;
}

namespace {

bool splice_into(RuleTree& t, const RuleTree& s) {
  if (t.kind == RuleTree::Kind::Hole) {
    t = s;
    return true;
  }
  for (auto& c : t.children)
    if (splice_into(c, s)) return true;
  return false;
}

}  // namespace

RuleTree splice(const RuleTree& t, const RuleTree& s) {
  RuleTree out = t;
  if (!splice_into(out, s)) throw std::invalid_argument("splice: context has no hole");
  return out;
}

bool has_hole(const RuleTree& t) {
  if (t.kind == RuleTree::Kind::Hole) return true;
  return std::any_of(t.children.begin(), t.children.end(), [](const RuleTree& c) { return has_hole(c); });
}

std::size_t call_count(const RuleTree& t) {
  if (t.kind == RuleTree::Kind::Call) return 1;
  std::size_t n = 0;
  for (const auto& c : t.children) n += call_count(c);
  return n;
}

std::optional<Tree> to_tree(const RuleTree& t) {
  if (t.kind != RuleTree::Kind::Symbol) return std::nullopt;
  Tree out(t.symbol);
  for (const auto& c : t.children) {
    auto sub = to_tree(c);
    if (!sub) return std::nullopt;
    out.children.push_back(std::move(*sub));
  }
  return out;
}

// ---------------------------------------------------------------------------

Transducer::Transducer(RankedAlphabet input, RankedAlphabet output)
    : input_(std::move(input)), output_(std::move(output)) {}

StateId Transducer::add_state(std::string name) {
  if (find_state(name)) throw std::invalid_argument("duplicate state '" + name + "'");
  states_.push_back(std::move(name));
  comments_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

std::optional<StateId> Transducer::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == name) return static_cast<StateId>(i);
  return std::nullopt;
}

void Transducer::set_state_comment(StateId q, std::string comment) {
  comments_.at(static_cast<std::size_t>(q)) = std::move(comment);
}

void Transducer::set_initial(StateId q) {
  if (q < 0 || static_cast<std::size_t>(q) >= states_.size()) throw std::out_of_range("initial state");
  initial_ = q;
}

namespace {

void check_rhs(const Transducer& T, const RuleTree& t, int max_var) {
  switch (t.kind) {
    case RuleTree::Kind::Hole:
      throw std::invalid_argument("rule right-hand side contains a hole");
    case RuleTree::Kind::Call:
      if (t.state < 0 || static_cast<std::size_t>(t.state) >= T.state_count())
        throw std::invalid_argument("rule calls an unknown state");
      if (t.var < 1 || t.var > max_var)
        throw std::invalid_argument("rule uses variable x" + std::to_string(t.var) + " outside x1..x" +
                                    std::to_string(max_var));
      if (!t.children.empty()) throw std::invalid_argument("state call with children");
      return;
    case RuleTree::Kind::Symbol:
      if (t.symbol < 0 || static_cast<std::size_t>(t.symbol) >= T.output().size())
        throw std::invalid_argument("rule emits an unknown output symbol");
      if (T.output().arity(t.symbol) != static_cast<int>(t.children.size()))
        throw std::invalid_argument("rule emits '" + T.output().name(t.symbol) + "' with " +
                                    std::to_string(t.children.size()) + " children");
      for (const auto& c : t.children) check_rhs(T, c, max_var);
      return;
  }
}

}  // namespace

void Transducer::add_rule(Rule rule) {
  if (rule.state < 0 || static_cast<std::size_t>(rule.state) >= states_.size())
    throw std::invalid_argument("rule for unknown state");
  int max_var = 1;
  if (rule.symbol) {
    if (*rule.symbol < 0 || static_cast<std::size_t>(*rule.symbol) >= input_.size())
      throw std::invalid_argument("rule reads an unknown input symbol");
    max_var = input_.arity(*rule.symbol);
  }
  check_rhs(*this, rule.rhs, max_var);
  if (rule.symbol) {
    auto key = std::make_pair(rule.state, *rule.symbol);
    if (index_.count(key))
      has_duplicate_ = true;
    else
      index_[key] = rules_.size();
  } else {
    has_epsilon_ = true;
  }
  rules_.push_back(std::move(rule));
}

const Rule* Transducer::find_rule(StateId q, SymbolId f) const {
  auto it = index_.find({q, f});
  return it == index_.end() ? nullptr : &rules_[it->second];
}

bool Transducer::is_deterministic() const { return !has_epsilon_ && !has_duplicate_ && initial_ != kNoState; }

// ---------------------------------------------------------------------------
// Configurations

Configuration initial_configuration(const Transducer& T, const Tree& t) {
  check_tree(t, T.input());
  if (T.initial() == kNoState) throw std::invalid_argument("transducer has no initial state");
  Configuration c;
  c.input = t;
  c.output = RuleTree::call(T.initial(), 0);
  c.phi[{}] = {};
  return c;
}

std::vector<Address> state_leaves(const Configuration& c) {
  // φ is keyed by output address; lexicographic order on addresses is the
  // left-to-right order of leaves.
  std::vector<Address> out;
  out.reserve(c.phi.size());
  for (const auto& [u, v] : c.phi) out.push_back(u);
  return out;
}

namespace {

RuleTree* node_at(RuleTree& t, const Address& u) {
  RuleTree* cur = &t;
  for (int d : u) {
    if (d < 1 || static_cast<std::size_t>(d) > cur->children.size()) return nullptr;
    cur = &cur->children[static_cast<std::size_t>(d - 1)];
  }
  return cur;
}

void instantiate(RuleTree& t, Address& at, const Address& input_node, std::map<Address, Address>& phi) {
  if (t.kind == RuleTree::Kind::Call) {
    Address v = input_node;
    if (t.var > 0) v.push_back(t.var);
    phi[at] = std::move(v);
    t.var = 0;
    return;
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    at.push_back(static_cast<int>(i + 1));
    instantiate(t.children[i], at, input_node, phi);
    at.pop_back();
  }
}

}  // namespace

Configuration step(const Transducer& T, const Configuration& c, const Address& at) {
  auto it = c.phi.find(at);
  if (it == c.phi.end()) throw std::invalid_argument("step: output node " + format_address(at) + " carries no state");
  const Address input_node = it->second;
  const Tree* in = subtree(c.input, input_node);
  if (!in) throw std::logic_error("step: correspondence points outside the input tree");
  Configuration next = c;
  RuleTree* node = node_at(next.output, at);
  const StateId q = node->state;
  const Rule* rule = T.find_rule(q, in->symbol);
  if (!rule) {
    throw StuckError("no rule for state " + T.state_name(q) + " on input symbol " + T.input().name(in->symbol) +
                         " at input node " + format_address(input_node),
                     q, in->symbol, input_node);
  }
  next.phi.erase(at);
  *node = rule->rhs;
  Address cursor = at;
  instantiate(*node, cursor, input_node, next.phi);
  return next;
}

namespace {

int delay_of(const Configuration& c) {
  int d = 0;
  for (const auto& [u, v] : c.phi) d = std::max(d, static_cast<int>(v.size()) - static_cast<int>(u.size()));
  return d;
}

}  // namespace

Execution execute_traced(const Transducer& T, const Tree& t, Schedule schedule, bool record_trace) {
  if (!T.is_deterministic()) throw std::invalid_argument("execute: transducer is not deterministic");
  Configuration c = initial_configuration(T, t);
  Execution ex;
  ex.max_delay = delay_of(c);
  if (record_trace) ex.trace.push_back(c);
  auto advance = [&](const Address& at) {
    c = step(T, c, at);
    ex.max_delay = std::max(ex.max_delay, delay_of(c));
    if (record_trace) ex.trace.push_back(c);
  };
  while (!c.finished()) {
    if (schedule == Schedule::Leftmost) {
      advance(c.phi.begin()->first);
      continue;
    }
    // Stepping one leaf never moves another leaf's address.
    for (const auto& at : state_leaves(c)) advance(at);
  }
  ex.output = *to_tree(c.output);
  return ex;
}

Tree execute(const Transducer& T, const Tree& t) { return execute_traced(T, t).output; }

int max_delay(const Transducer& T, const Tree& t) { return execute_traced(T, t).max_delay; }

namespace {

bool rule_is_path_shaped(const Transducer& T, const Rule& r) {
  if (!r.symbol) return false;
  if (r.rhs.kind == RuleTree::Kind::Call) return true;
  return T.input().arity(*r.symbol) == 0 && call_count(r.rhs) == 0 && !has_hole(r.rhs);
}

void collect_calls(const RuleTree& t, std::vector<StateId>& out) {
  if (t.kind == RuleTree::Kind::Call) out.push_back(t.state);
  for (const auto& c : t.children) collect_calls(c, out);
}

}  // namespace

bool is_path_recognizable_shape(const Transducer& T) {
  return std::all_of(T.rules().begin(), T.rules().end(), [&](const Rule& r) { return rule_is_path_shaped(T, r); });
}

bool is_path_recognizable_shape(const Transducer& T, const std::vector<StateId>& states) {
  std::set<StateId> wanted(states.begin(), states.end());
  return std::all_of(T.rules().begin(), T.rules().end(),
                     [&](const Rule& r) { return !wanted.count(r.state) || rule_is_path_shaped(T, r); });
}

std::vector<StateId> reachable_states(const Transducer& T, StateId q) {
  std::vector<char> seen(T.state_count(), 0);
  std::vector<StateId> order{q}, stack{q};
  seen[static_cast<std::size_t>(q)] = 1;
  while (!stack.empty()) {
    StateId p = stack.back();
    stack.pop_back();
    for (const auto& r : T.rules()) {
      if (r.state != p) continue;
      std::vector<StateId> calls;
      collect_calls(r.rhs, calls);
      for (StateId s : calls) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        seen[static_cast<std::size_t>(s)] = 1;
        order.push_back(s);
        stack.push_back(s);
      }
    }
  }
  return order;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_rhs(std::ostringstream& os, const Transducer& T, const RuleTree& t) {
  switch (t.kind) {
    case RuleTree::Kind::Hole:
      os << "*";
      return;
    case RuleTree::Kind::Call:
      os << T.state_name(t.state);
      if (t.var > 0) os << " x" << t.var;
      return;
    case RuleTree::Kind::Symbol:
      os << T.output().name(t.symbol);
      if (t.children.empty()) return;
      os << "(";
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i) os << ", ";
        print_rhs(os, T, t.children[i]);
      }
      os << ")";
      return;
  }
}

}  // namespace

std::string print_rule_tree(const Transducer& T, const RuleTree& t) {
  std::ostringstream os;
  print_rhs(os, T, t);
  return os.str();
}

std::string print_rule(const Transducer& T, const Rule& r) {
  std::ostringstream os;
  os << T.state_name(r.state);
  if (r.symbol) {
    os << " " << T.input().name(*r.symbol);
    int n = T.input().arity(*r.symbol);
    if (n > 0) {
      os << "(";
      for (int i = 1; i <= n; ++i) os << (i > 1 ? "," : "") << "x" << i;
      os << ")";
    }
  }
  os << " -> ";
  print_rhs(os, T, r.rhs);
  return os.str();
}

std::string print_configuration(const Transducer& T, const Configuration& c) {
  std::ostringstream os;
  os << "(" << print_term(c.input, T.input()) << ", ";
  print_rhs(os, T, c.output);
  os << ", {";
  bool first = true;
  for (const auto& [u, v] : c.phi) {
    os << (first ? "" : ", ") << format_address(u) << "->" << format_address(v);
    first = false;
  }
  os << "})";
  return os.str();
}

}  // namespace tdt
