#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdtsynth/automata.hpp"
#include "tdtsynth/terms.hpp"

namespace tdt {

/// Right-hand side of a transducer rule: an output context whose variable
/// leaves are state calls q(x_j). Hole nodes appear only while special trees
/// are assembled during extraction.
struct RuleTree {
  enum class Kind { Symbol, Call, Hole };

  Kind kind = Kind::Symbol;
  SymbolId symbol = 0;
  StateId state = kNoState;
  int var = 0;
  std::vector<RuleTree> children;

  static RuleTree node(SymbolId s, std::vector<RuleTree> children = {}) {
    RuleTree t;
    t.symbol = s;
    t.children = std::move(children);
    return t;
  }
  static RuleTree call(StateId q, int var) {
    RuleTree t;
    t.kind = Kind::Call;
    t.state = q;
    t.var = var;
    return t;
  }
  static RuleTree hole() {
    RuleTree t;
    t.kind = Kind::Hole;
    return t;
  }
  static RuleTree from_tree(const Tree& t);

  friend bool operator==(const RuleTree& a, const RuleTree& b) {
    return a.kind == b.kind && a.symbol == b.symbol && a.state == b.state && a.var == b.var &&
           a.children == b.children;
  }
};

/// Replaces the single hole of `t` by `s`.
RuleTree splice(const RuleTree& t, const RuleTree& s);
bool has_hole(const RuleTree& t);
std::size_t call_count(const RuleTree& t);
/// The plain tree when `t` has neither calls nor holes.
std::optional<Tree> to_tree(const RuleTree& t);

struct Rule {
  StateId state = kNoState;
  std::optional<SymbolId> symbol;  // nullopt: ε-rule reading x1
  RuleTree rhs;
  std::string comment;
};

class Transducer {
 public:
  Transducer(RankedAlphabet input, RankedAlphabet output);

  const RankedAlphabet& input() const { return input_; }
  const RankedAlphabet& output() const { return output_; }

  StateId add_state(std::string name);
  std::optional<StateId> find_state(std::string_view name) const;
  const std::string& state_name(StateId q) const { return states_.at(static_cast<std::size_t>(q)); }
  std::size_t state_count() const { return states_.size(); }
  void set_state_comment(StateId q, std::string comment);
  const std::string& state_comment(StateId q) const { return comments_.at(static_cast<std::size_t>(q)); }

  void set_initial(StateId q);
  StateId initial() const { return initial_; }

  /// Validates the rule shape against both alphabets.
  void add_rule(Rule rule);
  const std::vector<Rule>& rules() const { return rules_; }
  /// First rule for (q, f), or nullptr.
  const Rule* find_rule(StateId q, SymbolId f) const;

  bool is_deterministic() const;

 private:
  RankedAlphabet input_;
  RankedAlphabet output_;
  std::vector<std::string> states_;
  std::vector<std::string> comments_;
  StateId initial_ = kNoState;
  std::vector<Rule> rules_;
  std::map<std::pair<StateId, SymbolId>, std::size_t> index_;
  bool has_epsilon_ = false;
  bool has_duplicate_ = false;
};

class StuckError : public std::runtime_error {
 public:
  StuckError(const std::string& what, StateId state, SymbolId symbol, Address input_node)
      : std::runtime_error(what), state_(state), symbol_(symbol), node_(std::move(input_node)) {}
  StateId state() const { return state_; }
  SymbolId symbol() const { return symbol_; }
  const Address& input_node() const { return node_; }

 private:
  StateId state_;
  SymbolId symbol_;
  Address node_;
};

/// (t, t', φ): the output t' carries state calls at its open leaves and φ maps
/// each of them to an input node.
struct Configuration {
  Tree input;
  RuleTree output;
  std::map<Address, Address> phi;

  bool finished() const { return phi.empty(); }
};

Configuration initial_configuration(const Transducer& T, const Tree& t);
/// State-labelled output nodes, left to right.
std::vector<Address> state_leaves(const Configuration& c);
Configuration step(const Transducer& T, const Configuration& c, const Address& at);

enum class Schedule {
  /// Repeated left-to-right sweeps; each sweep steps the state leaves present
  /// when it starts.
  Sweep,
  /// Always the leftmost state leaf.
  Leftmost,
};

struct Execution {
  Tree output;
  int max_delay = 0;
  std::vector<Configuration> trace;  // filled only on request
};

Execution execute_traced(const Transducer& T, const Tree& t, Schedule schedule = Schedule::Sweep,
                         bool record_trace = false);
Tree execute(const Transducer& T, const Tree& t);
int max_delay(const Transducer& T, const Tree& t);

/// Every rule is a relay q(f(x_1..x_i)) -> q'(x_j) or a leaf rule q(a) -> t.
bool is_path_recognizable_shape(const Transducer& T);
/// Same test restricted to the given states.
bool is_path_recognizable_shape(const Transducer& T, const std::vector<StateId>& states);
/// States reachable from q through rule calls (q included).
std::vector<StateId> reachable_states(const Transducer& T, StateId q);

std::string print_rule_tree(const Transducer& T, const RuleTree& t);
std::string print_rule(const Transducer& T, const Rule& r);
std::string print_configuration(const Transducer& T, const Configuration& c);

}  // namespace tdt
