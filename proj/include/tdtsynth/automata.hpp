#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "tdtsynth/terms.hpp"

namespace tdt {

using StateId = std::int32_t;
inline constexpr StateId kNoState = -1;

/// Top-down tree automaton over a plain ranked alphabet or, when an output
/// alphabet is present, over the convolution alphabet Σ⊥ × Γ⊥ (symbol ids are
/// then pair ids of convolution()).
class TopDownAutomaton {
 public:
  explicit TopDownAutomaton(RankedAlphabet input);
  TopDownAutomaton(RankedAlphabet input, RankedAlphabet output);

  bool is_convolution() const { return has_output_; }
  const RankedAlphabet& input() const { return conv_.input(); }
  const RankedAlphabet& output() const { return conv_.output(); }
  const ConvolutionAlphabet& convolution() const { return conv_; }

  int symbol_arity(SymbolId s) const;
  std::string symbol_name(SymbolId s) const;
  /// Every symbol id accepted by this automaton, in declaration order.
  std::vector<SymbolId> symbols() const;

  StateId add_state(std::string name);
  std::optional<StateId> find_state(std::string_view name) const;
  const std::string& state_name(StateId q) const { return states_.at(static_cast<std::size_t>(q)); }
  std::size_t state_count() const { return states_.size(); }

  void add_initial(StateId q);
  const std::vector<StateId>& initials() const { return initials_; }

  void add_transition(StateId q, SymbolId symbol, std::vector<StateId> children);
  /// All child tuples of (q, symbol).
  const std::vector<std::vector<StateId>>& transitions(StateId q, SymbolId symbol) const;
  /// The unique child tuple of (q, symbol) for deterministic use, or nullptr.
  const std::vector<StateId>* next(StateId q, SymbolId symbol) const;
  std::size_t transition_count() const;
  /// (state, symbol, children) triples in insertion order.
  const std::vector<std::tuple<StateId, SymbolId, std::vector<StateId>>>& transition_list() const {
    return ordered_;
  }

  bool is_deterministic() const;

  /// Convenience for pair automata.
  SymbolId pair(SymbolId in, SymbolId out) const { return conv_.pair(in, out); }

  std::string print_term(const Tree& t) const;
  Tree parse_term(std::string_view text) const;

 private:
  ConvolutionAlphabet conv_;
  bool has_output_ = false;
  std::vector<std::string> states_;
  std::vector<StateId> initials_;
  std::map<std::pair<StateId, SymbolId>, std::vector<std::vector<StateId>>> delta_;
  std::vector<std::tuple<StateId, SymbolId, std::vector<StateId>>> ordered_;
};

/// A run, listed in pre-order of the tree.
struct Run {
  std::vector<std::pair<Address, StateId>> states;
  StateId at(const Address& u) const;
};

std::optional<Run> run(const TopDownAutomaton& a, const Tree& t);
std::optional<Run> run_from(const TopDownAutomaton& a, StateId q, const Tree& t);
bool accepts(const TopDownAutomaton& a, const Tree& t);
bool accepts_from(const TopDownAutomaton& a, StateId q, const Tree& t);

/// q is productive iff T(A_q) ≠ ∅.
std::vector<bool> productive_states(const TopDownAutomaton& a);

// ---------------------------------------------------------------------------
// Edge-constraint predicates over a deterministic convolution automaton.
//
// Input quantifiers may be restricted by a deterministic domain automaton
// over Σ: a pair (q, b) then ranges over input trees accepted from b. Without
// a domain automaton a single universal domain state 0 is used.

struct DomainMove {
  SymbolId symbol;
  std::vector<StateId> children;
};

class DomainView {
 public:
  /// Universal domain over `input`.
  explicit DomainView(const RankedAlphabet& input);
  /// Restriction to T(dom); dom must be deterministic and over `input`.
  DomainView(const RankedAlphabet& input, const TopDownAutomaton& dom);

  bool restricted() const { return dom_ != nullptr; }
  StateId initial() const;
  std::size_t state_count() const;
  /// Input symbols In may play at a node in state b: a transition exists and
  /// every child state is productive.
  const std::vector<DomainMove>& legal(StateId b) const { return legal_.at(static_cast<std::size_t>(b)); }
  const DomainMove* move(StateId b, SymbolId f) const;
  const TopDownAutomaton* automaton() const { return dom_; }
  std::string state_name(StateId b) const;

 private:
  const TopDownAutomaton* dom_ = nullptr;
  std::vector<std::vector<DomainMove>> legal_;
};

using StatePair = std::pair<StateId, StateId>;  // (spec state, domain state)

/// Memoized edge predicates with witnesses. Thread-safe.
class Predicates {
 public:
  Predicates(const TopDownAutomaton& spec, const DomainView& domain);
  explicit Predicates(const TopDownAutomaton& spec);

  Predicates(const Predicates&) = delete;
  Predicates& operator=(const Predicates&) = delete;

  const TopDownAutomaton& spec() const { return spec_; }
  const DomainView& domain() const { return *domain_; }

  /// ∀t ∈ T(dom_b): t ⊗ ⊥ ∈ T(A_q)
  bool univ_input(StateId q, StateId b);
  /// Some t' with ⊥ ⊗ t' ∈ T(A_q); minimal-height witness.
  std::optional<Tree> exists_output(StateId q);
  /// Some t' with t ⊗ t' ∈ T(A_q) for every (q, b) ∈ eq and t ∈ T(dom_b), and
  /// ⊥ ⊗ t' ∈ T(A_q) for every q ∈ bot.
  std::optional<Tree> uniform_output(const std::vector<StatePair>& eq, const std::vector<StateId>& bot);

  /// Number of obligation pairs explored by uniform_output so far.
  std::size_t uniform_pairs_explored() const;

 private:
  using Key = std::pair<std::vector<StatePair>, std::vector<StateId>>;
  struct Option {
    SymbolId g;
    std::vector<Key> children;
  };
  struct Node {
    std::vector<Option> options;
    bool expanded = false;
    bool decided = false;
    std::optional<std::size_t> solution;  // option index
    int round = -1;
  };

  void compute_universal();
  void compute_exists();
  std::optional<Option> local_option(const Key& key, SymbolId g);
  void solve_from(const Key& root);
  Tree build_witness(const Key& key) const;

  const TopDownAutomaton& spec_;
  std::unique_ptr<DomainView> owned_domain_;
  const DomainView* domain_;
  std::vector<SymbolId> in_syms_, out_syms_;
  std::vector<std::vector<char>> universal_;  // [q][b]
  std::vector<std::optional<Tree>> exists_;
  std::map<Key, Node> nodes_;
  mutable std::mutex mutex_;
};

bool pred_univ_input(const TopDownAutomaton& a, StateId q);
std::optional<Tree> pred_exists_output(const TopDownAutomaton& a, StateId q);
std::optional<Tree> uniform_output(const TopDownAutomaton& a, const std::set<StateId>& eq,
                                   const std::set<StateId>& bot);
inline std::optional<Tree> pred_uniform_output(const TopDownAutomaton& a, StateId q) {
  return uniform_output(a, {q}, {});
}

}  // namespace tdt
