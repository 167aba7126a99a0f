#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tdtsynth/automata.hpp"
#include "tdtsynth/transducers.hpp"

namespace tdt {

/// All trees of depth ≤ max_depth (a leaf has depth 0), by depth and then by
/// symbol declaration order.
std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, int max_depth);
/// Closed-form count of enumerate_trees.
std::size_t count_trees(const RankedAlphabet& alphabet, int max_depth);

struct VerifyFailure {
  Tree input;
  std::string verdict;  // "stuck ..." or "rejected <output>"
};

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<VerifyFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Runs T on every input of depth ≤ depth (restricted to dom when given) and
/// checks t ⊗ T(t) against the specification automaton.
VerifyReport verify_uniformizer(const TopDownAutomaton& spec, const Transducer& T, int depth,
                                const TopDownAutomaton* dom = nullptr, unsigned threads = 0);
/// One line per failure: term TAB verdict.
std::string format_report(const VerifyReport& report, const RankedAlphabet& input);

struct RefutationOptions {
  int states = 2;
  int rule_depth = 2;
  int input_depth = 5;
  std::size_t max_nodes = 20'000'000;
};

struct RefutationEntry {
  std::string rules;  // partial rule set, one rule per `;`
  std::string input;  // failing input term
};

struct RefutationResult {
  /// Every candidate fails on some input.
  bool refuted = false;
  std::optional<Transducer> survivor;
  std::vector<RefutationEntry> table;  // capped at table_limit entries
  std::size_t failures = 0;
  std::size_t nodes = 0;
};

/// Exhaustive search over DTDTs with at most `states` states whose right-hand
/// sides have depth ≤ rule_depth. Rules are chosen lazily, when an input
/// first needs them. Throws BudgetExceeded past max_nodes search nodes.
RefutationResult refute_small_transducers(const TopDownAutomaton& spec, const RefutationOptions& options = {},
                                          const TopDownAutomaton* dom = nullptr, std::size_t table_limit = 64);

}  // namespace tdt
