#pragma once

#include <random>
#include <string>

#include "tdtsynth/automata.hpp"
#include "tdtsynth/io.hpp"
#include "tdtsynth/oracle.hpp"

namespace tdt::testing {

inline std::string corpus(const std::string& name) { return std::string(TDT_CORPUS) + "/" + name; }

inline TopDownAutomaton load(const std::string& name) { return load_automaton(corpus(name)); }

/// Random deterministic automaton over Σ⊥ × Γ⊥: every (state, pair) slot
/// gets a transition with probability `density`.
inline TopDownAutomaton random_convolution_automaton(std::mt19937& rng, const RankedAlphabet& in,
                                                     const RankedAlphabet& out, int states, double density) {
  TopDownAutomaton a(in, out);
  for (int q = 0; q < states; ++q) a.add_state("q" + std::to_string(q));
  a.add_initial(0);
  std::bernoulli_distribution take(density);
  std::uniform_int_distribution<int> pick(0, states - 1);
  const auto& conv = a.convolution();
  for (int q = 0; q < states; ++q)
    for (std::size_t p = 1; p < conv.slots(); ++p) {
      if (!take(rng)) continue;
      std::vector<StateId> children(static_cast<std::size_t>(conv.arity(static_cast<SymbolId>(p))));
      for (auto& c : children) c = pick(rng);
      a.add_transition(q, static_cast<SymbolId>(p), std::move(children));
    }
  return a;
}

// Brute-force readings of the three edge predicates, over trees of depth ≤ d.

inline bool brute_univ_input(const TopDownAutomaton& a, StateId q, const std::vector<Tree>& inputs) {
  for (const auto& t : inputs)
    if (!accepts_from(a, q, convolve_bot(t, Side::Input, a.convolution()))) return false;
  return true;
}

inline bool brute_exists_output(const TopDownAutomaton& a, StateId q, const std::vector<Tree>& outputs) {
  for (const auto& t : outputs)
    if (accepts_from(a, q, convolve_bot(t, Side::Output, a.convolution()))) return true;
  return false;
}

inline bool brute_uniform_output(const TopDownAutomaton& a, StateId q, const std::vector<Tree>& inputs,
                                 const std::vector<Tree>& outputs) {
  for (const auto& o : outputs) {
    bool all = true;
    for (const auto& t : inputs)
      if (!accepts_from(a, q, convolution(t, o, a.convolution()))) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

// Exact readings for a fixed output tree, with no bound on the input depth.

/// States q with t ⊗ ⊥ ∈ T(A_q) for every input t: greatest fixpoint of
/// "every input symbol has a transition into the set".
inline std::vector<bool> exact_univ_input(const TopDownAutomaton& a) {
  std::vector<bool> in(a.state_count(), true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t q = 0; q < in.size(); ++q) {
      if (!in[q]) continue;
      for (std::size_t f = 0; f < a.input().size() && in[q]; ++f) {
        const auto* next = a.next(static_cast<StateId>(q), a.pair(static_cast<SymbolId>(f), kBottom));
        if (!next) {
          in[q] = false;
        } else {
          for (StateId c : *next) in[q] = in[q] && in[static_cast<std::size_t>(c)];
        }
      }
      changed |= !in[q];
    }
  }
  return in;
}

/// t ⊗ o ∈ T(A_q) for every input t.
inline bool exact_uniform_for(const TopDownAutomaton& a, const std::vector<bool>& univ, StateId q, const Tree& o) {
  for (std::size_t f = 0; f < a.input().size(); ++f) {
    const auto in_f = static_cast<SymbolId>(f);
    const auto* next = a.next(q, a.pair(in_f, o.symbol));
    if (!next) return false;
    const int rf = a.input().arity(in_f);
    for (std::size_t i = 0; i < next->size(); ++i) {
      const StateId c = (*next)[i];
      const bool has_in = static_cast<int>(i) < rf, has_out = i < o.children.size();
      if (has_in && has_out && !exact_uniform_for(a, univ, c, o.children[i])) return false;
      if (has_in && !has_out && !univ[static_cast<std::size_t>(c)]) return false;
      if (!has_in && has_out && !accepts_from(a, c, convolve_bot(o.children[i], Side::Output, a.convolution())))
        return false;
    }
  }
  return true;
}

}  // namespace tdt::testing
