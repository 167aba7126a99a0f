#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdtsynth/automata.hpp"
#include "tdtsynth/paths.hpp"
#include "tdtsynth/safety_game.hpp"
#include "tdtsynth/transducers.hpp"

namespace tdt {

// ---------------------------------------------------------------------------
// Path-recognizable uniformization of R^π_q.
//
// Out reads one input path, choosing a direction at every node, and emits a
// complete output tree at the leaf. The subset game tracks every way the
// output tree may overlap the path read so far:
//   overlay entries (q, m): the output spine follows the path for m nodes
//     and continues below the current node; A is in state q there;
//   ended entries (q): the output spine has stopped above, A runs on (f, ⊥)
//     in state q.
// Each entry carries a representative output (a special tree for overlay
// entries, a complete tree for ended ones) whose off-path parts are fixed
// witnesses. Overlays deeper than `depth` are not tracked.

class PathRecArena;

struct PathRecWitness {
  std::shared_ptr<Predicates> owned;  // set when the witness owns its predicates
  std::shared_ptr<PathRecArena> arena;
  std::shared_ptr<Solution> solution;
};

std::optional<PathRecWitness> decide_path_recognizable(Predicates& preds, StateId q, StateId b,
                                                       const LabeledPath& forced,
                                                       std::optional<int> depth = std::nullopt,
                                                       std::size_t max_vertices = 1'000'000);
std::optional<PathRecWitness> decide_path_recognizable(const TopDownAutomaton& a, StateId q,
                                                       const LabeledPath& forced);

/// Stand-alone fragment uniformizing R^π_q: relays along the forced prefix,
/// then follows the witness strategy.
Transducer build_path_recognizable_tdt(const PathRecWitness& witness);

// ---------------------------------------------------------------------------
// The uniformization game.

struct GameVertex {
  enum class Kind { InSet, InPath, OutPath };
  Kind kind = Kind::InSet;
  std::vector<StatePair> set;  // InSet
  StateId q = kNoState;        // InPath / OutPath: state at the front of pi
  StateId b = 0;               // domain state at the front of pi
  LabeledPath pi;

  friend bool operator<(const GameVertex& x, const GameVertex& y) {
    if (x.kind != y.kind) return x.kind < y.kind;
    if (x.set != y.set) return x.set < y.set;
    if (x.q != y.q) return x.q < y.q;
    if (x.b != y.b) return x.b < y.b;
    return x.pi < y.pi;
  }
};

struct MoveInfo {
  enum class Kind {
    Input,     // In: next input symbol
    Emit,      // Out, ‖π‖ = 1: output symbol, continue below
    Advance,   // Out, ‖π‖ ≥ 2: output symbol on the path ahead
    Complete,  // Out, ‖π‖ ≥ 2: output symbol ending the output above the path
    Delay,     // Out: ask for one more input in a direction
    Stay,      // Out, unbounded game: path-recognizable continuation
  };
  Kind kind = Kind::Input;
  SymbolId symbol = 0;  // output symbol (Emit/Advance/Complete), input symbol (Input)
  int dir = 0;          // Delay
};

struct StayExplanation {
  std::string vertex;
  std::string factorization;
  bool accepted = false;
};

struct GameOptions {
  /// nullopt: unbounded game with stay moves at saturated vertices.
  std::optional<int> delay = 1;
  std::size_t max_vertices = 1'000'000;
  /// Overlay depth tracked by the path-recognizable check; default
  /// ‖π‖ + |Q_A| + 1.
  std::optional<int> pathrec_depth;
};

class UniformizationArena : public Arena {
 public:
  UniformizationArena(Predicates& preds, GameOptions options);

  VertexId initial() override;
  Player owner(VertexId v) override;
  std::vector<Move> successors(VertexId v) override;
  std::string describe(VertexId v) override;

  const GameVertex& vertex(VertexId v) const { return vertices_.at(v); }
  std::optional<VertexId> find(const GameVertex& v) const;
  /// Parallel to successors(v); valid once successors(v) was generated.
  const std::vector<MoveInfo>& move_info(VertexId v) const { return info_.at(v); }
  std::size_t size() const { return vertices_.size(); }

  Predicates& predicates() const { return preds_; }
  bool unbounded() const { return !options_.delay.has_value(); }
  int delay() const { return options_.delay ? std::max(*options_.delay, 1) : 0; }
  const std::vector<StayExplanation>& stay_explanations() const { return explanations_; }
  /// Witness for a stay move at an Out vertex.
  const PathRecWitness* stay_witness(VertexId v) const;
  bool saturated(VertexId v);

  /// Domain state at the end of pi, starting from b at its front.
  StateId domain_state_at_end(StateId b, const LabeledPath& pi) const;
  /// The ⊥-padded run from (q, b) along pi is accepted with every off-path
  /// child and every child of the last node in W.
  bool univ_input_along(StateId q, StateId b, const LabeledPath& pi) const;

 private:
  VertexId intern(GameVertex v);
  std::vector<Move> out_moves(VertexId v, std::vector<MoveInfo>& info);

  Predicates& preds_;
  GameOptions options_;
  ProfileCache profiles_;
  std::vector<GameVertex> vertices_;
  std::map<GameVertex, VertexId> index_;
  std::vector<std::vector<MoveInfo>> info_;
  std::map<VertexId, PathRecWitness> stay_;
  std::map<VertexId, bool> saturated_;
  std::vector<StayExplanation> explanations_;
};

std::unique_ptr<UniformizationArena> build_arena_bounded(Predicates& preds, int k, std::size_t max_vertices = 1'000'000);
std::unique_ptr<UniformizationArena> build_arena_unbounded(Predicates& preds, std::size_t max_vertices = 1'000'000);

/// Reachable-vertex bound for the delay-k game: set vertices plus Out and In
/// path vertices of every admissible length.
double arena_size_bound(const TopDownAutomaton& a, int k, std::size_t domain_states = 1);

/// Deterministic transducer read off Out's winning strategy.
Transducer extract_transducer(UniformizationArena& arena, const Solution& solution);

// ---------------------------------------------------------------------------

struct SynthOptions {
  std::optional<int> delay = 1;  // nullopt: unbounded
  const TopDownAutomaton* domain = nullptr;
  std::size_t max_vertices = 1'000'000;
  std::optional<int> pathrec_depth;
};

struct SynthResult {
  bool realizable = false;
  std::optional<Transducer> transducer;
  /// Losing play for Out (vertex descriptions and move labels).
  std::vector<std::string> counterexample;
  std::vector<StayExplanation> stay_explanations;
  std::size_t vertices = 0;
};

SynthResult synthesize(const TopDownAutomaton& spec, const SynthOptions& options);
SynthResult synthesize_bounded(const TopDownAutomaton& spec, int k, const TopDownAutomaton* domain = nullptr);
SynthResult synthesize_unbounded(const TopDownAutomaton& spec, const TopDownAutomaton* domain = nullptr);

}  // namespace tdt
