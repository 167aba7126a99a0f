#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tdtsynth/automata.hpp"
#include "tdtsynth/terms.hpp"

namespace tdt {

/// Alternating symbol/direction sequence f·j·g·j'·... starting with a symbol.
/// Either dirs.size() == labels.size() (ends in a direction) or
/// dirs.size() + 1 == labels.size() (ends in a symbol, or empty).
struct LabeledPath {
  std::vector<SymbolId> labels;
  std::vector<int> dirs;

  std::size_t length() const { return labels.size(); }  // ‖π‖
  bool empty() const { return labels.empty(); }
  bool ends_in_direction() const { return !labels.empty() && dirs.size() == labels.size(); }
  /// path(π)
  const Address& path() const { return dirs; }

  LabeledPath with_symbol(SymbolId f) const;
  LabeledPath with_direction(int j) const;
  /// Segment of labels [from, to) together with the directions after each
  /// of them that lie inside the segment; `trailing` keeps dirs[to-1].
  LabeledPath slice(std::size_t from, std::size_t to, bool trailing) const;

  friend bool operator==(const LabeledPath& a, const LabeledPath& b) {
    return a.labels == b.labels && a.dirs == b.dirs;
  }
  friend bool operator<(const LabeledPath& a, const LabeledPath& b) {
    if (a.labels != b.labels) return a.labels < b.labels;
    return a.dirs < b.dirs;
  }
};

/// Checks the alternation and that each direction fits the preceding symbol.
void check_path(const LabeledPath& p, const RankedAlphabet& alphabet);
/// Text form `f.1.g.1.a`.
LabeledPath parse_path(std::string_view text, const RankedAlphabet& alphabet);
std::string print_path(const LabeledPath& p, const RankedAlphabet& alphabet);
LabeledPath concat(const LabeledPath& a, const LabeledPath& b);

/// t ∈ T^π: the labels of π occur along path(π) in t.
bool trees_with_path(const Tree& t, const LabeledPath& p);

/// x ⊗ y over the convolution alphabet; both paths must end in a symbol (or
/// be empty) and their directions must be prefix-comparable.
LabeledPath path_convolution(const LabeledPath& x, const LabeledPath& y, const ConvolutionAlphabet& conv);

struct PathRun {
  std::vector<StateId> spine;         // ρ at the path nodes reached
  std::optional<StateId> end;         // ρ(path · i) when requested and defined
  bool accepting = false;             // transition exists at the last node
};

/// Partial run of A from q along a convolved path.
PathRun run_on_path(const TopDownAutomaton& a, StateId q, const LabeledPath& xy, std::optional<int> i = std::nullopt);

// ---------------------------------------------------------------------------
// State transformations and profiles.
//
// With a domain automaton the transformation acts on pairs (q, b); pair
// (q, b) has index q * |B| + b. Without one |B| = 1 and indices are states.

/// A partial map over pair indices; kNoState where undefined.
using TauFn = std::vector<StateId>;

struct Profile {
  std::vector<TauFn> eq, lt, eps;

  friend bool operator==(const Profile& a, const Profile& b) {
    return a.eq == b.eq && a.lt == b.lt && a.eps == b.eps;
  }
  friend bool operator<(const Profile& a, const Profile& b) {
    if (a.eq != b.eq) return a.eq < b.eq;
    if (a.lt != b.lt) return a.lt < b.lt;
    return a.eps < b.eps;
  }
};

/// τ_{xi,y}: x ends in a symbol and is non-empty, y is an output path with
/// path(y) ⊑ path(x). Every symbol of y must have a child in the direction
/// the path continues to (the overlay is open towards x·i). Off-path
/// children are classified by both ranks: a child of both symbols needs a
/// uniform output, an input-only child needs W, an output-only child needs
/// some ⊥-padded output.
TauFn tau(Predicates& preds, const LabeledPath& x, int i, const LabeledPath& y);
TauFn tau(const TopDownAutomaton& a, const LabeledPath& x, int i, const LabeledPath& y);

/// P_xi computed from the definition by enumerating every open overlay.
Profile profile(Predicates& preds, const LabeledPath& x, int i);
Profile profile(const TopDownAutomaton& a, const LabeledPath& x, int i);

Profile compose_profiles(const Profile& p1, const Profile& p2);

/// P_yj = P_yjyj, both computed directly.
bool is_idempotent(Predicates& preds, const LabeledPath& y, int j);
bool is_idempotent(const TopDownAutomaton& a, const LabeledPath& y, int j);

struct Factorization {
  // π = x·i·y·j·z
  LabeledPath x;
  int i = 0;  // 0 when x is empty
  LabeledPath y;
  int j = 0;
  LabeledPath z;
  std::size_t y_from = 0, y_to = 0;  // label indices of y in π
};

/// Caches direct segment profiles across queries on one automaton.
class ProfileCache {
 public:
  explicit ProfileCache(Predicates& preds) : preds_(preds) {}
  const Profile& segment(const LabeledPath& x, int i);
  bool idempotent(const LabeledPath& y, int j);
  /// Shortest y first, then leftmost.
  std::optional<Factorization> find_idempotent_factorization(const LabeledPath& pi);

 private:
  Predicates& preds_;
  std::map<std::pair<LabeledPath, int>, Profile> profiles_;
  std::map<std::pair<LabeledPath, int>, bool> idempotent_;
  std::mutex mutex_;
};

std::optional<Factorization> find_idempotent_factorization(const TopDownAutomaton& a, const LabeledPath& pi);

/// t^n = s_x · s_y^n · t̂ where s_x = t[◦/ui], s_y = t|ui[◦/uivj] and
/// t̂ = t|uivj. `ui` is the node where the repeated factor starts and `vj`
/// the factor's relative path.
Tree pump(const Tree& t, const Address& ui, const Address& vj, int n);
Tree pump(const Tree& t, const LabeledPath& x, int i, const LabeledPath& y, int j, int n);

}  // namespace tdt
