#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tdt {

using SymbolId = std::int32_t;

/// Padding symbol of a convolution pair.
inline constexpr SymbolId kBottom = -1;
/// The hole of a special tree.
inline constexpr SymbolId kHole = -2;

/// Context variables x_1, x_2, ... are encoded as negative symbol ids below
/// the hole so that contexts can be stored as ordinary trees.
constexpr SymbolId variable_symbol(int index) { return kHole - index; }
constexpr bool is_variable(SymbolId s) { return s < kHole; }
constexpr int variable_index(SymbolId s) { return kHole - s; }

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Symbol {
  std::string name;
  int arity = 0;
  bool operator==(const Symbol&) const = default;
};

/// Finite ranked alphabet. A name may occur with several arities; each
/// (name, arity) pair is a distinct symbol.
class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  explicit RankedAlphabet(std::vector<Symbol> symbols);

  SymbolId add(std::string name, int arity);

  std::optional<SymbolId> find(std::string_view name, int arity) const;
  std::vector<SymbolId> find_all(std::string_view name) const;

  const Symbol& operator[](SymbolId id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  int arity(SymbolId id) const { return (*this)[id].arity; }
  const std::string& name(SymbolId id) const { return (*this)[id].name; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  int max_arity() const;
  const std::vector<Symbol>& symbols() const { return symbols_; }

  /// Throws std::invalid_argument unless the alphabet is non-empty and has a
  /// constant.
  void validate() const;

  bool operator==(const RankedAlphabet&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Finite ranked tree. Labels are symbol ids into some alphabet; negative ids
/// encode the hole and context variables.
struct Tree {
  SymbolId symbol = 0;
  std::vector<Tree> children;

  Tree() = default;
  explicit Tree(SymbolId s, std::vector<Tree> c = {}) : symbol(s), children(std::move(c)) {}

  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.symbol == b.symbol && a.children == b.children;
  }
  friend bool operator<(const Tree& a, const Tree& b) {
    if (a.symbol != b.symbol) return a.symbol < b.symbol;
    return a.children < b.children;
  }
};

/// Node address: a word over positive directions, 1-based. Empty = root.
using Address = std::vector<int>;

std::string format_address(const Address& u);

const Tree* subtree(const Tree& t, const Address& u);
Tree* subtree(Tree& t, const Address& u);
std::vector<Address> domain(const Tree& t);
int depth(const Tree& t);
std::size_t size(const Tree& t);

/// Σ⊥ × Γ⊥ without (⊥,⊥); pair arity is the maximum of the component arities.
class ConvolutionAlphabet {
 public:
  ConvolutionAlphabet() = default;
  ConvolutionAlphabet(RankedAlphabet input, RankedAlphabet output);

  const RankedAlphabet& input() const { return input_; }
  const RankedAlphabet& output() const { return output_; }

  SymbolId pair(SymbolId in, SymbolId out) const;
  std::pair<SymbolId, SymbolId> split(SymbolId pair) const;
  int arity(SymbolId pair) const;
  std::string name(SymbolId pair) const;
  /// Number of id slots; id 0 is the excluded (⊥,⊥) slot.
  std::size_t slots() const { return (input_.size() + 1) * (output_.size() + 1); }
  bool valid(SymbolId pair) const { return pair > 0 && static_cast<std::size_t>(pair) < slots(); }

 private:
  RankedAlphabet input_;
  RankedAlphabet output_;
};

enum class Side { Input, Output };

/// t1 ⊗ t2 over the union of both domains, padding with ⊥.
Tree convolution(const Tree* t1, const Tree* t2, const ConvolutionAlphabet& conv);
inline Tree convolution(const Tree& t1, const Tree& t2, const ConvolutionAlphabet& conv) {
  return convolution(&t1, &t2, conv);
}
Tree convolve_bot(const Tree& t, Side side, const ConvolutionAlphabet& conv);
/// Erases the other side of a convolution tree; nullopt if that side is empty.
std::optional<Tree> project(const Tree& t, Side side, const ConvolutionAlphabet& conv);

bool has_hole(const Tree& t);
/// t · s: replaces the hole of t by s. Throws if t has no hole.
Tree splice(const Tree& t, const Tree& s);
/// t[◦/u]
Tree cut(const Tree& t, const Address& u);
/// C[t_1, ..., t_n]
Tree substitute(const Tree& context, const std::vector<Tree>& parts);
int variable_count(const Tree& context);

/// max{|v| : v ∈ dom_t, u ⊑ v or v ⊑ u}
int max_path_len_along(const Tree& t, const Address& u);

// ---------------------------------------------------------------------------
// Textual terms: term := name | name "(" term ("," term)* ")"

std::string print_term(const Tree& t, const RankedAlphabet& alphabet);
std::string print_term(const Tree& t, const ConvolutionAlphabet& alphabet);

Tree parse_term(std::string_view text, const RankedAlphabet& alphabet);
/// Pair labels are written in|out with `_` for ⊥.
Tree parse_term(std::string_view text, const ConvolutionAlphabet& alphabet);

/// Validates child counts against an alphabet; throws std::invalid_argument.
void check_tree(const Tree& t, const RankedAlphabet& alphabet);

bool is_identifier(std::string_view s);

}  // namespace tdt
