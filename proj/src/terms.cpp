#include "tdtsynth/terms.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tdt {

// ---------------------------------------------------------------------------
// RankedAlphabet

RankedAlphabet::RankedAlphabet(std::vector<Symbol> symbols) {
  for (auto& s : symbols) add(std::move(s.name), s.arity);
}

SymbolId RankedAlphabet::add(std::string name, int arity) {
  if (arity < 0) throw std::invalid_argument("negative arity for symbol '" + name + "'");
  if (!is_identifier(name) || name == "_")
    throw std::invalid_argument("invalid symbol name '" + name + "'");
  if (find(name, arity))
    throw std::invalid_argument("duplicate symbol " + name + ":" + std::to_string(arity));
  symbols_.push_back({std::move(name), arity});
  return static_cast<SymbolId>(symbols_.size() - 1);
}

std::optional<SymbolId> RankedAlphabet::find(std::string_view name, int arity) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name && symbols_[i].arity == arity) return static_cast<SymbolId>(i);
  return std::nullopt;
}

std::vector<SymbolId> RankedAlphabet::find_all(std::string_view name) const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) out.push_back(static_cast<SymbolId>(i));
  return out;
}

int RankedAlphabet::max_arity() const {
  int m = 0;
  for (const auto& s : symbols_) m = std::max(m, s.arity);
  return m;
}

void RankedAlphabet::validate() const {
  if (symbols_.empty()) throw std::invalid_argument("ranked alphabet is empty");
  if (std::none_of(symbols_.begin(), symbols_.end(), [](const Symbol& s) { return s.arity == 0; }))
    throw std::invalid_argument("ranked alphabet has no constant (arity-0 symbol)");
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!(std::isalpha(head) || s[0] == '_')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

// ---------------------------------------------------------------------------
// Tree helpers

std::string format_address(const Address& u) {
  if (u.empty()) return "ε";
  std::string out;
  for (int d : u) out += std::to_string(d);
  return out;
}

const Tree* subtree(const Tree& t, const Address& u) {
  const Tree* cur = &t;
  for (int d : u) {
    if (d < 1 || static_cast<std::size_t>(d) > cur->children.size()) return nullptr;
    cur = &cur->children[static_cast<std::size_t>(d - 1)];
  }
  return cur;
}

Tree* subtree(Tree& t, const Address& u) {
  return const_cast<Tree*>(subtree(static_cast<const Tree&>(t), u));
}

namespace {

void collect_domain(const Tree& t, Address& prefix, std::vector<Address>& out) {
  out.push_back(prefix);
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    prefix.push_back(static_cast<int>(i + 1));
    collect_domain(t.children[i], prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Address> domain(const Tree& t) {
  std::vector<Address> out;
  Address prefix;
  collect_domain(t, prefix, out);
  return out;
}

int depth(const Tree& t) {
  int d = 0;
  for (const auto& c : t.children) d = std::max(d, depth(c) + 1);
  return d;
}

std::size_t size(const Tree& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += size(c);
  return n;
}

// ---------------------------------------------------------------------------
// Convolution

ConvolutionAlphabet::ConvolutionAlphabet(RankedAlphabet input, RankedAlphabet output)
    : input_(std::move(input)), output_(std::move(output)) {}

SymbolId ConvolutionAlphabet::pair(SymbolId in, SymbolId out) const {
  if (in == kBottom && out == kBottom) throw std::invalid_argument("(⊥,⊥) is not a symbol");
  if (in != kBottom && (in < 0 || static_cast<std::size_t>(in) >= input_.size()))
    throw std::out_of_range("input symbol id out of range");
  if (out != kBottom && (out < 0 || static_cast<std::size_t>(out) >= output_.size()))
    throw std::out_of_range("output symbol id out of range");
  return static_cast<SymbolId>((in + 1) * static_cast<SymbolId>(output_.size() + 1) + (out + 1));
}

std::pair<SymbolId, SymbolId> ConvolutionAlphabet::split(SymbolId pair) const {
  auto width = static_cast<SymbolId>(output_.size() + 1);
  return {pair / width - 1, pair % width - 1};
}

int ConvolutionAlphabet::arity(SymbolId pair) const {
  auto [in, out] = split(pair);
  int a = in == kBottom ? 0 : input_.arity(in);
  int b = out == kBottom ? 0 : output_.arity(out);
  return std::max(a, b);
}

std::string ConvolutionAlphabet::name(SymbolId pair) const {
  auto [in, out] = split(pair);
  return (in == kBottom ? std::string("_") : input_.name(in)) + "|" +
         (out == kBottom ? std::string("_") : output_.name(out));
}

Tree convolution(const Tree* t1, const Tree* t2, const ConvolutionAlphabet& conv) {
  SymbolId a = t1 ? t1->symbol : kBottom;
  SymbolId b = t2 ? t2->symbol : kBottom;
  Tree out(conv.pair(a, b));
  std::size_t n1 = t1 ? t1->children.size() : 0;
  std::size_t n2 = t2 ? t2->children.size() : 0;
  for (std::size_t i = 0; i < std::max(n1, n2); ++i)
    out.children.push_back(convolution(i < n1 ? &t1->children[i] : nullptr,
                                       i < n2 ? &t2->children[i] : nullptr, conv));
  return out;
}

Tree convolve_bot(const Tree& t, Side side, const ConvolutionAlphabet& conv) {
  return side == Side::Input ? convolution(&t, nullptr, conv) : convolution(nullptr, &t, conv);
}

std::optional<Tree> project(const Tree& t, Side side, const ConvolutionAlphabet& conv) {
  auto [in, out] = conv.split(t.symbol);
  SymbolId s = side == Side::Input ? in : out;
  if (s == kBottom) return std::nullopt;
  int n = side == Side::Input ? conv.input().arity(s) : conv.output().arity(s);
  Tree r(s);
  for (int i = 0; i < n; ++i) {
    auto c = project(t.children.at(static_cast<std::size_t>(i)), side, conv);
    if (!c) throw std::invalid_argument("malformed convolution: missing child of a proper symbol");
    r.children.push_back(std::move(*c));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Special trees and contexts

bool has_hole(const Tree& t) {
  if (t.symbol == kHole) return true;
  return std::any_of(t.children.begin(), t.children.end(), [](const Tree& c) { return has_hole(c); });
}

namespace {

bool splice_into(Tree& t, const Tree& s) {
  if (t.symbol == kHole) {
    t = s;
    return true;
  }
  for (auto& c : t.children)
    if (splice_into(c, s)) return true;
  return false;
}

void substitute_into(Tree& t, const std::vector<Tree>& parts) {
  if (is_variable(t.symbol)) {
    auto i = static_cast<std::size_t>(variable_index(t.symbol));
    if (i < 1 || i > parts.size())
      throw std::invalid_argument("context variable x" + std::to_string(i) + " has no substitute");
    t = parts[i - 1];
    return;
  }
  for (auto& c : t.children) substitute_into(c, parts);
}

void count_variables(const Tree& t, int& n) {
  if (is_variable(t.symbol)) n = std::max(n, variable_index(t.symbol));
  for (const auto& c : t.children) count_variables(c, n);
}

}  // namespace

Tree splice(const Tree& t, const Tree& s) {
  Tree r = t;
  if (!splice_into(r, s)) throw std::invalid_argument("splice: left operand has no hole");
  return r;
}

Tree cut(const Tree& t, const Address& u) {
  Tree r = t;
  Tree* node = subtree(r, u);
  if (!node) throw std::invalid_argument("cut: address " + format_address(u) + " not in tree");
  *node = Tree(kHole);
  return r;
}

int variable_count(const Tree& context) {
  int n = 0;
  count_variables(context, n);
  return n;
}

Tree substitute(const Tree& context, const std::vector<Tree>& parts) {
  if (variable_count(context) != static_cast<int>(parts.size()))
    throw std::invalid_argument("substitute: context has " + std::to_string(variable_count(context)) +
                                " variables but " + std::to_string(parts.size()) + " trees given");
  Tree r = context;
  substitute_into(r, parts);
  return r;
}

int max_path_len_along(const Tree& t, const Address& u) {
  // Nodes comparable with u are the ancestors of u inside t and, if u itself
  // is in t, every node below u.
  const Tree* cur = &t;
  int len = 0;
  for (int d : u) {
    if (d < 1 || static_cast<std::size_t>(d) > cur->children.size()) return len;
    cur = &cur->children[static_cast<std::size_t>(d - 1)];
    ++len;
  }
  return len + depth(*cur);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

template <typename NameFn>
void print_into(std::ostringstream& os, const Tree& t, const NameFn& name) {
  if (t.symbol == kHole) {
    os << "*";
  } else if (is_variable(t.symbol)) {
    os << "x" << variable_index(t.symbol);
  } else {
    os << name(t.symbol);
  }
  if (t.children.empty()) return;
  os << "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) os << ",";
    print_into(os, t.children[i], name);
  }
  os << ")";
}

}  // namespace

std::string print_term(const Tree& t, const RankedAlphabet& alphabet) {
  std::ostringstream os;
  print_into(os, t, [&](SymbolId s) { return alphabet.name(s); });
  return os.str();
}

std::string print_term(const Tree& t, const ConvolutionAlphabet& alphabet) {
  std::ostringstream os;
  print_into(os, t, [&](SymbolId s) { return alphabet.name(s); });
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class TermReader {
 public:
  explicit TermReader(std::string_view text) : text_(text) {}

  struct Raw {
    std::string label;  // may contain '|' and ':'
    std::size_t pos = 0;
    std::vector<Raw> children;
  };

  Raw read_all() {
    Raw r = read();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return r;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t pos) const {
    throw ParseError("term syntax error at column " + std::to_string(pos + 1) + ": " + msg, 1, pos + 1);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Raw read() {
    skip_ws();
    Raw r;
    r.pos = pos_;
    if (pos_ < text_.size() && text_[pos_] == '*') {
      r.label = "*";
      ++pos_;
      return r;
    }
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '|' || c == ':') {
        r.label += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (r.label.empty()) fail("expected a symbol name");
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      for (;;) {
        r.children.push_back(read());
        skip_ws();
        if (pos_ >= text_.size()) fail("unterminated argument list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail(std::string("expected ',' or ')' but found '") + text_[pos_] + "'");
      }
    }
    return r;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Resolves "name" or "name:arity" for an expected child count. For pair
/// components the arity is only bounded above, so all candidates are returned.
std::vector<SymbolId> candidates(const RankedAlphabet& a, std::string_view token) {
  auto colon = token.find(':');
  if (colon == std::string_view::npos) return a.find_all(token);
  std::string_view name = token.substr(0, colon);
  int arity = 0;
  try {
    arity = std::stoi(std::string(token.substr(colon + 1)));
  } catch (const std::exception&) {
    return {};
  }
  auto id = a.find(name, arity);
  return id ? std::vector<SymbolId>{*id} : std::vector<SymbolId>{};
}

Tree build_plain(const TermReader& reader, const TermReader::Raw& raw, const RankedAlphabet& a) {
  if (raw.label == "*") return Tree(kHole);
  auto cands = candidates(a, raw.label);
  if (cands.empty() && raw.children.empty() && raw.label.size() > 1 && raw.label[0] == 'x' &&
      std::all_of(raw.label.begin() + 1, raw.label.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return Tree(variable_symbol(std::stoi(raw.label.substr(1))));
  if (cands.empty()) reader.fail_at("unknown symbol '" + raw.label + "'", raw.pos);
  int n = static_cast<int>(raw.children.size());
  std::optional<SymbolId> hit;
  for (SymbolId s : cands)
    if (a.arity(s) == n) hit = s;
  if (!hit) {
    reader.fail_at("arity mismatch: '" + raw.label + "' applied to " + std::to_string(n) +
                       " argument(s)",
                   raw.pos);
  }
  Tree t(*hit);
  for (const auto& c : raw.children) t.children.push_back(build_plain(reader, c, a));
  return t;
}

Tree build_pair(const TermReader& reader, const TermReader::Raw& raw, const ConvolutionAlphabet& conv) {
  auto bar = raw.label.find('|');
  if (bar == std::string::npos) reader.fail_at("expected a pair label in|out, got '" + raw.label + "'", raw.pos);
  std::string left = raw.label.substr(0, bar);
  std::string right = raw.label.substr(bar + 1);
  std::vector<SymbolId> ins = left == "_" ? std::vector<SymbolId>{kBottom} : candidates(conv.input(), left);
  std::vector<SymbolId> outs = right == "_" ? std::vector<SymbolId>{kBottom} : candidates(conv.output(), right);
  if (ins.empty()) reader.fail_at("unknown input symbol '" + left + "'", raw.pos);
  if (outs.empty()) reader.fail_at("unknown output symbol '" + right + "'", raw.pos);
  int n = static_cast<int>(raw.children.size());
  std::vector<SymbolId> hits;
  for (SymbolId i : ins)
    for (SymbolId o : outs) {
      if (i == kBottom && o == kBottom) continue;
      SymbolId p = conv.pair(i, o);
      if (conv.arity(p) == n) hits.push_back(p);
    }
  if (hits.empty()) reader.fail_at("arity mismatch for pair '" + raw.label + "'", raw.pos);
  if (hits.size() > 1) reader.fail_at("ambiguous pair '" + raw.label + "'; use name:arity", raw.pos);
  Tree t(hits.front());
  for (const auto& c : raw.children) t.children.push_back(build_pair(reader, c, conv));
  return t;
}

}  // namespace

Tree parse_term(std::string_view text, const RankedAlphabet& alphabet) {
  TermReader reader(text);
  auto raw = reader.read_all();
  return build_plain(reader, raw, alphabet);
}

Tree parse_term(std::string_view text, const ConvolutionAlphabet& alphabet) {
  TermReader reader(text);
  auto raw = reader.read_all();
  return build_pair(reader, raw, alphabet);
}

void check_tree(const Tree& t, const RankedAlphabet& alphabet) {
  if (t.symbol < 0 || static_cast<std::size_t>(t.symbol) >= alphabet.size())
    throw std::invalid_argument("tree label outside alphabet");
  if (alphabet.arity(t.symbol) != static_cast<int>(t.children.size()))
    throw std::invalid_argument("child count of '" + alphabet.name(t.symbol) + "' does not match its arity");
  for (const auto& c : t.children) check_tree(c, alphabet);
}

}  // namespace tdt
