#include "tdtsynth/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace tdt {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

[[noreturn]] void fail(std::size_t line, std::size_t column, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg, line, column);
}

/// `name` or `name:arity`; all matching symbol ids.
std::vector<SymbolId> lookup(const RankedAlphabet& a, std::string_view token) {
  auto colon = token.find(':');
  if (colon == std::string_view::npos) return a.find_all(token);
  std::string arity_text(token.substr(colon + 1));
  if (arity_text.empty() || !std::all_of(arity_text.begin(), arity_text.end(), ::isdigit)) return {};
  auto id = a.find(token.substr(0, colon), std::stoi(arity_text));
  return id ? std::vector<SymbolId>{*id} : std::vector<SymbolId>{};
}

/// Name, qualified with its arity when the name is overloaded.
std::string label(const RankedAlphabet& a, SymbolId s) {
  if (s == kBottom) return "_";
  if (a.find_all(a.name(s)).size() > 1) return a.name(s) + ":" + std::to_string(a.arity(s));
  return a.name(s);
}

RankedAlphabet parse_alphabet(const std::vector<Token>& toks, std::size_t line) {
  RankedAlphabet a;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto& t = toks[i].text;
    auto colon = t.find(':');
    if (colon == std::string::npos) fail(line, toks[i].column, "expected name:arity, got '" + t + "'");
    std::string name = t.substr(0, colon), arity = t.substr(colon + 1);
    if (!is_identifier(name) || name == "_") fail(line, toks[i].column, "invalid symbol name '" + name + "'");
    if (arity.empty() || !std::all_of(arity.begin(), arity.end(), ::isdigit))
      fail(line, toks[i].column, "invalid arity in '" + t + "'");
    try {
      a.add(name, std::stoi(arity));
    } catch (const std::exception& e) {
      fail(line, toks[i].column, e.what());
    }
  }
  return a;
}

struct Header {
  std::optional<RankedAlphabet> input, output;
  std::vector<std::string> states;
  std::vector<Token> initials;
  std::size_t initial_line = 0;
  bool states_seen = false;
};

/// Consumes header lines; returns true if the line was a header line.
bool read_header_line(Header& h, const std::vector<Token>& toks, std::size_t line) {
  const std::string& key = toks.front().text;
  if (key == "input") {
    if (h.input) fail(line, 1, "duplicate input line");
    h.input = parse_alphabet(toks, line);
    return true;
  }
  if (key == "output") {
    if (h.output) fail(line, 1, "duplicate output line");
    h.output = parse_alphabet(toks, line);
    return true;
  }
  if (key == "states") {
    if (h.states_seen) fail(line, 1, "duplicate states line");
    h.states_seen = true;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (!is_identifier(toks[i].text)) fail(line, toks[i].column, "invalid state name '" + toks[i].text + "'");
      h.states.push_back(toks[i].text);
    }
    return true;
  }
  if (key == "initial") {
    if (!h.initials.empty()) fail(line, 1, "duplicate initial line");
    if (toks.size() < 2) fail(line, 1, "initial line names no state");
    h.initials.assign(toks.begin() + 1, toks.end());
    h.initial_line = line;
    return true;
  }
  return false;
}

void require_header(const Header& h, std::size_t line) {
  if (!h.input) fail(line, 1, "missing input line before transitions");
  if (!h.states_seen) fail(line, 1, "missing states line before transitions");
}

template <typename Target>
void add_header_states(Target& target, const Header& h, std::size_t line) {
  for (const auto& s : h.states) {
    try {
      target.add_state(s);
    } catch (const std::exception& e) {
      fail(line, 1, e.what());
    }
  }
}

template <typename Target>
StateId state_of(const Target& target, const Token& tok, std::size_t line) {
  auto q = target.find_state(tok.text);
  if (!q) fail(line, tok.column, "unknown state '" + tok.text + "'");
  return *q;
}

}  // namespace

TopDownAutomaton parse_automaton(std::string_view text) {
  Header h;
  std::optional<TopDownAutomaton> a;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  auto ensure = [&]() -> TopDownAutomaton& {
    if (!a) {
      require_header(h, line);
      a = h.output ? TopDownAutomaton(*h.input, *h.output) : TopDownAutomaton(*h.input);
      add_header_states(*a, h, line);
    }
    return *a;
  };
  while (std::getline(in, raw)) {
    ++line;
    auto toks = split_tokens(strip_comment(raw));
    if (toks.empty()) continue;
    if (!a && read_header_line(h, toks, line)) continue;
    if (a && (toks[0].text == "input" || toks[0].text == "output" || toks[0].text == "states"))
      fail(line, 1, "header line after transitions");
    if (a && toks[0].text == "initial") {
      if (!h.initials.empty()) fail(line, 1, "duplicate initial line");
      h.initials.assign(toks.begin() + 1, toks.end());
      h.initial_line = line;
      continue;
    }
    auto& A = ensure();
    if (toks.size() < 2) fail(line, toks[0].column, "transition needs a state and a symbol");
    StateId q = state_of(A, toks[0], line);
    std::vector<StateId> children;
    if (toks.size() > 2) {
      if (toks[2].text != "->") fail(line, toks[2].column, "expected '->'");
      for (std::size_t i = 3; i < toks.size(); ++i) children.push_back(state_of(A, toks[i], line));
    }
    const int n = static_cast<int>(children.size());
    const Token& sym = toks[1];
    SymbolId symbol = 0;
    auto bar = sym.text.find('|');
    if (A.is_convolution()) {
      if (bar == std::string::npos) fail(line, sym.column, "expected a pair label in|out, got '" + sym.text + "'");
      std::string left = sym.text.substr(0, bar), right = sym.text.substr(bar + 1);
      auto ins = left == "_" ? std::vector<SymbolId>{kBottom} : lookup(A.input(), left);
      auto outs = right == "_" ? std::vector<SymbolId>{kBottom} : lookup(A.output(), right);
      if (ins.empty()) fail(line, sym.column, "unknown input symbol '" + left + "'");
      if (outs.empty()) fail(line, sym.column, "unknown output symbol '" + right + "'");
      std::vector<SymbolId> hits;
      for (SymbolId i : ins)
        for (SymbolId o : outs) {
          if (i == kBottom && o == kBottom) continue;
          SymbolId p = A.pair(i, o);
          if (A.convolution().arity(p) == n) hits.push_back(p);
        }
      if (ins.size() == 1 && outs.size() == 1 && ins[0] == kBottom && outs[0] == kBottom)
        fail(line, sym.column, "(_,_) is not a symbol");
      if (hits.empty()) fail(line, sym.column, "pair '" + sym.text + "' does not have " + std::to_string(n) + " successors");
      if (hits.size() > 1) fail(line, sym.column, "ambiguous pair '" + sym.text + "'; use name:arity");
      symbol = hits.front();
    } else {
      if (bar != std::string::npos) fail(line, sym.column, "pair label in a plain automaton");
      SymbolId found = kBottom;
      for (SymbolId s : lookup(A.input(), sym.text))
        if (A.input().arity(s) == n) found = s;
      if (found == kBottom) {
        if (lookup(A.input(), sym.text).empty()) fail(line, sym.column, "unknown symbol '" + sym.text + "'");
        fail(line, sym.column, "symbol '" + sym.text + "' does not have " + std::to_string(n) + " successors");
      }
      symbol = found;
    }
    A.add_transition(q, symbol, std::move(children));
  }
  auto& A = ensure();
  if (h.initials.empty()) fail(line == 0 ? 1 : line, 1, "missing initial line");
  for (const auto& tok : h.initials) A.add_initial(state_of(A, tok, h.initial_line));
  try {
    A.input().validate();
  } catch (const std::exception& e) {
    fail(1, 1, std::string("input alphabet: ") + e.what());
  }
  if (A.is_convolution()) {
    try {
      A.output().validate();
    } catch (const std::exception& e) {
      fail(1, 1, std::string("output alphabet: ") + e.what());
    }
  }
  return std::move(*a);
}

namespace {

std::string alphabet_line(const char* key, const RankedAlphabet& a) {
  std::string s = key;
  for (const auto& sym : a.symbols()) s += " " + sym.name + ":" + std::to_string(sym.arity);
  return s;
}

}  // namespace

std::string print_automaton(const TopDownAutomaton& a) {
  std::ostringstream os;
  os << alphabet_line("input", a.input()) << "\n";
  if (a.is_convolution()) os << alphabet_line("output", a.output()) << "\n";
  os << "states";
  for (std::size_t q = 0; q < a.state_count(); ++q) os << " " << a.state_name(static_cast<StateId>(q));
  os << "\ninitial";
  for (StateId q : a.initials()) os << " " << a.state_name(q);
  os << "\n";
  for (const auto& [q, sym, children] : a.transition_list()) {
    os << a.state_name(q) << " ";
    if (a.is_convolution()) {
      auto [i, o] = a.convolution().split(sym);
      os << label(a.input(), i) << "|" << label(a.output(), o);
    } else {
      os << label(a.input(), sym);
    }
    if (!children.empty()) {
      os << " ->";
      for (StateId c : children) os << " " << a.state_name(c);
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Transducers

namespace {

class RhsReader {
 public:
  RhsReader(std::string_view text, std::size_t line, std::size_t offset, const Transducer& T)
      : text_(text), line_(line), offset_(offset), T_(T) {}

  RuleTree read_all() {
    RuleTree t = read();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return t;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const { fail(line_, offset_ + pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == ':'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  RuleTree read() {
    skip_ws();
    std::size_t start = pos_;
    std::string head = name();
    if (head.empty()) error("expected a symbol or state name");
    skip_ws();
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      std::size_t var_pos = pos_;
      std::string var = name();
      if (var.size() < 2 || var[0] != 'x' || !std::all_of(var.begin() + 1, var.end(), ::isdigit)) {
        pos_ = var_pos;
        error("expected a variable x<N> after state '" + head + "'");
      }
      auto q = T_.find_state(head);
      if (!q) {
        pos_ = start;
        error("unknown state '" + head + "'");
      }
      return RuleTree::call(*q, std::stoi(var.substr(1)));
    }
    std::vector<RuleTree> children;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      for (;;) {
        children.push_back(read());
        skip_ws();
        if (pos_ >= text_.size()) error("unterminated argument list");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        error(std::string("expected ',' or ')' but found '") + text_[pos_] + "'");
      }
    }
    SymbolId found = kBottom;
    for (SymbolId s : lookup(T_.output(), head))
      if (T_.output().arity(s) == static_cast<int>(children.size())) found = s;
    if (found == kBottom) {
      std::size_t here = pos_;
      pos_ = start;
      if (lookup(T_.output(), head).empty()) error("unknown output symbol '" + head + "'");
      pos_ = here;
      error("output symbol '" + head + "' applied to " + std::to_string(children.size()) + " argument(s)");
    }
    return RuleTree::node(found, std::move(children));
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t offset_;
  std::size_t pos_ = 0;
  const Transducer& T_;
};

/// `f(x1,...,xn)` or `a`; whitespace-free form after removing blanks.
SymbolId parse_pattern(const Transducer& T, std::string pattern, std::size_t line, std::size_t column) {
  pattern.erase(std::remove_if(pattern.begin(), pattern.end(), ::isspace), pattern.end());
  std::string head = pattern;
  int n = 0;
  auto paren = pattern.find('(');
  if (paren != std::string::npos) {
    if (pattern.back() != ')') fail(line, column, "malformed left-hand side '" + pattern + "'");
    head = pattern.substr(0, paren);
    std::string inner = pattern.substr(paren + 1, pattern.size() - paren - 2);
    std::stringstream ss(inner);
    std::string var;
    while (std::getline(ss, var, ',')) {
      ++n;
      if (var != "x" + std::to_string(n))
        fail(line, column, "left-hand side variables must be x1..xn in order, got '" + var + "'");
    }
    if (n == 0) fail(line, column, "empty argument list");
  }
  auto cands = lookup(T.input(), head);
  if (cands.empty()) fail(line, column, "unknown input symbol '" + head + "'");
  for (SymbolId s : cands)
    if (T.input().arity(s) == n) return s;
  fail(line, column, "input symbol '" + head + "' does not take " + std::to_string(n) + " argument(s)");
}

}  // namespace

Transducer parse_transducer(std::string_view text) {
  Header h;
  std::optional<Transducer> T;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  auto ensure = [&]() -> Transducer& {
    if (!T) {
      require_header(h, line);
      if (!h.output) fail(line, 1, "missing output line before rules");
      T.emplace(*h.input, *h.output);
      add_header_states(*T, h, line);
    }
    return *T;
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string_view body = strip_comment(raw);
    auto toks = split_tokens(body);
    if (toks.empty()) continue;
    if (!T && read_header_line(h, toks, line)) continue;
    if (T && (toks[0].text == "input" || toks[0].text == "output" || toks[0].text == "states" ||
              toks[0].text == "initial"))
      fail(line, 1, "header line after rules");
    auto& tr = ensure();
    auto arrow = body.find("->");
    if (arrow == std::string_view::npos) fail(line, toks[0].column, "expected '->' in rule");
    StateId q = state_of(tr, toks[0], line);
    std::size_t after_state = toks[0].column - 1 + toks[0].text.size();
    if (after_state > arrow) fail(line, toks[0].column, "expected '->' after the left-hand side");
    std::string pattern(body.substr(after_state, arrow - after_state));
    Rule rule;
    rule.state = q;
    if (pattern.find_first_not_of(" \t\r") != std::string::npos)
      rule.symbol = parse_pattern(tr, pattern, line, after_state + 1);
    RhsReader reader(body.substr(arrow + 2), line, arrow + 3, tr);
    rule.rhs = reader.read_all();
    try {
      tr.add_rule(std::move(rule));
    } catch (const std::invalid_argument& e) {
      fail(line, toks[0].column, e.what());
    }
  }
  auto& tr = ensure();
  if (h.initials.size() != 1) fail(h.initial_line ? h.initial_line : 1, 1, "a transducer needs exactly one initial state");
  tr.set_initial(state_of(tr, h.initials.front(), h.initial_line));
  return std::move(*T);
}

std::string print_transducer(const Transducer& t) {
  std::ostringstream os;
  os << alphabet_line("input", t.input()) << "\n" << alphabet_line("output", t.output()) << "\n";
  os << "states";
  for (std::size_t q = 0; q < t.state_count(); ++q) os << " " << t.state_name(static_cast<StateId>(q));
  os << "\ninitial " << t.state_name(t.initial()) << "\n";
  for (std::size_t q = 0; q < t.state_count(); ++q) {
    const auto& c = t.state_comment(static_cast<StateId>(q));
    if (!c.empty()) os << "# " << t.state_name(static_cast<StateId>(q)) << ": " << c << "\n";
  }
  for (const auto& r : t.rules()) {
    os << print_rule(t, r);
    if (!r.comment.empty()) os << "  # " << r.comment;
    os << "\n";
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write to '" + path + "' failed");
}

TopDownAutomaton load_automaton(const std::string& path) { return parse_automaton(read_file(path)); }

Transducer load_transducer(const std::string& path) { return parse_transducer(read_file(path)); }

}  // namespace tdt
