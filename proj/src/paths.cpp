#include "tdtsynth/paths.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tdt {

LabeledPath LabeledPath::with_symbol(SymbolId f) const {
  if (!labels.empty() && !ends_in_direction()) throw std::invalid_argument("labeled path already ends in a symbol");
  LabeledPath p = *this;
  p.labels.push_back(f);
  return p;
}

LabeledPath LabeledPath::with_direction(int j) const {
  if (labels.empty() || ends_in_direction()) throw std::invalid_argument("labeled path does not end in a symbol");
  LabeledPath p = *this;
  p.dirs.push_back(j);
  return p;
}

LabeledPath LabeledPath::slice(std::size_t from, std::size_t to, bool trailing) const {
  LabeledPath p;
  p.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(from), labels.begin() + static_cast<std::ptrdiff_t>(to));
  if (to > from) {
    std::size_t end = trailing ? to : to - 1;
    end = std::min(end, dirs.size());
    if (end > from) p.dirs.assign(dirs.begin() + static_cast<std::ptrdiff_t>(from), dirs.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return p;
}

void check_path(const LabeledPath& p, const RankedAlphabet& alphabet) {
  if (!(p.dirs.size() == p.labels.size() || p.dirs.size() + 1 == p.labels.size()) &&
      !(p.labels.empty() && p.dirs.empty()))
    throw std::invalid_argument("labeled path must alternate symbols and directions");
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    SymbolId f = p.labels[k];
    if (f < 0 || static_cast<std::size_t>(f) >= alphabet.size()) throw std::invalid_argument("labeled path symbol outside alphabet");
    if (k < p.dirs.size() && (p.dirs[k] < 1 || p.dirs[k] > alphabet.arity(f)))
      throw std::invalid_argument("direction " + std::to_string(p.dirs[k]) + " after '" + alphabet.name(f) +
                                  "' exceeds its arity");
  }
}

LabeledPath parse_path(std::string_view text, const RankedAlphabet& alphabet) {
  LabeledPath p;
  if (text.empty()) return p;
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& tok = parts[k];
    if (k % 2 == 1) {
      if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
        throw ParseError("labeled path: expected a direction, got '" + tok + "'", 1, k + 1);
      p.dirs.push_back(std::stoi(tok));
      continue;
    }
    // A symbol's arity is only known from the following direction, so pick
    // the smallest arity that admits it (any arity for the last symbol).
    auto cands = alphabet.find_all(tok);
    if (auto colon = tok.find(':'); colon != std::string::npos) {
      auto id = alphabet.find(tok.substr(0, colon), std::stoi(tok.substr(colon + 1)));
      cands = id ? std::vector<SymbolId>{*id} : std::vector<SymbolId>{};
    }
    if (cands.empty()) throw ParseError("labeled path: unknown symbol '" + tok + "'", 1, k + 1);
    int need = 0;
    if (k + 1 < parts.size()) {
      const auto& next = parts[k + 1];
      if (!next.empty() && std::all_of(next.begin(), next.end(), ::isdigit)) need = std::stoi(next);
    }
    std::optional<SymbolId> pick;
    for (SymbolId s : cands)
      if (alphabet.arity(s) >= need && (!pick || alphabet.arity(s) < alphabet.arity(*pick))) pick = s;
    if (!pick) throw ParseError("labeled path: '" + tok + "' has no child " + std::to_string(need), 1, k + 1);
    p.labels.push_back(*pick);
  }
  check_path(p, alphabet);
  return p;
}

std::string print_path(const LabeledPath& p, const RankedAlphabet& alphabet) {
  std::string out;
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    if (k) out += ".";
    out += alphabet.name(p.labels[k]);
    if (k < p.dirs.size()) out += "." + std::to_string(p.dirs[k]);
  }
  return out;
}

LabeledPath concat(const LabeledPath& a, const LabeledPath& b) {
  if (!a.empty() && !a.ends_in_direction()) throw std::invalid_argument("concat: left path must end in a direction");
  LabeledPath p = a;
  p.labels.insert(p.labels.end(), b.labels.begin(), b.labels.end());
  p.dirs.insert(p.dirs.end(), b.dirs.begin(), b.dirs.end());
  return p;
}

bool trees_with_path(const Tree& t, const LabeledPath& p) {
  const Tree* cur = &t;
  for (std::size_t k = 0; k < p.labels.size(); ++k) {
    if (cur->symbol != p.labels[k]) return false;
    if (k < p.dirs.size()) {
      int d = p.dirs[k];
      if (d < 1 || static_cast<std::size_t>(d) > cur->children.size()) return false;
      cur = &cur->children[static_cast<std::size_t>(d - 1)];
    }
  }
  return true;
}

LabeledPath path_convolution(const LabeledPath& x, const LabeledPath& y, const ConvolutionAlphabet& conv) {
  if (x.ends_in_direction() || y.ends_in_direction())
    throw std::invalid_argument("path convolution: paths must end in a symbol");
  const LabeledPath& longer = x.length() >= y.length() ? x : y;
  const LabeledPath& shorter = x.length() >= y.length() ? y : x;
  if (!std::equal(shorter.dirs.begin(), shorter.dirs.end(), longer.dirs.begin()))
    throw std::invalid_argument("path convolution: paths diverge");
  LabeledPath out;
  out.dirs = longer.dirs;
  for (std::size_t k = 0; k < longer.length(); ++k) {
    SymbolId f = k < x.length() ? x.labels[k] : kBottom;
    SymbolId g = k < y.length() ? y.labels[k] : kBottom;
    out.labels.push_back(conv.pair(f, g));
  }
  return out;
}

PathRun run_on_path(const TopDownAutomaton& a, StateId q, const LabeledPath& xy, std::optional<int> i) {
  PathRun r;
  r.spine.push_back(q);
  for (std::size_t k = 0; k < xy.length(); ++k) {
    const auto* tr = a.next(r.spine.back(), xy.labels[k]);
    if (!tr) return r;
    int d = k < xy.dirs.size() ? xy.dirs[k] : (i ? *i : 0);
    if (k + 1 == xy.length()) {
      r.accepting = true;
      if (d >= 1 && static_cast<std::size_t>(d) <= tr->size()) r.end = (*tr)[static_cast<std::size_t>(d - 1)];
      return r;
    }
    if (d < 1 || static_cast<std::size_t>(d) > tr->size()) return r;
    r.spine.push_back((*tr)[static_cast<std::size_t>(d - 1)]);
  }
  if (xy.empty()) r.end = q;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

/// Node-local transformation of pair indices for one path node labelled
/// (f, g) continuing in direction d.
class Stepper {
 public:
  explicit Stepper(Predicates& p)
      : p_(p), nq_(p.spec().state_count()), nb_(p.domain().state_count()) {}

  std::size_t size() const { return nq_ * nb_; }

  const TauFn& step(SymbolId f, SymbolId g, int d) {
    auto key = std::make_tuple(f, g, d);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    TauFn fn(size(), kNoState);
    for (std::size_t idx = 0; idx < size(); ++idx) fn[idx] = apply(static_cast<StateId>(idx / nb_), static_cast<StateId>(idx % nb_), f, g, d);
    return cache_.emplace(key, std::move(fn)).first->second;
  }

 private:
  StateId apply(StateId q, StateId b, SymbolId f, SymbolId g, int d) {
    const auto* mv = p_.domain().move(b, f);
    if (!mv) return kNoState;
    const auto* tr = p_.spec().next(q, p_.spec().pair(f, g));
    if (!tr) return kNoState;
    const int n = p_.spec().input().arity(f);
    const int m = g == kBottom ? 0 : p_.spec().output().arity(g);
    for (int l = 1; l <= std::max(n, m); ++l) {
      if (l == d) continue;
      StateId ql = (*tr)[static_cast<std::size_t>(l - 1)];
      bool ok;
      if (l <= n && l <= m)
        ok = p_.uniform_output({{ql, mv->children[static_cast<std::size_t>(l - 1)]}}, {}).has_value();
      else if (l <= n)
        ok = p_.univ_input(ql, mv->children[static_cast<std::size_t>(l - 1)]);
      else
        ok = p_.exists_output(ql).has_value();
      if (!ok) return kNoState;
    }
    if (d < 1 || d > n) return kNoState;
    return static_cast<StateId>(static_cast<std::size_t>((*tr)[static_cast<std::size_t>(d - 1)]) * nb_ +
                                static_cast<std::size_t>(mv->children[static_cast<std::size_t>(d - 1)]));
  }

  Predicates& p_;
  std::size_t nq_, nb_;
  std::map<std::tuple<SymbolId, SymbolId, int>, TauFn> cache_;
};

TauFn then(const TauFn& first, const TauFn& second) {
  TauFn out(first.size(), kNoState);
  for (std::size_t i = 0; i < first.size(); ++i)
    if (first[i] != kNoState) out[i] = second[static_cast<std::size_t>(first[i])];
  return out;
}

TauFn identity(std::size_t n) {
  TauFn id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<StateId>(i);
  return id;
}

std::vector<TauFn> canonical(std::set<TauFn> s) { return {s.begin(), s.end()}; }

void check_segment(const LabeledPath& x, int i, const RankedAlphabet& in) {
  if (x.empty()) throw std::invalid_argument("segment must contain a symbol");
  if (x.ends_in_direction()) throw std::invalid_argument("segment must end in a symbol before its direction");
  check_path(x.with_direction(i), in);
}

TauFn tau_impl(Predicates& preds, Stepper& st, const LabeledPath& x, int i, const LabeledPath& y) {
  const auto& A = preds.spec();
  check_segment(x, i, A.input());
  if (y.length() > x.length() || (!y.empty() && y.ends_in_direction()) ||
      !std::equal(y.dirs.begin(), y.dirs.end(), x.dirs.begin()))
    throw std::invalid_argument("tau: output path must lie on the input path");
  TauFn fn = identity(st.size());
  for (std::size_t k = 0; k < x.length(); ++k) {
    int d = k < x.dirs.size() ? x.dirs[k] : i;
    SymbolId g = k < y.length() ? y.labels[k] : kBottom;
    if (g != kBottom && A.output().arity(g) < d)
      throw std::invalid_argument("tau: output symbol '" + A.output().name(g) + "' has no child in direction " +
                                  std::to_string(d));
    fn = then(fn, st.step(x.labels[k], g, d));
  }
  return fn;
}

Profile profile_impl(Predicates& preds, Stepper& st, const LabeledPath& x, int i) {
  const auto& A = preds.spec();
  check_segment(x, i, A.input());
  enum Status { Running, EndedEmpty, EndedSome };
  std::set<std::pair<int, TauFn>> layer{{Running, identity(st.size())}, {EndedEmpty, identity(st.size())}};
  for (std::size_t k = 0; k < x.length(); ++k) {
    int d = k < x.dirs.size() ? x.dirs[k] : i;
    SymbolId f = x.labels[k];
    std::set<std::pair<int, TauFn>> next;
    for (const auto& [status, fn] : layer) {
      if (status == Running) {
        for (std::size_t g = 0; g < A.output().size(); ++g)
          if (A.output().arity(static_cast<SymbolId>(g)) >= d)
            next.emplace(Running, then(fn, st.step(f, static_cast<SymbolId>(g), d)));
        if (k > 0) next.emplace(EndedSome, then(fn, st.step(f, kBottom, d)));
      } else {
        next.emplace(status, then(fn, st.step(f, kBottom, d)));
      }
    }
    layer = std::move(next);
  }
  std::set<TauFn> eq, lt, eps;
  for (const auto& [status, fn] : layer) (status == Running ? eq : status == EndedSome ? lt : eps).insert(fn);
  return {canonical(eq), canonical(lt), canonical(eps)};
}

}  // namespace

TauFn tau(Predicates& preds, const LabeledPath& x, int i, const LabeledPath& y) {
  Stepper st(preds);
  return tau_impl(preds, st, x, i, y);
}

TauFn tau(const TopDownAutomaton& a, const LabeledPath& x, int i, const LabeledPath& y) {
  Predicates p(a);
  return tau(p, x, i, y);
}

Profile profile(Predicates& preds, const LabeledPath& x, int i) {
  Stepper st(preds);
  return profile_impl(preds, st, x, i);
}

Profile profile(const TopDownAutomaton& a, const LabeledPath& x, int i) {
  Predicates p(a);
  return profile(p, x, i);
}

Profile compose_profiles(const Profile& p1, const Profile& p2) {
  auto cross = [](const std::vector<TauFn>& a, const std::vector<TauFn>& b, std::set<TauFn>& out) {
    for (const auto& f : a)
      for (const auto& g : b) out.insert(then(f, g));
  };
  std::set<TauFn> eq, lt, eps;
  cross(p1.eq, p2.eq, eq);
  cross(p1.eq, p2.lt, lt);
  cross(p1.eq, p2.eps, lt);
  cross(p1.lt, p2.eps, lt);
  cross(p1.eps, p2.eps, eps);
  return {canonical(eq), canonical(lt), canonical(eps)};
}

namespace {

LabeledPath doubled(const LabeledPath& y, int j) { return concat(y.with_direction(j), y); }

}  // namespace

bool is_idempotent(Predicates& preds, const LabeledPath& y, int j) {
  return profile(preds, y, j) == profile(preds, doubled(y, j), j);
}

bool is_idempotent(const TopDownAutomaton& a, const LabeledPath& y, int j) {
  Predicates p(a);
  return is_idempotent(p, y, j);
}

const Profile& ProfileCache::segment(const LabeledPath& x, int i) {
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(x, i);
  auto it = profiles_.find(key);
  if (it != profiles_.end()) return it->second;
  return profiles_.emplace(key, profile(preds_, x, i)).first->second;
}

bool ProfileCache::idempotent(const LabeledPath& y, int j) {
  {
    std::lock_guard lock(mutex_);
    auto it = idempotent_.find({y, j});
    if (it != idempotent_.end()) return it->second;
  }
  bool result = segment(y, j) == segment(doubled(y, j), j);
  std::lock_guard lock(mutex_);
  idempotent_[{y, j}] = result;
  return result;
}

std::optional<Factorization> ProfileCache::find_idempotent_factorization(const LabeledPath& pi) {
  const std::size_t n = pi.length();
  for (std::size_t len = 1; len <= n; ++len) {
    for (std::size_t a = 0; a + len <= n; ++a) {
      std::size_t b = a + len;
      if (b - 1 >= pi.dirs.size()) continue;  // y must be followed by a direction
      LabeledPath y = pi.slice(a, b, false);
      int j = pi.dirs[b - 1];
      if (!idempotent(y, j)) continue;
      Factorization f;
      f.x = pi.slice(0, a, false);
      f.i = a > 0 ? pi.dirs[a - 1] : 0;
      f.y = std::move(y);
      f.j = j;
      f.z = pi.slice(b, n, pi.ends_in_direction());
      f.y_from = a;
      f.y_to = b;
      return f;
    }
  }
  return std::nullopt;
}

std::optional<Factorization> find_idempotent_factorization(const TopDownAutomaton& a, const LabeledPath& pi) {
  Predicates p(a);
  ProfileCache cache(p);
  return cache.find_idempotent_factorization(pi);
}

Tree pump(const Tree& t, const Address& ui, const Address& vj, int n) {
  if (n < 0) throw std::invalid_argument("pump: negative repetition count");
  if (vj.empty()) throw std::invalid_argument("pump: empty factor");
  const Tree* at_ui = subtree(t, ui);
  if (!at_ui) throw std::invalid_argument("pump: node " + format_address(ui) + " missing");
  const Tree* at_uivj = subtree(*at_ui, vj);
  if (!at_uivj) throw std::invalid_argument("pump: node " + format_address(ui) + "·" + format_address(vj) + " missing");
  Tree sx = cut(t, ui);
  Tree sy = cut(*at_ui, vj);
  Tree result = *at_uivj;
  for (int k = 0; k < n; ++k) result = splice(sy, result);
  return splice(sx, result);
}

Tree pump(const Tree& t, const LabeledPath& x, int i, const LabeledPath& y, int j, int n) {
  Address ui;
  if (!x.empty()) {
    ui = x.dirs;
    ui.push_back(i);
  }
  Address vj = y.dirs;
  vj.push_back(j);
  return pump(t, ui, vj, n);
}

}  // namespace tdt
