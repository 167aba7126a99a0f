#include "tdtsynth/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

#include "tdtsynth/safety_game.hpp"

namespace tdt {

std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, int max_depth) {
  std::vector<Tree> all;
  if (max_depth < 0) return all;
  for (std::size_t s = 0; s < alphabet.size(); ++s)
    if (alphabet.arity(static_cast<SymbolId>(s)) == 0) all.emplace_back(static_cast<SymbolId>(s));
  std::size_t below = 0;  // trees of depth < d-1
  for (int d = 1; d <= max_depth; ++d) {
    const std::size_t prev = all.size();
    std::vector<Tree> level;
    for (std::size_t s = 0; s < alphabet.size(); ++s) {
      const int n = alphabet.arity(static_cast<SymbolId>(s));
      if (n == 0 || prev == 0) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
      for (;;) {
        if (std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= below; })) {
          Tree t(static_cast<SymbolId>(s));
          for (std::size_t i : idx) t.children.push_back(all[i]);
          level.push_back(std::move(t));
        }
        int k = n - 1;
        while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == prev) idx[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
      }
    }
    below = prev;
    for (auto& t : level) all.push_back(std::move(t));
  }
  return all;
}

std::size_t count_trees(const RankedAlphabet& alphabet, int max_depth) {
  if (max_depth < 0) return 0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < alphabet.size(); ++s) {
    const int n = alphabet.arity(static_cast<SymbolId>(s));
    std::size_t c = 1;
    if (n > 0) {
      if (max_depth == 0) continue;
      const std::size_t sub = count_trees(alphabet, max_depth - 1);
      for (int i = 0; i < n; ++i) c *= sub;
    }
    count += c;
  }
  return count;
}

namespace {

std::optional<VerifyFailure> check_one(const TopDownAutomaton& spec, const Transducer& T, const Tree& t) {
  Tree out;
  try {
    out = execute(T, t);
  } catch (const StuckError& e) {
    return VerifyFailure{t, std::string("stuck ") + e.what()};
  }
  if (!accepts(spec, convolution(t, out, spec.convolution())))
    return VerifyFailure{t, "rejected " + print_term(out, spec.output())};
  return std::nullopt;
}

}  // namespace

VerifyReport verify_uniformizer(const TopDownAutomaton& spec, const Transducer& T, int depth,
                                const TopDownAutomaton* dom, unsigned threads) {
  std::vector<Tree> inputs = enumerate_trees(spec.input(), depth);
  if (dom) {
    std::erase_if(inputs, [&](const Tree& t) { return !accepts(*dom, t); });
  }
  VerifyReport report;
  report.checked = inputs.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, inputs.size() / 256)));

  std::vector<std::vector<VerifyFailure>> parts(threads);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < inputs.size(); i += threads)
      if (auto f = check_one(spec, T, inputs[i])) parts[w].push_back(std::move(*f));
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  // Restore enumeration order.
  std::vector<std::pair<std::size_t, VerifyFailure>> merged;
  for (unsigned w = 0; w < threads; ++w) {
    std::size_t cursor = w;
    for (auto& f : parts[w]) {
      while (!(inputs[cursor] == f.input)) cursor += threads;
      merged.emplace_back(cursor, std::move(f));
      cursor += threads;
    }
  }
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [i, f] : merged) report.failures.push_back(std::move(f));
  return report;
}

std::string format_report(const VerifyReport& report, const RankedAlphabet& input) {
  std::ostringstream os;
  for (const auto& f : report.failures) os << print_term(f.input, input) << '\t' << f.verdict << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

class Refuter {
 public:
  Refuter(const TopDownAutomaton& spec, const RefutationOptions& o, std::vector<Tree> inputs, std::size_t limit)
      : spec_(spec), o_(o), inputs_(std::move(inputs)), limit_(limit) {
    const auto& in = spec.input();
    rules_.assign(static_cast<std::size_t>(o.states), std::vector<int>(in.size(), -1));
    for (std::size_t f = 0; f < in.size(); ++f) {
      const int n = in.arity(static_cast<SymbolId>(f));
      if (static_cast<std::size_t>(n) >= candidates_.size()) candidates_.resize(static_cast<std::size_t>(n) + 1);
    }
    for (std::size_t n = 0; n < candidates_.size(); ++n) candidates_[n] = build_candidates(static_cast<int>(n));
  }

  RefutationResult run() {
    RefutationResult r;
    if (search(0)) {
      r.survivor = to_transducer();
    } else {
      r.refuted = true;
    }
    r.table = std::move(table_);
    r.failures = failures_;
    r.nodes = nodes_;
    return r;
  }

 private:
  struct Candidate {
    RuleTree rhs;
    int max_state = -1;
  };

  std::vector<Candidate> build_candidates(int n) const {
    const auto& out = spec_.output();
    std::vector<Candidate> all;
    for (std::size_t g = 0; g < out.size(); ++g)
      if (out.arity(static_cast<SymbolId>(g)) == 0) all.push_back({RuleTree::node(static_cast<SymbolId>(g)), -1});
    for (int s = 0; s < o_.states; ++s)
      for (int v = 1; v <= n; ++v) all.push_back({RuleTree::call(s, v), s});
    std::size_t below = 0;
    for (int d = 1; d <= o_.rule_depth; ++d) {
      const std::size_t prev = all.size();
      std::vector<Candidate> level;
      for (std::size_t g = 0; g < out.size(); ++g) {
        const int m = out.arity(static_cast<SymbolId>(g));
        if (m == 0) continue;
        std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
        for (;;) {
          if (std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= below; })) {
            Candidate c{RuleTree::node(static_cast<SymbolId>(g)), -1};
            for (std::size_t i : idx) {
              c.rhs.children.push_back(all[i].rhs);
              c.max_state = std::max(c.max_state, all[i].max_state);
            }
            level.push_back(std::move(c));
          }
          int k = m - 1;
          while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == prev) idx[static_cast<std::size_t>(k--)] = 0;
          if (k < 0) break;
        }
      }
      below = prev;
      for (auto& c : level) all.push_back(std::move(c));
    }
    return all;
  }

  struct Missing {
    StateId q;
    SymbolId f;
  };

  const Candidate& rule(StateId q, SymbolId f) const {
    const int n = spec_.input().arity(f);
    return candidates_[static_cast<std::size_t>(n)][static_cast<std::size_t>(rules_[static_cast<std::size_t>(q)][static_cast<std::size_t>(f)])];
  }

  std::optional<Missing> eval(StateId q, const Tree& t, Tree& out) const {
    if (rules_[static_cast<std::size_t>(q)][static_cast<std::size_t>(t.symbol)] < 0) return Missing{q, t.symbol};
    return instantiate(rule(q, t.symbol).rhs, t, out);
  }

  std::optional<Missing> instantiate(const RuleTree& r, const Tree& t, Tree& out) const {
    if (r.kind == RuleTree::Kind::Call) return eval(r.state, t.children[static_cast<std::size_t>(r.var - 1)], out);
    out = Tree(r.symbol);
    out.children.resize(r.children.size());
    for (std::size_t i = 0; i < r.children.size(); ++i)
      if (auto m = instantiate(r.children[i], t, out.children[i])) return m;
    return std::nullopt;
  }

  bool search(std::size_t i) {
    for (; i < inputs_.size(); ++i) {
      Tree out;
      auto missing = eval(0, inputs_[i], out);
      if (missing) {
        auto& slot = rules_[static_cast<std::size_t>(missing->q)][static_cast<std::size_t>(missing->f)];
        const auto& cands = candidates_[static_cast<std::size_t>(spec_.input().arity(missing->f))];
        for (std::size_t c = 0; c < cands.size(); ++c) {
          if (cands[c].max_state > used_) continue;
          if (++nodes_ > o_.max_nodes) throw BudgetExceeded("refutation search exceeded its node budget");
          const int saved = used_;
          used_ = std::max(used_, cands[c].max_state);
          slot = static_cast<int>(c);
          if (search(i)) return true;
          slot = -1;
          used_ = saved;
        }
        return false;
      }
      if (!accepts(spec_, convolution(inputs_[i], out, spec_.convolution()))) {
        ++failures_;
        if (table_.size() < limit_) table_.push_back({describe_rules(), print_term(inputs_[i], spec_.input())});
        return false;
      }
    }
    return true;
  }

  Transducer to_transducer() const {
    Transducer T(spec_.input(), spec_.output());
    for (int s = 0; s <= used_; ++s) T.add_state("s" + std::to_string(s));
    T.set_initial(0);
    for (std::size_t q = 0; q < rules_.size() && static_cast<int>(q) <= used_; ++q)
      for (std::size_t f = 0; f < rules_[q].size(); ++f)
        if (rules_[q][f] >= 0)
          T.add_rule({static_cast<StateId>(q), static_cast<SymbolId>(f), rule(static_cast<StateId>(q), static_cast<SymbolId>(f)).rhs, {}});
    return T;
  }

  std::string describe_rules() const {
    Transducer T = to_transducer();
    std::string s;
    for (const auto& r : T.rules()) s += (s.empty() ? "" : "; ") + print_rule(T, r);
    return s;
  }

  const TopDownAutomaton& spec_;
  RefutationOptions o_;
  std::vector<Tree> inputs_;
  std::size_t limit_;
  std::vector<std::vector<Candidate>> candidates_;  // by input arity
  std::vector<std::vector<int>> rules_;             // [state][input symbol] -> candidate index
  int used_ = 0;                                    // highest state in use
  std::vector<RefutationEntry> table_;
  std::size_t failures_ = 0;
  std::size_t nodes_ = 0;
};

}  // namespace

RefutationResult refute_small_transducers(const TopDownAutomaton& spec, const RefutationOptions& options,
                                          const TopDownAutomaton* dom, std::size_t table_limit) {
  if (options.states < 1 || options.rule_depth < 0 || options.input_depth < 0)
    throw std::invalid_argument("refutation budgets must be positive");
  std::vector<Tree> inputs = enumerate_trees(spec.input(), options.input_depth);
  if (dom) std::erase_if(inputs, [&](const Tree& t) { return !accepts(*dom, t); });
  Refuter r(spec, options, std::move(inputs), table_limit);
  return r.run();
}

}  // namespace tdt
