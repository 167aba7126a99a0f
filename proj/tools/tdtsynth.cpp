#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "tdtsynth/tdtsynth.h"

namespace {

constexpr int kUsage = 2;

struct SpecDeleter {
  void operator()(tdt_spec* s) const { tdt_spec_free(s); }
};
struct TransducerDeleter {
  void operator()(tdt_transducer* t) const { tdt_transducer_free(t); }
};
struct ResultDeleter {
  void operator()(tdt_result* r) const { tdt_result_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { tdt_string_free(s); }
};
using SpecPtr = std::unique_ptr<tdt_spec, SpecDeleter>;
using TransducerPtr = std::unique_ptr<tdt_transducer, TransducerDeleter>;
using ResultPtr = std::unique_ptr<tdt_result, ResultDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Failure {
  tdt_status status;
};

void check(tdt_status s) {
  if (s != TDT_OK) throw Failure{s};
}

SpecPtr load_spec(const std::string& path) {
  tdt_spec* s = nullptr;
  check(tdt_spec_load(path.c_str(), &s));
  return SpecPtr(s);
}

SpecPtr load_domain(const std::string& path) {
  if (path.empty()) return nullptr;
  return load_spec(path);
}

struct GameFlags {
  int delay = 1;
  bool unbounded = false;
  std::string domain;

  void add(CLI::App* cmd) {
    auto* d = cmd->add_option("--delay,-k", delay, "lookahead bound k")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--unbounded", unbounded, "unbounded lookahead")->excludes(d);
    cmd->add_option("--domain", domain, "domain automaton (.ta)")->check(CLI::ExistingFile);
  }
};

ResultPtr run_synthesis(const std::string& spec_path, const GameFlags& g, std::size_t max_vertices, bool explain) {
  auto spec = load_spec(spec_path);
  auto dom = load_domain(g.domain);
  tdt_synth_options o;
  tdt_synth_options_init(&o);
  o.delay = g.delay;
  o.unbounded = g.unbounded;
  o.max_vertices = max_vertices;
  o.explain_stay = explain;
  tdt_result* r = nullptr;
  check(tdt_synthesize(spec.get(), dom.get(), &o, &r));
  ResultPtr result(r);
  for (std::size_t i = 0; i < tdt_result_stay_count(r); ++i) {
    const char* vertex = nullptr;
    const char* fact = nullptr;
    int accepted = 0;
    check(tdt_result_stay(r, i, &vertex, &fact, &accepted));
    std::cerr << "stay " << vertex << "  " << fact << "  " << (accepted ? "accepted" : "rejected") << "\n";
  }
  if (!tdt_result_realizable(r)) {
    std::cerr << "losing play for Out:\n";
    for (std::size_t i = 0; i < tdt_result_counterexample_length(r); ++i)
      std::cerr << "  " << tdt_result_counterexample_step(r, i) << "\n";
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesis of deterministic top-down tree transducers from automaton specifications"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t max_vertices = 1000000;
  app.add_option("--max-vertices", max_vertices, "arena exploration budget")->check(CLI::PositiveNumber);

  GameFlags check_flags, build_flags, game_flags;
  std::string spec_path, tdt_path, out_path, term, dot_path, verify_domain;
  bool explain = false;
  int depth = 4;

  auto* check_cmd = app.add_subcommand("check", "decide realizability");
  check_cmd->add_option("spec", spec_path, "spec automaton (.tap)")->required()->check(CLI::ExistingFile);
  check_flags.add(check_cmd);
  check_cmd->add_flag("--explain-stay", explain, "print every saturated vertex and its stay verdict");

  auto* build_cmd = app.add_subcommand("build", "synthesize a transducer");
  build_cmd->add_option("spec", spec_path, "spec automaton (.tap)")->required()->check(CLI::ExistingFile);
  build_flags.add(build_cmd);
  build_cmd->add_option("-o,--output", out_path, "output .tdt file")->required();
  build_cmd->add_flag("--explain-stay", explain, "print every saturated vertex and its stay verdict");

  auto* run_cmd = app.add_subcommand("run", "run a transducer on a term");
  run_cmd->add_option("tdt", tdt_path, "transducer (.tdt)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("term", term, "input term")->required();

  auto* verify_cmd = app.add_subcommand("verify", "check a transducer against a spec on small inputs");
  verify_cmd->add_option("spec", spec_path, "spec automaton (.tap)")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("tdt", tdt_path, "transducer (.tdt)")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--depth,-d", depth, "maximal input depth")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--domain", verify_domain, "domain automaton (.ta)")->check(CLI::ExistingFile);

  auto* game_cmd = app.add_subcommand("game", "write the solved game arena as DOT");
  game_cmd->add_option("spec", spec_path, "spec automaton (.tap)")->required()->check(CLI::ExistingFile);
  game_flags.add(game_cmd);
  game_cmd->add_option("--dot", dot_path, "output DOT file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check_cmd) {
      auto r = run_synthesis(spec_path, check_flags, max_vertices, explain);
      const bool ok = tdt_result_realizable(r.get());
      std::cout << (ok ? "REALIZABLE" : "UNREALIZABLE") << "\n";
      return ok ? 0 : 1;
    }
    if (*build_cmd) {
      auto r = run_synthesis(spec_path, build_flags, max_vertices, explain);
      if (!tdt_result_realizable(r.get())) {
        std::cout << "UNREALIZABLE\n";
        return 1;
      }
      tdt_transducer* t = nullptr;
      check(tdt_result_transducer(r.get(), &t));
      TransducerPtr owned(t);
      check(tdt_transducer_save(t, out_path.c_str()));
      std::cout << "REALIZABLE\n";
      std::cerr << "wrote " << out_path << " (" << tdt_transducer_state_count(t) << " states)\n";
      return 0;
    }
    if (*run_cmd) {
      tdt_transducer* t = nullptr;
      check(tdt_transducer_load(tdt_path.c_str(), &t));
      TransducerPtr owned(t);
      char* out = nullptr;
      tdt_status s = tdt_run(t, term.c_str(), &out);
      if (s == TDT_ERR_STUCK) {
        std::cerr << "stuck: " << tdt_last_error() << "\n";
        return 1;
      }
      check(s);
      StringPtr text(out);
      std::cout << text.get() << "\n";
      return 0;
    }
    if (*verify_cmd) {
      auto spec = load_spec(spec_path);
      auto dom = load_domain(verify_domain);
      tdt_transducer* t = nullptr;
      check(tdt_transducer_load(tdt_path.c_str(), &t));
      TransducerPtr owned(t);
      std::size_t checked = 0, failures = 0;
      char* report = nullptr;
      check(tdt_verify(spec.get(), t, depth, dom.get(), &checked, &failures, &report));
      StringPtr text(report);
      std::cout << text.get();
      std::cerr << "checked " << checked << " inputs up to depth " << depth << ", " << failures << " failures\n";
      return failures == 0 ? 0 : 1;
    }
    if (*game_cmd) {
      auto spec = load_spec(spec_path);
      auto dom = load_domain(game_flags.domain);
      tdt_synth_options o;
      tdt_synth_options_init(&o);
      o.delay = game_flags.delay;
      o.unbounded = game_flags.unbounded;
      o.max_vertices = max_vertices;
      char* dot = nullptr;
      check(tdt_game_dot(spec.get(), dom.get(), &o, &dot));
      StringPtr text(dot);
      std::FILE* f = std::fopen(dot_path.c_str(), "w");
      if (!f) {
        std::cerr << "error: cannot write " << dot_path << "\n";
        return kUsage;
      }
      std::fputs(text.get(), f);
      std::fclose(f);
      return 0;
    }
  } catch (const Failure& f) {
    std::cerr << "error (" << tdt_status_name(f.status) << "): " << tdt_last_error() << "\n";
    return kUsage;
  }
  return kUsage;
}
