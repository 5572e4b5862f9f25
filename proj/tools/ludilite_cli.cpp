// ludilite: command-line front end for grammar validation, game simulation,
// reward scoring, corpus evaluation and the reward service.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ludilite/concepts.hpp"
#include "ludilite/dataset.hpp"
#include "ludilite/engine.hpp"
#include "ludilite/grammar.hpp"
#include "ludilite/json_io.hpp"
#include "ludilite/metrics.hpp"
#include "ludilite/rewards.hpp"
#include "ludilite/service.hpp"

namespace {

using nlohmann::json;
using namespace ludilite;

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // the input was processed but did not pass (invalid, non-functional)
  kUsageError = 2,
  kInputError = 3,
  kInternalError = 4,
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Options {
  std::string grammar_path;
  RewardConfig cfg;
  int verbosity = 0;
  bool json_output = false;
};

Grammar load_selected_grammar(const Options& opts) {
  if (opts.grammar_path.empty()) return default_grammar();
  try {
    return load_grammar_file(opts.grammar_path);
  } catch (const GrammarError& e) {
    throw InputError(opts.grammar_path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

void print_json(const json& value) { std::cout << value.dump(2) << '\n'; }

CompileResult compile_or_report(const std::string& path, const std::string& text) {
  CompileResult compiled = compile(text);
  if (!compiled) std::cerr << path << ": " << compiled.error().describe() << '\n';
  return compiled;
}

int run_validate(const Options& opts, const std::string& path) {
  const Grammar grammar = load_selected_grammar(opts);
  const std::string text = read_file(path);
  const ValidPrefixResult prefix = recognize(grammar, text);
  const double r_g = grammar_reward(grammar, text);
  if (opts.json_output) {
    json out = to_json(prefix);
    out["r_g"] = r_g;
    print_json(out);
  } else {
    std::printf("r_g = %.6g\n", r_g);
    std::printf("consumed %zu of %zu characters%s\n", prefix.consumed_chars, prefix.total_chars,
                prefix.accepted ? " (accepted)" : "");
    if (prefix.failure) {
      std::printf("first failure at offset %zu: '%s'\n", prefix.failure->offset,
                  prefix.failure->token.c_str());
    }
  }
  return prefix.accepted ? kOk : kCheckFailed;
}

int run_compile(const Options& opts, const std::string& path) {
  const std::string text = read_file(path);
  const CompileResult compiled = compile_or_report(path, text);
  if (!compiled) {
    if (opts.json_output) {
      print_json({{"compilable", false}, {"error", compiled.error().describe()}});
    }
    return kCheckFailed;
  }
  const GameSpec& spec = compiled.spec();
  const FunctionalityResult functionality =
      check_functionality(spec, opts.cfg.probe_seeds, opts.cfg.max_turns);
  if (opts.json_output) {
    print_json({{"compilable", true},
                {"name", spec.name},
                {"players", spec.num_players},
                {"rows", spec.rows},
                {"cols", spec.cols},
                {"end_rules", spec.end_rules.size()},
                {"functional", functionality.functional},
                {"reason", to_string(functionality.reason)}});
  } else {
    std::printf("compiled '%s': %d players, %dx%d board, %zu end rules\n", spec.name.c_str(),
                spec.num_players, spec.rows, spec.cols, spec.end_rules.size());
    if (functionality.functional) {
      std::printf("functional\n");
    } else {
      std::printf("non-functional: %s\n", to_string(functionality.reason));
    }
  }
  return functionality.functional ? kOk : kCheckFailed;
}

int run_playout(const Options& opts, const std::string& path, int count) {
  const std::string text = read_file(path);
  const CompileResult compiled = compile_or_report(path, text);
  if (!compiled) return kCheckFailed;
  json traces = json::array();
  for (int i = 0; i < count; ++i) {
    const std::uint64_t seed = opts.cfg.seed + static_cast<std::uint64_t>(i);
    const PlayoutTrace trace = random_playout(compiled.spec(), seed, opts.cfg.max_turns);
    if (opts.json_output) {
      traces.push_back(to_json(trace));
    } else {
      std::printf("seed %llu: %s after %zu moves%s\n", static_cast<unsigned long long>(seed),
                  to_string(trace.outcome).c_str(), trace.moves.size(),
                  trace.stalemate ? " (stalemate)" : "");
      if (opts.verbosity > 0) {
        std::printf("  moves:");
        for (const Move& m : trace.moves) std::printf(" %d:%d", m.player, m.site);
        std::printf("\n");
      }
    }
  }
  if (opts.json_output) print_json(traces);
  return kOk;
}

int run_concepts(const Options& opts, const std::string& path) {
  const std::string text = read_file(path);
  try {
    const ReferenceConcepts reference = compute_reference(text, opts.cfg);
    json out = to_json(reference.concepts);
    out["completed_playouts"] = reference.completed_playouts;
    out["base_seed"] = reference.base_seed;
    print_json(out);
    return kOk;
  } catch (const ReferenceError& e) {
    std::cerr << path << ": " << to_string(e.code()) << ": " << e.what() << '\n';
    return kCheckFailed;
  }
}

int run_reward(const Options& opts, const std::string& reference_path,
               const std::vector<std::string>& candidate_paths) {
  const Grammar grammar = load_selected_grammar(opts);
  const std::string reference = read_file(reference_path);
  std::vector<std::string> candidates;
  for (const std::string& p : candidate_paths) candidates.push_back(read_file(p));
  ScoreResult result;
  try {
    result = score_candidates(reference, candidates, grammar, opts.cfg);
  } catch (const ReferenceError& e) {
    throw InputError(reference_path + ": " + to_string(e.code()) + ": " + e.what());
  }
  json breakdowns = json::array();
  for (std::size_t i = 0; i < result.breakdowns.size(); ++i) {
    json b = to_json(result.breakdowns[i]);
    b["candidate"] = candidate_paths[i];
    breakdowns.push_back(std::move(b));
  }
  print_json({{"reference_concepts", to_json(result.reference.concepts)},
              {"breakdowns", std::move(breakdowns)},
              {"advantages", result.advantages},
              {"config", to_json(opts.cfg)}});
  return kOk;
}

void print_table(const EvalReport& report) {
  const auto row = [](const std::string& label, const MetricSummary& s) {
    std::printf("%-24s %6.1f±%-5.1f %6.1f±%-5.1f %6.1f±%-5.1f %5.2f±%-5.2f\n", label.c_str(),
                s.compilability.mean, s.compilability.standard_error, s.functionality.mean,
                s.functionality.standard_error, s.rouge_l.mean, s.rouge_l.standard_error,
                s.ncd.mean, s.ncd.standard_error);
  };
  std::printf("%-24s %-12s %-12s %-12s %-11s\n", "", "Compilability", "Functionality", "ROUGE-L",
              "NCD");
  row("overall", report.overall);
  for (const auto& [category, summary] : report.by_category) row(category, summary);
  if (report.largest_category) {
    std::printf("\nconcept distance from '%s':\n", report.largest_category->c_str());
    for (const auto& [category, distance] : report.category_distances) {
      std::printf("  %-22s %.3f\n", category.c_str(), distance);
    }
  }
}

int run_eval(const Options& opts, const std::string& instances_path,
             const std::string& predictions_path, const std::string& output_path,
             std::size_t max_tokens) {
  const Grammar grammar = load_selected_grammar(opts);
  std::vector<Instance> instances;
  std::vector<Prediction> predictions;
  try {
    instances = filter_by_length(load_instances(instances_path), max_tokens);
    predictions = load_predictions(predictions_path);
  } catch (const DatasetError& e) {
    throw InputError(e.what());
  }
  EvalReport report;
  try {
    report = evaluate_corpus(instances, predictions, grammar, opts.cfg);
  } catch (const EvalError& e) {
    throw InputError(e.what());
  }
  if (!output_path.empty()) {
    std::ofstream out(output_path);
    if (!out) throw InputError("cannot write '" + output_path + "'");
    out << to_json(report).dump(2) << '\n';
  }
  if (opts.json_output) {
    print_json(to_json(report));
  } else {
    print_table(report);
  }
  return kOk;
}

HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const Options& opts, const std::string& host, int port, std::size_t cache_size) {
  RewardService service(load_selected_grammar(opts), opts.cfg, cache_size);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::fprintf(stderr, "ludilite %s listening on %s:%d\n", kVersion, host.c_str(), bound);
  server.listen();
  g_server = nullptr;
  return kOk;
}

void add_reward_flags(CLI::App& app, Options& opts) {
  RewardConfig& cfg = opts.cfg;
  app.add_option("--playouts-gt", cfg.playouts_gt, "Playouts for the ground-truth game")
      ->capture_default_str();
  app.add_option("--playouts-pred", cfg.playouts_pred, "Playouts for predicted games")
      ->capture_default_str();
  app.add_option("--max-turns", cfg.max_turns, "Turn cap per playout")->capture_default_str();
  app.add_option("--budget-secs", cfg.budget_secs, "Wall-clock budget per playout batch")
      ->capture_default_str();
  app.add_option("--probe-seeds", cfg.probe_seeds, "Playouts used by the functionality probe")
      ->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "Gaussian penalty width")->capture_default_str();
  app.add_option("--weight", cfg.weight_per_item, "Weight per concept item")->capture_default_str();
  app.add_option("--lambda-c", cfg.lambda_c, "Concept reward scale")->capture_default_str();
  app.add_option("--floor-reward", cfg.floor_reward, "Concept reward when concepts are uncomputable")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed salt for all playouts")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LudiLite reward and evaluation engine"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--grammar", opts.grammar_path, "Grammar file (defaults to the built-in LudiLite grammar)");
  app.add_flag("-v,--verbose", opts.verbosity, "Increase output detail");
  app.add_flag("--json", opts.json_output, "Emit JSON instead of text");
  add_reward_flags(app, opts);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Grammar reward and valid-prefix diagnostics");
  validate->add_option("file", file, "Description file")->required();

  auto* compile_cmd = app.add_subcommand("compile", "Compile and probe functionality");
  compile_cmd->add_option("file", file, "Description file")->required();

  int count = 10;
  auto* playout = app.add_subcommand("playout", "Seeded random playouts (seeds --seed, --seed+1, ...)");
  playout->add_option("file", file, "Description file")->required();
  playout->add_option("-n,--count", count, "Number of playouts")->capture_default_str();

  auto* concepts = app.add_subcommand("concepts", "Concept vector from --playouts-gt playouts");
  concepts->add_option("file", file, "Description file")->required();

  std::string reference;
  std::vector<std::string> candidates;
  auto* reward = app.add_subcommand("reward", "Score candidates against a reference description");
  reward->add_option("-r,--reference", reference, "Ground-truth description file")->required();
  reward->add_option("-c,--candidate", candidates, "Candidate description file (repeatable)")
      ->required();

  std::string instances_path, predictions_path, output_path;
  std::size_t max_tokens = kDefaultMaxDescriptionTokens;
  auto* eval = app.add_subcommand("eval", "Evaluate predictions against an instance corpus");
  eval->add_option("-i,--instances", instances_path, "Instance file (JSON lines)")->required();
  eval->add_option("-p,--predictions", predictions_path, "Prediction file (JSON lines)")->required();
  eval->add_option("-o,--output", output_path, "Report file (JSON)");
  eval->add_option("--max-tokens", max_tokens, "Drop instances with longer descriptions")
      ->capture_default_str();

  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t cache_size = 256;
  auto* serve = app.add_subcommand("serve", "Run the HTTP reward service");
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--cache-size", cache_size, "Reference concept cache entries")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    opts.cfg.validate();
    if (*validate) return run_validate(opts, file);
    if (*compile_cmd) return run_compile(opts, file);
    if (*playout) return run_playout(opts, file, count);
    if (*concepts) return run_concepts(opts, file);
    if (*reward) return run_reward(opts, reference, candidates);
    if (*eval) return run_eval(opts, instances_path, predictions_path, output_path, max_tokens);
    if (*serve) return run_serve(opts, host, port, cache_size);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}
