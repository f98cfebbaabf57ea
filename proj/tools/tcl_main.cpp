// tcl — consensus-dynamics laboratory command line.
//
// Subcommands: analyze, simulate, tmr, oracle, reproduce, verify.
// Exit codes: 0 success, 1 tolerance/property failure, 2 usage or input
// errors, 3 runtime errors. TCL_SEED overrides --seed when set.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tcl/analytics.hpp"
#include "tcl/cuts.hpp"
#include "tcl/dynamics.hpp"
#include "tcl/experiment.hpp"
#include "tcl/generate.hpp"
#include "tcl/median.hpp"
#include "tcl/repro.hpp"
#include "tcl/tmr.hpp"
#include "tcl/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitToleranceFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw tcl::ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("TCL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw tcl::ParseError("TCL_SEED is not an unsigned integer");
    }
  }
  return flag_seed;
}

std::string default_manifest_path() {
  if (const char* env = std::getenv("TCL_MANIFEST")) return env;
  std::ifstream probe("data/reproductions.json");
  if (probe.good()) return "data/reproductions.json";
  return TCL_DEFAULT_MANIFEST;
}

int cmd_analyze(const std::string& spec_path) {
  const auto [g, p] = tcl::load_spec(read_file(spec_path));
  std::cout << "nodes: " << g.node_count() << "\n";
  std::cout << "edges: " << g.edge_count() << "\n";
  const bool median = tcl::is_median_graph(g);
  std::cout << "median_graph: " << (median ? "true" : "false") << "\n";
  if (median)
    std::cout << "theta_classes: " << tcl::theta_decomposition(g).cuts.size() << "\n";
  else
    std::cout << "theta_classes: n/a\n";
  std::cout << "participants: " << p.total() << "\n";
  const auto [minimizers, cost] = tcl::generalized_median(g, p);
  std::cout << "median_set: {";
  bool first = true;
  minimizers.for_each([&](int v) {
    std::cout << (first ? "" : ", ") << v;
    first = false;
  });
  std::cout << "}\n";
  std::cout << "median_cost: " << cost << "\n";
  const auto cw = tcl::condorcet_winner(g, p);
  if (cw)
    std::cout << "condorcet_winner: " << *cw << "\n";
  else
    std::cout << "condorcet_winner: none\n";
  return kExitOk;
}

int cmd_simulate(const std::string& spec_path, const std::string& dynamic, int tokens,
                 long long trials, std::uint64_t seed, long long cap, const std::string& out,
                 const std::string& format, int threads) {
  const auto dyn = tcl::dynamic_from_name(dynamic);
  if (!dyn) throw tcl::InvalidSpec("unknown dynamic \"" + dynamic + "\"");
  tcl::ExperimentConfig cfg;
  cfg.spec = tcl::parse_spec(nlohmann::json::parse(read_file(spec_path)));
  cfg.dynamic = *dyn;
  cfg.tokens_per_participant = tokens;
  cfg.trials = trials;
  cfg.step_cap = cap;
  cfg.threads = threads;
  const tcl::TrialReport report = tcl::run_experiment(cfg, effective_seed(seed));

  std::ofstream os(out, std::ios::binary);
  if (!os.good()) throw tcl::Error("cannot write " + out);
  if (format == "csv")
    tcl::write_trials_csv(report, os);
  else
    os << tcl::report_json(report).dump(2) << "\n";
  std::cout << tcl::report_json(report).dump(2) << "\n";
  return kExitOk;
}

tcl::Strategy* deviant_by_name(const std::string& name) {
  static tcl::UniformRandomProposer random_dev;
  static tcl::SelfProposer self_dev;
  static tcl::NeverEnd never_dev;
  if (name == "random") return &random_dev;
  if (name == "self") return &self_dev;
  if (name == "never-end") return &never_dev;
  throw tcl::InvalidSpec("unknown deviant strategy \"" + name + "\"");
}

int cmd_tmr(const std::string& spec_path, long long trials, std::uint64_t seed_flag,
            long long cap, int deviant_node, const std::string& deviant,
            const std::string& group_arg) {
  const std::uint64_t seed = effective_seed(seed_flag);
  const auto [g, p] = tcl::load_spec(read_file(spec_path));

  if (!group_arg.empty()) {
    // single majority-rule round with a full transcript
    std::array<int, 3> group{};
    std::istringstream in(group_arg);
    std::string tok;
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(in, tok, ',')) throw tcl::InvalidSpec("--group needs three node ids");
      group[i] = std::stoi(tok);
    }
    std::array<tcl::Strategy*, 3> strategies{&tcl::truthful_strategy(), &tcl::truthful_strategy(),
                                             &tcl::truthful_strategy()};
    tcl::Rng rng(seed);
    const tcl::RoundResult r =
        tcl::run_tmr_round(g, group, strategies, std::nullopt, rng, cap);
    nlohmann::json j;
    j["winner"] = r.winner ? nlohmann::json(*r.winner) : nlohmann::json(nullptr);
    j["steps"] = r.steps;
    j["transcript"] = tcl::transcript_json(r, group);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }

  tcl::StrategyAssignment assignment;
  if (deviant_node >= 0) assignment.by_node[deviant_node] = deviant_by_name(deviant);
  std::map<int, long long> wins;
  long long diverged = 0, capped = 0;
  double utility_sum = 0;
  long long utility_count = 0;
  for (long long i = 0; i < trials; ++i) {
    const auto tr = tcl::run_strategic_ldsg(g, p, 1, assignment,
                                            tcl::Rng::derive(seed, static_cast<std::uint64_t>(i)),
                                            tcl::LdsgCaps{cap, 0});
    if (tr.round_diverged) {
      ++diverged;
      continue;
    }
    if (!tr.winner) {
      ++capped;
      continue;
    }
    ++wins[*tr.winner];
    if (deviant_node >= 0) {
      utility_sum += -g.distance(deviant_node, *tr.winner);
      ++utility_count;
    }
  }
  nlohmann::json j;
  nlohmann::json jwins = nlohmann::json::object();
  for (const auto& [node, count] : wins) jwins[std::to_string(node)] = count;
  j["wins"] = std::move(jwins);
  j["trials"] = trials;
  j["diverged_rounds"] = diverged;
  j["capped"] = capped;
  j["seed"] = seed;
  if (deviant_node >= 0) {
    j["deviant_node"] = deviant_node;
    j["deviant"] = deviant;
    j["deviant_mean_utility"] =
        utility_count > 0 ? utility_sum / static_cast<double>(utility_count) : 0.0;
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_oracle(long long n, long long x0, long long sim_runs, std::uint64_t seed) {
  const auto solver = tcl::absorption_solver(n);
  nlohmann::json j;
  j["n"] = n;
  if (x0 >= 0) {
    j["x0"] = x0;
    j["closed_form"] = tcl::urn_closed_form(n, x0);
    j["solver_hit"] = solver.hit_top[x0];
    j["solver_expected_time"] = solver.expected_time[x0];
    if (sim_runs > 0) {
      tcl::Rng rng(effective_seed(seed));
      long long hits = 0;
      for (long long i = 0; i < sim_runs; ++i)
        if (tcl::urn_simulate(n, x0, rng)) ++hits;
      j["simulated_hit"] = static_cast<double>(hits) / static_cast<double>(sim_runs);
      j["simulation_runs"] = sim_runs;
    }
  } else {
    j["hit"] = solver.hit_top;
    j["expected_time"] = solver.expected_time;
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_reproduce(const std::string& name, const std::string& manifest_path, bool list,
                  int threads) {
  const auto manifest = tcl::repro::load_manifest(manifest_path);
  if (list) {
    for (const auto& n : tcl::repro::reproduction_names(manifest)) std::cout << n << "\n";
    return kExitOk;
  }
  if (!manifest.contains(name)) {
    std::cerr << "unknown reproduction \"" << name << "\"\n";
    return kExitUsage;
  }
  const auto result = tcl::repro::run_reproduction(name, manifest, threads);
  for (const auto& check : result.checks)
    std::cout << result.name << ": " << (check.pass ? "PASS" : "FAIL") << " — " << check.text
              << "\n";
  std::cout << result.name << ": " << (result.pass ? "PASS" : "FAIL") << "\n";
  return result.pass ? kExitOk : kExitToleranceFailure;
}

int cmd_verify(const std::string& level, std::uint64_t seed) {
  const auto results = tcl::verify::run_verification(
      level == "full" ? tcl::verify::Level::Full : tcl::verify::Level::Quick,
      effective_seed(seed));
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << " — " << r.detail << "\n";
    all = all && r.pass;
  }
  std::cout << (all ? "all properties hold" : "property failures detected") << "\n";
  return all ? kExitOk : kExitToleranceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consensus-dynamics laboratory"};
  app.require_subcommand(1);

  std::string spec_path, dynamic = "triad-median", out, format = "json";
  std::string manifest_path = default_manifest_path(), repro_name, level = "quick";
  std::string deviant = "random", group_arg;
  int tokens = 1, threads = 0, deviant_node = -1;
  long long trials = 100, cap = 0, n = 10, x0 = -1, sim_runs = 0;
  std::uint64_t seed = 0;
  bool list = false;

  auto* analyze = app.add_subcommand("analyze", "inspect a graph/profile spec");
  analyze->add_option("--spec", spec_path, "spec JSON path")->required();

  auto* simulate = app.add_subcommand("simulate", "run token-dynamic trials");
  simulate->add_option("--spec", spec_path)->required();
  simulate->add_option("--dynamic", dynamic,
                       "triad-median|restricted|dyad-midpoint|dyad-endpoint");
  simulate->add_option("--tokens", tokens);
  simulate->add_option("--trials", trials);
  simulate->add_option("--seed", seed)->required();
  simulate->add_option("--cap", cap);
  simulate->add_option("--out", out)->required();
  simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--threads", threads);

  auto* tmr = app.add_subcommand("tmr", "strategic majority-rule runs");
  tmr->add_option("--spec", spec_path)->required();
  tmr->add_option("--trials", trials);
  tmr->add_option("--seed", seed)->required();
  tmr->add_option("--cap", cap);
  tmr->add_option("--deviant-node", deviant_node);
  tmr->add_option("--deviant", deviant, "random|self|never-end");
  tmr->add_option("--group", group_arg, "three node ids for a single transcripted round");

  auto* oracle = app.add_subcommand("oracle", "urn absorption oracle");
  oracle->add_option("--n", n)->required();
  oracle->add_option("--x0", x0);
  oracle->add_option("--sim", sim_runs);
  oracle->add_option("--seed", seed);

  auto* reproduce = app.add_subcommand("reproduce", "run a registered reproduction");
  reproduce->add_option("name", repro_name);
  reproduce->add_flag("--list", list);
  reproduce->add_option("--manifest", manifest_path);
  reproduce->add_option("--threads", threads);

  auto* verify = app.add_subcommand("verify", "cross-module property suites");
  verify->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(spec_path);
    if (simulate->parsed())
      return cmd_simulate(spec_path, dynamic, tokens, trials, seed, cap, out, format, threads);
    if (tmr->parsed())
      return cmd_tmr(spec_path, trials, seed, cap, deviant_node, deviant, group_arg);
    if (oracle->parsed()) return cmd_oracle(n, x0, sim_runs, seed);
    if (reproduce->parsed()) {
      if (!list && repro_name.empty()) {
        std::cerr << "reproduce needs a name or --list\n";
        return kExitUsage;
      }
      return cmd_reproduce(repro_name, manifest_path, list, threads);
    }
    if (verify->parsed()) return cmd_verify(level, seed);
  } catch (const tcl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::DisconnectedGraph& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::SelfLoop& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::DuplicateEdge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::OutOfRange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::IndivisibleRemainder& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const tcl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
