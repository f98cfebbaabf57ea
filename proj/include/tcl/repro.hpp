#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcl/experiment.hpp"
#include "tcl/verify.hpp"

namespace tcl::repro {

struct CheckLine {
  std::string text;
  bool pass;
};

struct ReproResult {
  std::string name;
  bool pass = true;
  std::vector<CheckLine> checks;

  void add(bool ok, const std::string& text) {
    checks.push_back({text, ok});
    pass = pass && ok;
  }
};

inline nlohmann::json load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ParseError("cannot open manifest " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("manifest must map names to configurations");
  return doc;
}

inline std::vector<std::string> reproduction_names(const nlohmann::json& manifest) {
  std::vector<std::string> names;
  for (auto it = manifest.begin(); it != manifest.end(); ++it) names.push_back(it.key());
  return names;
}

namespace detail {

inline std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

inline double group_rate(const TrialReport& report, const nlohmann::json& nodes) {
  double rate = 0;
  for (const auto& v : nodes) rate += report.win_fraction(v.get<int>());
  return rate;
}

inline ReproResult run_win_rate(const std::string& name, const nlohmann::json& e, int threads) {
  ExperimentConfig cfg;
  cfg.spec = parse_spec(e.at("spec"));
  cfg.dynamic = *dynamic_from_name(e.at("dynamic").get<std::string>());
  cfg.tokens_per_participant = e.at("tokens").get<int>();
  cfg.trials = e.at("trials").get<long long>();
  cfg.threads = threads;
  const TrialReport report = run_experiment(cfg, e.at("seed").get<std::uint64_t>());

  ReproResult out;
  out.name = name;
  out.add(report.terminated == report.trials,
          "terminated " + std::to_string(report.terminated) + "/" + std::to_string(report.trials));
  for (const auto& target : e.at("targets")) {
    const double rate = group_rate(report, target.at("nodes"));
    const double lo = target.at("min").get<double>();
    const double hi = target.contains("max") ? target.at("max").get<double>() : 1.0;
    const bool ok = rate >= lo && rate <= hi;
    out.add(ok, target.at("name").get<std::string>() + " rate " + fmt(rate) + " expected [" +
                    fmt(lo) + ", " + fmt(hi) + "]");
  }
  return out;
}

inline ReproResult run_star_theorem(const std::string& name, const nlohmann::json& e,
                                    int threads) {
  const int leaves = e.at("leaves").get<int>();
  const long long n = e.at("n").get<long long>();
  const long long trials = e.at("trials").get<long long>();
  const std::uint64_t seed = e.at("seed").get<std::uint64_t>();
  const double sigma_mult = e.at("sigma_mult").get<double>();

  ReproResult out;
  out.name = name;
  std::vector<double> rates;
  for (const auto& jv : e.at("j_values")) {
    const long long j = jv.get<long long>();
    // root mass j, remainder spread round-robin over the leaves
    std::map<int, long long> counts;
    counts[0] = j;
    const long long per = (n - j) / leaves, rem = (n - j) % leaves;
    for (int leaf = 1; leaf <= leaves; ++leaf) counts[leaf] = per + (leaf <= rem ? 1 : 0);
    ExperimentConfig cfg;
    cfg.spec = GeneratorSpec::star(leaves, ProfileSpec::from_counts(counts));
    cfg.dynamic = Dynamic::Restricted;
    cfg.trials = trials;
    cfg.threads = threads;
    const TrialReport report = run_experiment(cfg, Rng::derive(seed, j));
    rates.push_back(report.win_fraction(0));
  }
  const double main_min = e.at("main_min").get<double>();
  out.add(rates.back() >= main_min, "root rate at largest j " + fmt(rates.back()) +
                                        " expected >= " + fmt(main_min));
  for (std::size_t i = 1; i < rates.size(); ++i) {
    const double se = std::sqrt(rates[i] * (1 - rates[i]) / static_cast<double>(trials) +
                                rates[i - 1] * (1 - rates[i - 1]) / static_cast<double>(trials));
    out.add(rates[i] >= rates[i - 1] - sigma_mult * se,
            "monotone j step " + std::to_string(i) + ": " + fmt(rates[i]) + " vs " +
                fmt(rates[i - 1]) + " (slack " + fmt(sigma_mult * se) + ")");
  }
  return out;
}

inline ReproResult run_dyadic_lowerbound(const std::string& name, const nlohmann::json& e,
                                         int threads) {
  const int k = e.at("k").get<int>();
  const long long runs = e.at("runs").get<long long>();
  const std::uint64_t seed = e.at("seed").get<std::uint64_t>();
  const double mean_min = e.at("mean_min").get<double>();
  const long long drift_steps = e.at("drift_steps").get<long long>();

  ReproResult out;
  out.name = name;
  const auto [line, profile] =
      generate(GeneratorSpec::path(k + 1, ProfileSpec::dyadic_counterexample(k)));
  for (const Dynamic dyn : {Dynamic::DyadMidpoint, Dynamic::DyadEndpoint}) {
    ExperimentConfig cfg;
    cfg.spec = GeneratorSpec::path(k + 1, ProfileSpec::dyadic_counterexample(k));
    cfg.dynamic = dyn;
    cfg.trials = runs;
    cfg.threads = threads;
    const TrialReport report = run_experiment(cfg, Rng::derive(seed, static_cast<int>(dyn)));
    out.add(report.terminated == report.trials,
            std::string(dynamic_name(dyn)) + " terminated " + std::to_string(report.terminated) +
                "/" + std::to_string(report.trials));
    out.add(report.mean_ratio >= mean_min, std::string(dynamic_name(dyn)) + " mean ratio " +
                                               fmt(report.mean_ratio) + " expected >= " +
                                               fmt(mean_min));
    Rng rng = Rng::child(seed, 0xD01F + static_cast<int>(dyn));
    const auto rule = dynamic_rules(dyn).second;
    const verify::DriftStats drift = verify::dyadic_drift(line, profile, rule, drift_steps, rng);
    out.add(drift.pass, std::string(dynamic_name(dyn)) + " token-mean drift " + fmt(drift.mean, 6) +
                            " (se " + fmt(drift.se, 6) + ")");
  }
  return out;
}

inline ReproResult run_time_scaling(const std::string& name, const nlohmann::json& e,
                                    int threads) {
  const long long runs = e.at("runs").get<long long>();
  const std::uint64_t seed = e.at("seed").get<std::uint64_t>();
  const double noise = e.at("noise").get<double>();

  ReproResult out;
  out.name = name;
  std::vector<double> normalized;
  for (const auto& lv : e.at("lengths")) {
    const int n = lv.get<int>();
    ExperimentConfig cfg;
    cfg.spec = GeneratorSpec::path(n, ProfileSpec::uniform(1));
    cfg.dynamic = Dynamic::TriadMedian;
    cfg.trials = runs;
    cfg.threads = threads;
    const TrialReport report = run_experiment(cfg, Rng::derive(seed, n));
    const double ln = std::log(static_cast<double>(n));
    normalized.push_back(report.median_rounds / (static_cast<double>(n) * ln * ln));
    out.add(report.terminated == report.trials,
            "n=" + std::to_string(n) + " terminated " + std::to_string(report.terminated) + "/" +
                std::to_string(report.trials) + ", median T " + fmt(report.median_rounds, 0) +
                ", T/(n ln^2 n) " + fmt(normalized.back(), 4));
  }
  for (std::size_t i = 1; i < normalized.size(); ++i)
    out.add(normalized[i] <= normalized[i - 1] * (1.0 + noise),
            "normalized time step " + std::to_string(i) + ": " + fmt(normalized[i], 4) +
                " <= " + fmt(normalized[i - 1] * (1 + noise), 4));
  return out;
}

inline ReproResult run_approx_scaling(const std::string& name, const nlohmann::json& e,
                                      int threads) {
  const long long runs = e.at("runs").get<long long>();
  const std::uint64_t seed = e.at("seed").get<std::uint64_t>();

  ReproResult out;
  out.name = name;
  std::map<int, TrialReport> by_n;
  for (const auto& lv : e.at("lengths")) {
    const int n = lv.get<int>();
    ExperimentConfig cfg;
    cfg.spec = GeneratorSpec::path(n, ProfileSpec::uniform(1));
    cfg.dynamic = Dynamic::TriadMedian;
    cfg.trials = runs;
    cfg.threads = threads;
    by_n.emplace(n, run_experiment(cfg, Rng::derive(seed, n)));
    const auto& report = by_n.at(n);
    out.add(report.terminated == report.trials,
            "n=" + std::to_string(n) + " terminated " + std::to_string(report.terminated) + "/" +
                std::to_string(report.trials) + ", mean ratio " + fmt(report.mean_ratio) +
                ", p95 ratio " + fmt(report.p95_ratio));
  }
  const int at = e.at("at").get<int>();
  out.add(by_n.at(at).p95_ratio <= e.at("p95_max").get<double>(),
          "p95 ratio at n=" + std::to_string(at) + " " + fmt(by_n.at(at).p95_ratio) +
              " expected <= " + fmt(e.at("p95_max").get<double>()));
  out.add(by_n.at(at).mean_ratio <= e.at("mean_max").get<double>(),
          "mean ratio at n=" + std::to_string(at) + " " + fmt(by_n.at(at).mean_ratio) +
              " expected <= " + fmt(e.at("mean_max").get<double>()));
  const int from = e.at("shrink_from").get<int>(), to = e.at("shrink_to").get<int>();
  const double shrink = e.at("shrink").get<double>();
  const double excess_from = by_n.at(from).p95_ratio - 1.0;
  const double excess_to = by_n.at(to).p95_ratio - 1.0;
  out.add(excess_from >= shrink * excess_to,
          "p95 excess " + fmt(excess_from) + " at n=" + std::to_string(from) + " vs " +
              fmt(excess_to) + " at n=" + std::to_string(to) + " (factor >= " + fmt(shrink, 2) +
              ")");
  return out;
}

}  // namespace detail

/// Runs one registered reproduction; configuration, seed, and tolerances all
/// come from the manifest entry.
inline ReproResult run_reproduction(const std::string& name, const nlohmann::json& manifest,
                                    int threads = 0) {
  if (!manifest.contains(name)) throw InvalidSpec("unknown reproduction \"" + name + "\"");
  const auto& entry = manifest.at(name);
  const std::string kind = entry.at("kind").get<std::string>();
  if (kind == "win-rate") return detail::run_win_rate(name, entry, threads);
  if (kind == "star-theorem") return detail::run_star_theorem(name, entry, threads);
  if (kind == "dyadic-lowerbound") return detail::run_dyadic_lowerbound(name, entry, threads);
  if (kind == "time-scaling") return detail::run_time_scaling(name, entry, threads);
  if (kind == "approx-scaling") return detail::run_approx_scaling(name, entry, threads);
  throw SchemaError("unknown reproduction kind \"" + kind + "\"");
}

}  // namespace tcl::repro
