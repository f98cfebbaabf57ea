#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcl/analytics.hpp"
#include "tcl/dynamics.hpp"
#include "tcl/generate.hpp"

namespace tcl {

enum class Dynamic { TriadMedian, Restricted, DyadMidpoint, DyadEndpoint };

inline const char* dynamic_name(Dynamic d) {
  switch (d) {
    case Dynamic::TriadMedian: return "triad-median";
    case Dynamic::Restricted: return "restricted";
    case Dynamic::DyadMidpoint: return "dyad-midpoint";
    case Dynamic::DyadEndpoint: return "dyad-endpoint";
  }
  return "?";
}

inline std::optional<Dynamic> dynamic_from_name(const std::string& name) {
  if (name == "triad-median") return Dynamic::TriadMedian;
  if (name == "restricted") return Dynamic::Restricted;
  if (name == "dyad-midpoint") return Dynamic::DyadMidpoint;
  if (name == "dyad-endpoint") return Dynamic::DyadEndpoint;
  return std::nullopt;
}

inline std::pair<SelectionKind, DecisionKind> dynamic_rules(Dynamic d) {
  switch (d) {
    case Dynamic::TriadMedian:
      return {SelectionKind::TriadUniform, DecisionKind::GeneralizedMedianOfGroup};
    case Dynamic::Restricted:
      return {SelectionKind::TriadUniform, DecisionKind::RestrictedVote};
    case Dynamic::DyadMidpoint:
      return {SelectionKind::DyadUniform, DecisionKind::DyadicSymmetricMidpoint};
    case Dynamic::DyadEndpoint:
      return {SelectionKind::DyadUniform, DecisionKind::DyadicRandomEndpoint};
  }
  throw InvalidSpec("unknown dynamic");
}

struct ExperimentConfig {
  GeneratorSpec spec;
  Dynamic dynamic = Dynamic::TriadMedian;
  int tokens_per_participant = 1;
  long long trials = 0;
  long long step_cap = 0;  // 0 = default formula
  int threads = 0;         // 0 = hardware concurrency; never affects results
};

struct TrialRow {
  long long trial;
  int winner;       // -1 when the cap was hit
  long long rounds;
  double ratio;     // D(winner)/D(opt); NaN when no winner
};

struct TrialReport {
  nlohmann::json config;  // canonical config echo
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<TrialRow> rows;
  std::map<int, long long> wins;
  long long trials = 0;
  long long terminated = 0;
  double mean_ratio = 0, p95_ratio = 0;
  double mean_rounds = 0, median_rounds = 0;
  int top_node = -1;
  double ci_low = 0, ci_high = 0;  // 95% Wilson interval of the modal winner

  double win_fraction(int node) const {
    auto it = wins.find(node);
    return trials == 0 || it == wins.end()
               ? 0.0
               : static_cast<double>(it->second) / static_cast<double>(trials);
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 15];
    v >>= 4;
  }
  return s;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace detail

inline nlohmann::json experiment_config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["spec"] = spec_to_json(cfg.spec);
  j["dynamic"] = dynamic_name(cfg.dynamic);
  j["tokens"] = cfg.tokens_per_participant;
  j["trials"] = cfg.trials;
  j["step_cap"] = cfg.step_cap;
  return j;  // threads intentionally excluded: results do not depend on them
}

/// Runs the configured trials on a worker pool. Trial i always uses the
/// stream derived from (seed, i), and aggregation runs in trial order, so
/// the report is bit-identical however the work is scheduled.
inline TrialReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto [g, p] = generate(cfg.spec);
  const auto [sel, dec] = dynamic_rules(cfg.dynamic);

  TrialReport report;
  report.config = experiment_config_json(cfg);
  report.seed = seed;
  report.config_hash = detail::hex64(detail::fnv1a(report.config.dump()));
  report.trials = cfg.trials;
  report.rows.assign(static_cast<std::size_t>(cfg.trials), TrialRow{});
  if (cfg.trials == 0) return report;

  const auto [opt_set, opt_cost] = generalized_median(g, p);
  int n_threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (static_cast<long long>(n_threads) > cfg.trials)
    n_threads = static_cast<int>(cfg.trials);

  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      const Trace tr = run(g, p, cfg.tokens_per_participant, sel, dec,
                           Rng::derive(seed, static_cast<std::uint64_t>(i)),
                           RunOptions{cfg.step_cap, nullptr});
      TrialRow& row = report.rows[static_cast<std::size_t>(i)];
      row.trial = i;
      row.winner = tr.winner ? *tr.winner : -1;
      row.rounds = tr.winner ? tr.rounds : tr.terminal.round;
      if (tr.winner) {
        row.ratio = opt_cost == 0
                        ? (opt_set.contains(*tr.winner)
                               ? 1.0
                               : std::numeric_limits<double>::infinity())
                        : static_cast<double>(total_distance(g, p, *tr.winner)) /
                              static_cast<double>(opt_cost);
      } else {
        row.ratio = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<double> ratios, rounds;
  for (const auto& row : report.rows) {
    if (row.winner < 0) continue;
    ++report.terminated;
    ++report.wins[row.winner];
    ratios.push_back(row.ratio);
    rounds.push_back(static_cast<double>(row.rounds));
  }
  if (!ratios.empty()) {
    report.mean_ratio = mean_of(ratios);
    report.p95_ratio = percentile(ratios, 0.95);
    report.mean_rounds = mean_of(rounds);
    report.median_rounds = percentile(rounds, 0.5);
    long long best = -1;
    for (const auto& [node, count] : report.wins)
      if (count > best) {
        best = count;
        report.top_node = node;
      }
    const auto ci = wilson_interval(best, cfg.trials, 0.95);
    report.ci_low = ci.first;
    report.ci_high = ci.second;
  }
  return report;
}

/// One row per trial: trial,winner,rounds,ratio. Winner -1 and an empty
/// ratio mark a capped trial.
inline void write_trials_csv(const TrialReport& report, std::ostream& os) {
  os << "trial,winner,rounds,ratio\n";
  for (const auto& row : report.rows) {
    os << row.trial << ',' << row.winner << ',' << row.rounds << ',';
    if (row.winner >= 0) os << detail::format_double(row.ratio);
    os << '\n';
  }
}

inline nlohmann::json report_json(const TrialReport& report) {
  nlohmann::json wins = nlohmann::json::object();
  for (const auto& [node, count] : report.wins) wins[std::to_string(node)] = count;
  nlohmann::json j;
  j["config"] = report.config;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["terminated"] = report.terminated;
  j["wins"] = std::move(wins);
  j["mean_ratio"] = report.mean_ratio;
  j["p95_ratio"] = report.p95_ratio;
  j["mean_T"] = report.mean_rounds;
  j["median_T"] = report.median_rounds;
  j["ci"] = {{"node", report.top_node}, {"low", report.ci_low}, {"high", report.ci_high}};
  return j;
}

}  // namespace tcl
