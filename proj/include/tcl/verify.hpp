#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tcl/analytics.hpp"
#include "tcl/cuts.hpp"
#include "tcl/dynamics.hpp"
#include "tcl/experiment.hpp"
#include "tcl/generate.hpp"
#include "tcl/intervals.hpp"
#include "tcl/median.hpp"
#include "tcl/rng.hpp"
#include "tcl/star.hpp"
#include "tcl/tmr.hpp"

namespace tcl::verify {

struct PropertyResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// characterization: recognition vs. the all-triples Condorcet criterion

struct CharacterizationStats {
  long long graphs = 0;
  long long label_mismatches = 0;          // recognition vs. Condorcet scan
  long long median_triple_mismatches = 0;  // winner vs. unique distance minimizer
};

/// Checks one graph both ways. The Condorcet scan and the recognition run
/// through unrelated code paths (distance counting vs. interval triples).
inline void characterize_graph(const Graph& g, CharacterizationStats& stats) {
  const int n = g.node_count();
  bool all_triples = true;
  for (int x = 0; x < n && all_triples; ++x)
    for (int y = x + 1; y < n && all_triples; ++y)
      for (int z = y + 1; z < n; ++z) {
        const auto w = condorcet_winner(g, std::vector<int>{x, y, z});
        if (!w) {
          all_triples = false;
          break;
        }
        const NodeSet med = median_of_three(g, x, y, z);
        if (med.count() != 1 || med.first() != *w) ++stats.median_triple_mismatches;
      }
  if (is_median_graph(g) != all_triples) ++stats.label_mismatches;
  ++stats.graphs;
}

/// Every labeled connected graph on exactly `n` nodes (2 <= n <= 7), by
/// edge-mask enumeration with a bitmask connectivity prefilter.
inline void scan_all_connected(int n, CharacterizationStats& stats) {
  const int bits = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> slot(bits);
  int b = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slot[b++] = {u, v};
  std::vector<std::pair<int, int>> edges;
  for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
    // adjacency bitmasks, then flood fill from node 0
    std::array<std::uint8_t, 7> adj{};
    for (int i = 0; i < bits; ++i)
      if (mask >> i & 1) {
        adj[slot[i].first] |= 1u << slot[i].second;
        adj[slot[i].second] |= 1u << slot[i].first;
      }
    std::uint8_t seen = 1, frontier = 1;
    while (frontier) {
      std::uint8_t next = 0;
      for (int v = 0; v < n; ++v)
        if (frontier >> v & 1) next |= adj[v];
      frontier = next & ~seen;
      seen |= next;
    }
    if (seen != (1u << n) - 1) continue;
    edges.clear();
    for (int i = 0; i < bits; ++i)
      if (mask >> i & 1) edges.push_back(slot[i]);
    characterize_graph(Graph::from_edges(n, edges), stats);
  }
}

inline std::vector<GeneratorSpec> characterization_family_corpus() {
  return {
      GeneratorSpec::path(12),
      GeneratorSpec::grid({4, 4}),
      GeneratorSpec::grid({5, 5}),
      GeneratorSpec::grid({3, 3, 3}),
      GeneratorSpec::tree(2, 3),
      GeneratorSpec::tree(3, 2),
      GeneratorSpec::star(9),
      GeneratorSpec::hypercube(3),
      GeneratorSpec::hypercube(4),
      GeneratorSpec::cycle(4),
      GeneratorSpec::cycle(5),
      GeneratorSpec::cycle(6),
      GeneratorSpec::complete(3),
      GeneratorSpec::complete(4),
      GeneratorSpec::complete(5),
  };
}

inline PropertyResult characterization_check(bool exhaustive) {
  CharacterizationStats stats;
  for (const auto& spec : characterization_family_corpus())
    characterize_graph(build_family(spec), stats);
  if (exhaustive) {
    for (int n = 2; n <= 7; ++n) scan_all_connected(n, stats);
  } else {
    Rng rng(1009);
    for (int rep = 0; rep < 200; ++rep) {
      const int n = 4 + rng.below_int(5);
      for (;;) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
          for (int v = u + 1; v < n; ++v)
            if (rng.uniform01() < 0.45) edges.emplace_back(u, v);
        try {
          characterize_graph(Graph::from_edges(n, edges), stats);
          break;
        } catch (const DisconnectedGraph&) {
        }
      }
    }
  }
  PropertyResult r;
  r.name = exhaustive ? "characterization-exhaustive" : "characterization-corpus";
  r.pass = stats.label_mismatches == 0 && stats.median_triple_mismatches == 0;
  std::ostringstream os;
  os << stats.graphs << " graphs, " << stats.label_mismatches << " label mismatches, "
     << stats.median_triple_mismatches << " triple-median mismatches";
  r.detail = os.str();
  return r;
}

// ---------------------------------------------------------------------------
// urn oracle agreements

inline PropertyResult urn_oracle_check(long long max_exact_n, long long sim_runs,
                                       long long max_time_n, std::uint64_t seed) {
  PropertyResult r;
  r.name = "urn-oracle";
  double worst_gap = 0;
  for (long long n = 1; n <= max_exact_n; ++n) {
    const auto solver = absorption_solver(n);
    for (long long x = 0; x <= n; ++x)
      worst_gap = std::max(worst_gap, std::abs(urn_closed_form(n, x) - solver.hit_top[x]));
  }
  bool pass = worst_gap <= 1e-10;

  double worst_time_excess = -1e300;
  for (long long n = 2; n <= max_time_n; n = n < 32 ? n + 1 : n + n / 4) {
    const auto solver = absorption_solver(n);
    double worst = 0;
    for (double e : solver.expected_time) worst = std::max(worst, e);
    const double bound =
        static_cast<double>(n) * std::log(static_cast<double>(n)) + 5.0 * static_cast<double>(n);
    worst_time_excess = std::max(worst_time_excess, worst - bound);
    if (worst > bound) pass = false;
  }

  std::ostringstream os;
  os << "closed-form gap " << worst_gap << " (n<=" << max_exact_n << "), time slack "
     << detail::fmt(-worst_time_excess, 1) << " (n<=" << max_time_n << ")";
  if (sim_runs > 0) {
    Rng rng = Rng::child(seed, 0xF00D);
    for (const auto [n, x0] : std::vector<std::pair<long long, long long>>{{10, 3}, {50, 20}}) {
      long long hits = 0;
      for (long long i = 0; i < sim_runs; ++i)
        if (urn_simulate(n, x0, rng)) ++hits;
      const double expected = absorption_solver(n).hit_top[x0];
      const double freq = static_cast<double>(hits) / static_cast<double>(sim_runs);
      const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(sim_runs));
      if (std::abs(freq - expected) > 4.0 * sigma) pass = false;
      os << ", sim n=" << n << " |" << detail::fmt(freq) << "-" << detail::fmt(expected)
         << "|<=" << detail::fmt(4 * sigma);
    }
  }
  r.pass = pass;
  r.detail = os.str();
  return r;
}

// ---------------------------------------------------------------------------
// structural lemma suite over a median corpus

inline PropertyResult graph_lemma_suite() {
  PropertyResult r;
  r.name = "median-graph-lemmas";
  long long violations = 0;
  std::vector<Graph> corpus;
  corpus.push_back(make_path(9));
  corpus.push_back(make_grid(3, 4));
  corpus.push_back(make_tree(2, 3));
  corpus.push_back(make_star(6));
  corpus.push_back(make_hypercube(3));
  corpus.push_back(make_grid(std::vector<int>{2, 3, 2}));
  long long checked = 0;
  for (const Graph& g : corpus) {
    const int n = g.node_count();
    const auto theta = theta_decomposition(g);
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y) {
        ++checked;
        if (!is_convex(g, interval(g, x, y))) ++violations;
        if (theta.separating_count(x, y) != g.distance(x, y)) ++violations;
        if (x != y && theta.separating_count(x, y) < 1) ++violations;
      }
    for (auto [u, v] : g.edges()) {
      const EdgeCut cut = win_sets(g, u, v);
      if (cut.side_u.count() + cut.side_v.count() != n) ++violations;
      if (!is_convex(g, cut.side_u) || !is_convex(g, cut.side_v)) ++violations;
    }
    if (static_cast<double>(g.edge_count()) > n / 2.0 * std::log2(n) + 1e-9) ++violations;
    // interval intersections collapse through medians
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if ((interval(g, x, y) & interval(g, x, z)) !=
              interval(g, x, unique_median(g, x, y, z)))
            ++violations;
  }
  r.pass = violations == 0;
  std::ostringstream os;
  os << corpus.size() << " graphs, " << checked << " pairs, " << violations << " violations";
  r.detail = os.str();
  return r;
}

inline PropertyResult median_axiom_check(bool full) {
  PropertyResult r;
  r.name = "median-axiom";
  long long failures = 0, tuples = 0;
  std::vector<Graph> graphs;
  graphs.push_back(make_tree(2, 3));
  if (full) graphs.push_back(make_grid(5, 5));
  for (const Graph& g : graphs) {
    const int n = g.node_count();
    std::vector<int> med(static_cast<std::size_t>(n) * n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          med[(static_cast<std::size_t>(a) * n + b) * n + c] = unique_median(g, a, b, c);
    auto m = [&](int a, int b, int c) {
      return med[(static_cast<std::size_t>(a) * n + b) * n + c];
    };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e) {
              ++tuples;
              if (m(a, b, m(c, d, e)) != m(m(a, b, c), m(a, b, d), e)) ++failures;
            }
  }
  r.pass = failures == 0;
  std::ostringstream os;
  os << tuples << " tuples, " << failures << " failures";
  r.detail = os.str();
  return r;
}

// ---------------------------------------------------------------------------
// majority-rule round properties

struct TruthfulExhaustiveStats {
  long long rounds = 0;
  long long winner_mismatches = 0;
  long long step_mismatches = 0;
};

/// All ordered node triples and all six (winner, proposer) role assignments:
/// the round must yield the triple's median, in one step when the initial
/// winner already is the median and exactly two otherwise.
inline void truthful_exhaustive(const Graph& g, TruthfulExhaustiveStats& stats) {
  TruthfulStrategy truthful;
  const std::array<Strategy*, 3> all{&truthful, &truthful, &truthful};
  Rng rng(0);
  const int n = g.node_count();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const std::array<int, 3> group{x, y, z};
        const int m = unique_median(g, x, y, z);
        for (int wi = 0; wi < 3; ++wi)
          for (int pi = 0; pi < 3; ++pi) {
            if (pi == wi) continue;
            const RoundResult r = run_tmr_round(g, group, all, TmrInit{wi, pi}, rng);
            ++stats.rounds;
            if (!r.winner || *r.winner != m) ++stats.winner_mismatches;
            const long long expected_steps = group[wi] == m ? 1 : 2;
            if (r.steps != expected_steps) ++stats.step_mismatches;
          }
      }
}

inline PropertyResult tmr_truthful_check(bool full) {
  TruthfulExhaustiveStats stats;
  std::vector<Graph> graphs;
  if (full) {
    graphs.push_back(make_path(20));
    graphs.push_back(make_grid(5, 5));
    graphs.push_back(make_tree(2, 4));
  } else {
    graphs.push_back(make_path(10));
    graphs.push_back(make_grid(3, 3));
  }
  for (const Graph& g : graphs) truthful_exhaustive(g, stats);
  PropertyResult r;
  r.name = "tmr-truthful";
  r.pass = stats.winner_mismatches == 0 && stats.step_mismatches == 0;
  std::ostringstream os;
  os << stats.rounds << " rounds, " << stats.winner_mismatches << " winner mismatches, "
     << stats.step_mismatches << " step-count mismatches";
  r.detail = os.str();
  return r;
}

inline PropertyResult tmr_bargaining_equivalences(std::uint64_t seed) {
  PropertyResult r;
  r.name = "tmr-bargaining-equivalences";
  long long violations = 0, checked = 0;
  Rng rng = Rng::child(seed, 0xBA6);
  for (const Graph& g : {make_path(12), make_grid(3, 4), make_tree(2, 3), make_star(6)}) {
    const int n = g.node_count();
    for (int rep = 0; rep < 2000; ++rep) {
      const int u = rng.below_int(n), o1 = rng.below_int(n), o2 = rng.below_int(n);
      const int w = rng.below_int(n);
      ++checked;
      NodeSet formula = interval(g, w, unique_median(g, w, u, o1));
      formula |= interval(g, w, unique_median(g, w, u, o2));
      formula.erase(w);
      const NodeSet direct = bargaining_points(g, u, o1, o2, w);
      if (direct != formula) ++violations;
      const auto best = best_bargaining_point(g, u, o1, o2, w);
      if (best) {
        int expect = n;
        for (int cand : {unique_median(g, u, o1, w), unique_median(g, u, o2, w)})
          if (cand != w) expect = std::min(expect, g.distance(u, cand));
        if (g.distance(u, *best) != expect) ++violations;
      } else if (!direct.empty()) {
        ++violations;
      }
      if (direct.empty() != interval(g, u, unique_median(g, u, o1, o2)).contains(w)) ++violations;
    }
  }
  r.pass = violations == 0;
  std::ostringstream os;
  os << checked << " configurations, " << violations << " violations";
  r.detail = os.str();
  return r;
}

struct DeviationRoundStats {
  long long rounds = 0;
  long long terminated = 0;
  long long counterexamples = 0;
};

inline void deviation_rounds(const Graph& g, long long episodes, Rng& rng,
                             DeviationRoundStats& stats) {
  TruthfulStrategy truthful;
  UniformRandomProposer random_dev;
  SelfProposer self_dev;
  NeverEnd never_dev;
  Strategy* deviators[] = {&random_dev, &self_dev, &never_dev};
  const int n = g.node_count();
  for (long long rep = 0; rep < episodes; ++rep) {
    const std::array<int, 3> group{rng.below_int(n), rng.below_int(n), rng.below_int(n)};
    const int dev = rng.below_int(3);
    std::array<Strategy*, 3> strategies{&truthful, &truthful, &truthful};
    strategies[dev] = deviators[rng.below_int(3)];
    const RoundResult r = run_tmr_round(g, group, strategies, std::nullopt, rng, 600);
    ++stats.rounds;
    if (!r.winner) continue;
    ++stats.terminated;
    const int m = unique_median(g, group[0], group[1], group[2]);
    if (!interval(g, group[dev], *r.winner).contains(m)) ++stats.counterexamples;
  }
}

inline PropertyResult deviation_round_check(long long episodes_per_graph, std::uint64_t seed) {
  DeviationRoundStats stats;
  Rng rng = Rng::child(seed, 0xDE7);
  for (const Graph& g : {make_path(20), make_grid(5, 5), make_tree(2, 4), make_star(8)})
    deviation_rounds(g, episodes_per_graph, rng, stats);
  PropertyResult r;
  r.name = "tmr-deviation-rounds";
  r.pass = stats.counterexamples == 0;
  std::ostringstream os;
  os << stats.rounds << " rounds (" << stats.terminated << " terminated), "
     << stats.counterexamples << " counterexamples";
  r.detail = os.str();
  return r;
}

/// Seed-matched truthful vs. deviating full games on a short line; deviation
/// must not help, at the mean or at any quantile.
inline PropertyResult deviation_game_check(long long episodes, std::uint64_t seed) {
  const Graph line = make_path(9);
  Profile p(9);
  for (int v = 0; v < 9; ++v) p.add(v);
  const int deviator_node = 2;
  UniformRandomProposer dev;
  StrategyAssignment deviating;
  deviating.by_node[deviator_node] = &dev;
  StrategyAssignment truthful_everyone;

  std::vector<double> truthful_utils, deviating_utils;
  long long diverged = 0;
  for (long long i = 0; i < episodes; ++i) {
    const std::uint64_t s = Rng::derive(seed, static_cast<std::uint64_t>(i));
    const auto t = run_strategic_ldsg(line, p, 1, truthful_everyone, s);
    const auto d = run_strategic_ldsg(line, p, 1, deviating, s);
    if (!t.winner) continue;
    truthful_utils.push_back(-line.distance(deviator_node, *t.winner));
    if (!d.winner) {
      ++diverged;
      continue;
    }
    deviating_utils.push_back(-line.distance(deviator_node, *d.winner));
  }
  PropertyResult r;
  r.name = "tmr-deviation-game";
  const double mt = mean_of(truthful_utils), md = mean_of(deviating_utils);
  const double se =
      std::sqrt(sample_sd(truthful_utils) * sample_sd(truthful_utils) /
                    static_cast<double>(truthful_utils.size()) +
                sample_sd(deviating_utils) * sample_sd(deviating_utils) /
                    static_cast<double>(std::max<std::size_t>(1, deviating_utils.size())));
  bool pass = md <= mt + 2.0 * se;
  // quantile-level dominance: deviating quantiles must not beat truthful ones
  std::vector<double> ts = truthful_utils, ds = deviating_utils;
  std::sort(ts.begin(), ts.end());
  std::sort(ds.begin(), ds.end());
  double worst_quantile_gap = 0;
  for (double q = 0.05; q < 1.0; q += 0.05) {
    const double tq = ts[static_cast<std::size_t>(q * static_cast<double>(ts.size() - 1))];
    const double dq = ds[static_cast<std::size_t>(q * static_cast<double>(ds.size() - 1))];
    worst_quantile_gap = std::max(worst_quantile_gap, dq - tq);
  }
  if (worst_quantile_gap > 2.0 * se + 1e-12) pass = false;
  r.pass = pass;
  std::ostringstream os;
  os << "mean dev " << detail::fmt(md) << " vs truthful " << detail::fmt(mt) << " (2se "
     << detail::fmt(2 * se) << "), worst quantile gap " << detail::fmt(worst_quantile_gap)
     << ", diverged " << diverged;
  r.detail = os.str();
  return r;
}

/// Matched-truncation concentrated vs. plain restricted star runs: the plain
/// chain must send the root to victory at least as often, within two pooled
/// standard errors.
inline PropertyResult crtd_dominance_check(long long runs, std::uint64_t seed) {
  const int leaves = 20, n = 100, j = 20;
  PropertyResult r;
  r.name = "crtd-dominance";

  ExperimentConfig cfg;
  cfg.spec = GeneratorSpec::star(leaves, ProfileSpec::star_root(leaves, j, n));
  cfg.dynamic = Dynamic::Restricted;
  cfg.trials = runs;
  const TrialReport rtd = run_experiment(cfg, seed);
  const double p_rtd = rtd.win_fraction(0);

  auto crtd_rate = [&](const StarState& init, std::uint64_t stream) {
    Rng rng = Rng::child(seed, stream);
    long long wins = 0;
    for (long long i = 0; i < runs; ++i) {
      StarState s = init;
      if (crtd_root_wins(s, rng)) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(runs);
  };
  // twenty leaves with the same truncation, and the two-leaf extremal packing
  const double p_crtd20 =
      crtd_rate(StarState{j, std::vector<long long>(leaves, (n - j) / leaves)}, 0xC20);
  std::vector<long long> two(leaves, 0);
  two[0] = two[1] = (n - j) / 2;
  const double p_crtd2 = crtd_rate(StarState{j, two}, 0xC02);

  auto se_pooled = [&](double a, double b) {
    return std::sqrt(a * (1 - a) / static_cast<double>(runs) +
                     b * (1 - b) / static_cast<double>(runs));
  };
  bool pass = p_rtd >= p_crtd20 - 2.0 * se_pooled(p_rtd, p_crtd20) &&
              p_rtd >= p_crtd2 - 2.0 * se_pooled(p_rtd, p_crtd2);
  r.pass = pass;
  std::ostringstream os;
  os << "plain " << detail::fmt(p_rtd) << ", concentrated(20 leaves) " << detail::fmt(p_crtd20)
     << ", concentrated(2 leaves) " << detail::fmt(p_crtd2) << ", runs " << runs;
  r.detail = os.str();
  return r;
}

// ---------------------------------------------------------------------------
// dynamics invariants

inline PropertyResult local_consistency_check(std::uint64_t seed) {
  Rng rng = Rng::child(seed, 0x11C);
  const bool mid = check_local_consistency(DecisionKind::DyadicSymmetricMidpoint, 8, 300, rng);
  const bool end = check_local_consistency(DecisionKind::DyadicRandomEndpoint, 8, 300, rng);
  const bool biased = check_local_consistency_fn(
      [](const Graph&, int x, int, Rng&) { return x; }, 8, 300, rng);
  PropertyResult r;
  r.name = "dyadic-local-consistency";
  r.pass = mid && end && !biased;
  r.detail = std::string("midpoint ") + (mid ? "symmetric" : "BROKEN") + ", endpoint " +
             (end ? "symmetric" : "BROKEN") + ", biased control " +
             (biased ? "UNDETECTED" : "rejected");
  return r;
}

inline PropertyResult projection_chain_check(long long steps, std::uint64_t seed) {
  const int n = 15;
  const Graph line = make_path(n);
  Profile p(n);
  for (int v = 0; v < n; ++v) p.add(v);
  const EdgeCut cut = win_sets(line, 7, 8);
  Rng rng = Rng::child(seed, 0x9A0);
  TokenState s = init_tokens(p, 1);
  auto side_count = [&](const TokenState& st) {
    int c = 0;
    for (int v : st.owners)
      if (cut.side_u.contains(v)) ++c;
    return c;
  };
  double exp_up = 0, exp_down = 0, var_up = 0, var_down = 0;
  long long obs_up = 0, obs_down = 0;
  bool jumps = false;
  for (long long t = 0; t < steps; ++t) {
    if (s.consensus()) s = init_tokens(p, 1);
    const int before = side_count(s);
    s = step(line, s, SelectionKind::TriadUniform, DecisionKind::GeneralizedMedianOfGroup, rng);
    const int delta = side_count(s) - before;
    if (delta < -1 || delta > 1) jumps = true;
    const auto tr = urn_transition(n, before);
    exp_up += tr.up;
    var_up += tr.up * (1 - tr.up);
    exp_down += tr.down;
    var_down += tr.down * (1 - tr.down);
    if (delta == 1) ++obs_up;
    if (delta == -1) ++obs_down;
  }
  PropertyResult r;
  r.name = "cut-projection-urn";
  const double dev_up = std::abs(static_cast<double>(obs_up) - exp_up) / std::sqrt(var_up);
  const double dev_down = std::abs(static_cast<double>(obs_down) - exp_down) / std::sqrt(var_down);
  r.pass = !jumps && dev_up <= 5.0 && dev_down <= 5.0;
  std::ostringstream os;
  os << "up dev " << detail::fmt(dev_up, 2) << " sigma, down dev " << detail::fmt(dev_down, 2)
     << " sigma over " << steps << " steps";
  r.detail = os.str();
  return r;
}

struct DriftStats {
  double mean = 0, se = 0;
  bool pass = true;
};

inline DriftStats dyadic_drift(const Graph& line, const Profile& p, DecisionKind rule,
                               long long steps, Rng& rng) {
  const auto embedding = id_embedding(line.node_count());
  TokenState init = init_tokens(p, 1);
  TokenState s = init;
  std::vector<double> increments;
  increments.reserve(static_cast<std::size_t>(steps));
  double prev = token_mean(s, embedding);
  for (long long t = 0; t < steps; ++t) {
    if (s.consensus()) {
      s = init;
      prev = token_mean(s, embedding);
    }
    s = step(line, s, SelectionKind::DyadUniform, rule, rng);
    const double cur = token_mean(s, embedding);
    increments.push_back(cur - prev);
    prev = cur;
  }
  DriftStats out;
  out.mean = mean_of(increments);
  out.se = sample_sd(increments) / std::sqrt(static_cast<double>(increments.size()));
  out.pass = out.se == 0.0 ? out.mean == 0.0 : std::abs(out.mean) <= 4.0 * out.se;
  return out;
}

inline PropertyResult martingale_check(long long steps, std::uint64_t seed) {
  const auto [line, p] = generate(GeneratorSpec::path(21, ProfileSpec::dyadic_counterexample(20)));
  Rng rng = Rng::child(seed, 0x3A7);
  const DriftStats mid = dyadic_drift(line, p, DecisionKind::DyadicSymmetricMidpoint, steps, rng);
  const DriftStats end = dyadic_drift(line, p, DecisionKind::DyadicRandomEndpoint, steps, rng);
  PropertyResult r;
  r.name = "dyadic-martingale";
  r.pass = mid.pass && end.pass;
  std::ostringstream os;
  os << "midpoint drift " << mid.mean << " (se " << mid.se << "), endpoint drift " << end.mean
     << " (se " << end.se << ")";
  r.detail = os.str();
  return r;
}

inline PropertyResult termination_check(std::uint64_t seed) {
  const auto [line, p] = generate(GeneratorSpec::path(121, ProfileSpec::uniform(1)));
  int terminated = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    const Trace tr = run(line, p, 1, SelectionKind::TriadUniform,
                         DecisionKind::GeneralizedMedianOfGroup, Rng::derive(seed, i));
    if (tr.winner) ++terminated;
  }
  PropertyResult r;
  r.name = "triadic-termination";
  r.pass = terminated * 100 >= trials * 99;
  std::ostringstream os;
  os << terminated << "/" << trials << " runs converged within the default cap";
  r.detail = os.str();
  return r;
}

// ---------------------------------------------------------------------------

enum class Level { Quick, Full };

inline std::vector<PropertyResult> run_verification(Level level, std::uint64_t seed) {
  const bool full = level == Level::Full;
  std::vector<PropertyResult> out;
  out.push_back(characterization_check(false));
  if (full) out.push_back(characterization_check(true));
  out.push_back(urn_oracle_check(full ? 200 : 50, full ? 100'000 : 20'000, full ? 500 : 100, seed));
  out.push_back(graph_lemma_suite());
  out.push_back(median_axiom_check(full));
  out.push_back(tmr_truthful_check(full));
  out.push_back(tmr_bargaining_equivalences(seed));
  out.push_back(deviation_round_check(full ? 1000 : 200, seed));
  out.push_back(deviation_game_check(full ? 10'000 : 1'500, seed));
  out.push_back(crtd_dominance_check(full ? 5000 : 1500, seed));
  out.push_back(local_consistency_check(seed));
  out.push_back(projection_chain_check(full ? 100'000 : 30'000, seed));
  out.push_back(martingale_check(full ? 100'000 : 30'000, seed));
  out.push_back(termination_check(seed));
  return out;
}

}  // namespace tcl::verify
