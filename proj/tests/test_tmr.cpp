#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "tcl/analytics.hpp"
#include "tcl/generate.hpp"
#include "tcl/median.hpp"
#include "tcl/tmr.hpp"

#include "test_helpers.hpp"

using namespace tcl;
using tcl::testing::to_set;

namespace {

std::vector<Graph> tmr_corpus() {
  std::vector<Graph> out;
  out.push_back(make_path(10));
  out.push_back(make_grid(3, 4));
  out.push_back(make_tree(2, 3));
  out.push_back(make_star(6));
  return out;
}

}  // namespace

TEST_CASE("preferred points") {
  const Graph line = make_path(11);
  CHECK(preferred_points(line, 4, 4).empty());
  CHECK(to_set(preferred_points(line, 5, 2)) == std::set<int>{3, 4, 5});

  const Graph grid = make_grid(3, 3);
  CHECK(to_set(preferred_points(grid, 8, 0)) == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("bargaining points") {
  const Graph line = make_path(11);
  CHECK(to_set(bargaining_points(line, 5, 2, 9, 2)) == std::set<int>{3, 4, 5});
  CHECK(bargaining_points(line, 2, 5, 9, 2).empty());  // u == w

  // nobody bargains once the winner is the median
  Rng rng(17);
  for (const Graph& g : tmr_corpus()) {
    const int n = g.node_count();
    for (int rep = 0; rep < 300; ++rep) {
      const int x = rng.below_int(n), y = rng.below_int(n), z = rng.below_int(n);
      const int m = unique_median(g, x, y, z);
      CHECK(bargaining_points(g, x, y, z, m).empty());
      CHECK(bargaining_points(g, y, x, z, m).empty());
      CHECK(bargaining_points(g, z, x, y, m).empty());
    }
  }
}

TEST_CASE("bargaining points match their interval formula") {
  // B_u == (I(w, m(w,u,u')) ∪ I(w, m(w,u,u''))) minus w
  for (const Graph& g : tmr_corpus()) {
    const int n = g.node_count();
    Rng rng(23);
    for (int rep = 0; rep < 400; ++rep) {
      const int u = rng.below_int(n), o1 = rng.below_int(n), o2 = rng.below_int(n);
      const int w = rng.below_int(n);
      NodeSet formula = interval(g, w, unique_median(g, w, u, o1));
      formula |= interval(g, w, unique_median(g, w, u, o2));
      formula.erase(w);
      CHECK(bargaining_points(g, u, o1, o2, w) == formula);
    }
  }
}

TEST_CASE("best bargaining point") {
  const Graph line = make_path(11);
  CHECK(best_bargaining_point(line, 5, 2, 9, 2) == 5);
  CHECK_FALSE(best_bargaining_point(line, 9, 2, 5, 5).has_value());

  // ties break to the lowest node id: both candidate medians at distance 1
  const Graph grid = make_grid(3, 3);
  const NodeSet b = bargaining_points(grid, 4, 0, 8, 2);
  CHECK(to_set(b) == std::set<int>{1, 5});
  CHECK(best_bargaining_point(grid, 4, 0, 8, 2) == 1);

  // when nonempty it is the closer of the two triple medians
  for (const Graph& g : tmr_corpus()) {
    const int n = g.node_count();
    Rng rng(29);
    for (int rep = 0; rep < 400; ++rep) {
      const int u = rng.below_int(n), o1 = rng.below_int(n), o2 = rng.below_int(n);
      const int w = rng.below_int(n);
      const auto best = best_bargaining_point(g, u, o1, o2, w);
      if (!best) continue;
      const int m1 = unique_median(g, u, o1, w);
      const int m2 = unique_median(g, u, o2, w);
      int expect_dist = g.node_count();
      for (int cand : {m1, m2})
        if (cand != w) expect_dist = std::min(expect_dist, g.distance(u, cand));
      CHECK(g.distance(u, *best) == expect_dist);
    }
  }
}

TEST_CASE("no bargaining exactly when the winner lies toward the median") {
  for (const Graph& g : tmr_corpus()) {
    const int n = g.node_count();
    Rng rng(31);
    for (int rep = 0; rep < 500; ++rep) {
      const int u = rng.below_int(n), o1 = rng.below_int(n), o2 = rng.below_int(n);
      const int w = rng.below_int(n);
      const int m = unique_median(g, u, o1, o2);
      CHECK(bargaining_points(g, u, o1, o2, w).empty() == interval(g, u, m).contains(w));
    }
  }
}

TEST_CASE("points along the walk to the median separate cleanly") {
  // w on a shortest path y -> m(x,y,z) puts m on x -> w and w on x -> y
  for (const Graph& g : {make_path(10), make_grid(4, 5)}) {
    const int n = g.node_count();
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          const int m = unique_median(g, x, y, z);
          for (int w : interval_nodes(g, y, m)) {
            CHECK(interval(g, x, w).contains(m));
            CHECK(interval(g, x, y).contains(w));
          }
        }
  }
}

TEST_CASE("truthful round transcript on a line") {
  const Graph line = make_path(11);
  TruthfulStrategy truthful;
  const std::array<Strategy*, 3> all{&truthful, &truthful, &truthful};
  Rng rng(1);
  const RoundResult r =
      run_tmr_round(line, {2, 5, 9}, all, TmrInit{0, 1}, rng);
  REQUIRE(r.winner.has_value());
  CHECK(*r.winner == 5);
  CHECK(r.steps == 2);
  REQUIRE(r.transcript.size() == 2);
  CHECK(r.transcript[0].proposer_index == 1);
  CHECK(r.transcript[0].proposal == 5);
  CHECK(r.transcript[0].votes == std::array<bool, 3>{false, true, true});
  CHECK(r.transcript[0].winner_after == 5);
  CHECK(r.transcript[1].proposer_index == 0);
  CHECK_FALSE(r.transcript[1].proposal.has_value());
  CHECK(r.transcript[1].votes == std::array<bool, 3>{true, true, true});

  const auto j = transcript_json(r, {2, 5, 9});
  CHECK(j.size() == 2);
  CHECK(j[0].at("proposer") == 5);
  CHECK(j[0].at("proposal") == 5);
  CHECK(j[1].at("proposal") == "END");
  CHECK(j[0].at("votes").at("2") == false);
}

TEST_CASE("coincident groups end immediately") {
  const Graph line = make_path(11);
  TruthfulStrategy truthful;
  const std::array<Strategy*, 3> all{&truthful, &truthful, &truthful};
  Rng rng(2);
  const RoundResult r = run_tmr_round(line, {4, 4, 4}, all, TmrInit{0, 1}, rng);
  REQUIRE(r.winner.has_value());
  CHECK(*r.winner == 4);
  CHECK(r.steps == 1);
}

TEST_CASE("truthful rounds always land on the group median") {
  const Graph line = make_path(10);
  TruthfulStrategy truthful;
  const std::array<Strategy*, 3> all{&truthful, &truthful, &truthful};
  Rng rng(3);
  for (int x = 0; x < 10; ++x)
    for (int y = 0; y < 10; ++y)
      for (int z = 0; z < 10; ++z) {
        const std::array<int, 3> group{x, y, z};
        const int m = unique_median(line, x, y, z);
        for (int wi = 0; wi < 3; ++wi)
          for (int pi = 0; pi < 3; ++pi) {
            if (pi == wi) continue;
            const RoundResult r = run_tmr_round(line, group, all, TmrInit{wi, pi}, rng);
            REQUIRE(r.winner.has_value());
            CHECK(*r.winner == m);
            CHECK(r.steps == (group[wi] == m ? 1 : 2));
          }
      }
}

TEST_CASE("random initial roles stay within the group") {
  const Graph line = make_path(11);
  TruthfulStrategy truthful;
  const std::array<Strategy*, 3> all{&truthful, &truthful, &truthful};
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    const RoundResult r = run_tmr_round(line, {1, 6, 9}, all, std::nullopt, rng);
    REQUIRE(r.winner.has_value());
    CHECK(*r.winner == 6);
  }
}

TEST_CASE("a stubborn deviator can stall the round forever") {
  const Graph line = make_path(11);
  TruthfulStrategy truthful;
  NeverEnd stubborn;
  const std::array<Strategy*, 3> strategies{&truthful, &truthful, &stubborn};
  Rng rng(5);
  const RoundResult r = run_tmr_round(line, {2, 5, 9}, strategies, TmrInit{0, 1}, rng, 500);
  CHECK_FALSE(r.winner.has_value());
  CHECK(r.steps == 500);
}

TEST_CASE("terminating deviations keep the median between deviator and winner") {
  Rng rng(6);
  UniformRandomProposer random_dev;
  SelfProposer self_dev;
  NeverEnd never_dev;
  TruthfulStrategy truthful;
  Strategy* deviators[] = {&random_dev, &self_dev, &never_dev};
  for (const Graph& g : tmr_corpus()) {
    const int n = g.node_count();
    int terminated = 0;
    for (int rep = 0; rep < 300; ++rep) {
      const std::array<int, 3> group{rng.below_int(n), rng.below_int(n), rng.below_int(n)};
      const int dev = rng.below_int(3);
      std::array<Strategy*, 3> strategies{&truthful, &truthful, &truthful};
      strategies[dev] = deviators[rng.below_int(3)];
      const RoundResult r = run_tmr_round(g, group, strategies, std::nullopt, rng, 400);
      if (!r.winner) continue;
      ++terminated;
      const int m = unique_median(g, group[0], group[1], group[2]);
      CHECK(interval(g, group[dev], *r.winner).contains(m));
    }
    CHECK(terminated > 50);
  }
}

TEST_CASE("all-truthful strategic runs match the median dynamic exactly") {
  const Graph line = make_path(11);
  Profile p(11);
  p.add(1);
  p.add(5);
  p.add(9);
  StrategyAssignment truthful_everyone;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto strategic = run_strategic_ldsg(line, p, 1, truthful_everyone, seed);
    const auto direct = run(line, p, 1, SelectionKind::TriadUniform,
                            DecisionKind::GeneralizedMedianOfGroup, seed);
    REQUIRE(strategic.winner.has_value());
    REQUIRE(direct.winner.has_value());
    CHECK(*strategic.winner == *direct.winner);
    CHECK(strategic.rounds == direct.rounds);
    CHECK(strategic.terminal.owners == direct.terminal.owners);
  }
}

TEST_CASE("single participant wins the strategic game immediately") {
  const Graph line = make_path(5);
  Profile p(5);
  p.add(3);
  const auto tr = run_strategic_ldsg(line, p, 1, StrategyAssignment{}, 9);
  REQUIRE(tr.winner.has_value());
  CHECK(*tr.winner == 3);
  CHECK(tr.rounds == 0);
}

TEST_CASE("random deviation does not help on average") {
  const Graph line = make_path(9);
  Profile p(9);
  for (int v = 0; v < 9; ++v) p.add(v);
  const int deviator_node = 0;
  UniformRandomProposer dev;
  StrategyAssignment deviating;
  deviating.by_node[deviator_node] = &dev;

  std::vector<double> truthful_utils, deviating_utils;
  const int episodes = 2000;
  for (int i = 0; i < episodes; ++i) {
    const std::uint64_t seed = Rng::derive(808, i);
    const auto t = run_strategic_ldsg(line, p, 1, StrategyAssignment{}, seed);
    const auto d = run_strategic_ldsg(line, p, 1, deviating, seed);
    REQUIRE(t.winner.has_value());
    if (!d.winner) continue;  // diverged episodes only hurt the deviator
    truthful_utils.push_back(-line.distance(deviator_node, *t.winner));
    deviating_utils.push_back(-line.distance(deviator_node, *d.winner));
  }
  const double mt = mean_of(truthful_utils), md = mean_of(deviating_utils);
  const double se = std::sqrt(
      sample_sd(truthful_utils) * sample_sd(truthful_utils) / truthful_utils.size() +
      sample_sd(deviating_utils) * sample_sd(deviating_utils) / deviating_utils.size());
  CHECK(md <= mt + 2.0 * se);
}
