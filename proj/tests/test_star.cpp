#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "tcl/dynamics.hpp"
#include "tcl/experiment.hpp"
#include "tcl/generate.hpp"
#include "tcl/star.hpp"

using namespace tcl;

namespace {

// Exact one-step distribution over next full states, enumerated from
// scratch: ordered token-node triples weighted by counts, vote ties split
// over all coin patterns. Leaves are sorted so states compare up to leaf
// relabeling; with concentrate=true they are re-packed as the concentrated
// chain would.
std::map<std::vector<long long>, double> next_state_distribution(const StarState& s,
                                                                 bool concentrate) {
  const long long n = s.total();
  const int slots = static_cast<int>(s.leaves.size()) + 1;
  auto cnt = [&](int node) { return node == 0 ? s.root : s.leaves[node - 1]; };
  auto dist = [](int a, int b) { return a == b ? 0 : (a == 0 || b == 0 ? 1 : 2); };

  std::map<std::vector<long long>, double> out;
  for (int a = 0; a < slots; ++a)
    for (int b = 0; b < slots; ++b)
      for (int c = 0; c < slots; ++c) {
        const double p_draw = static_cast<double>(cnt(a)) * cnt(b) * cnt(c) /
                              (static_cast<double>(n) * n * n);
        if (p_draw == 0) continue;
        const int node_of[3] = {a, b, c};
        for (int coins = 0; coins < 8; ++coins) {
          int votes[3] = {0, 0, 0};
          for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            const int dj = dist(node_of[i], node_of[j]);
            const int dk = dist(node_of[i], node_of[k]);
            int choice;
            if (dj < dk)
              choice = j;
            else if (dk < dj)
              choice = k;
            else
              choice = (coins >> i) & 1 ? j : k;
            ++votes[choice];
          }
          int winner = -1;
          for (int i = 0; i < 3; ++i)
            if (votes[i] >= 2) winner = i;
          std::vector<long long> next(slots);
          next[0] = s.root;
          for (int l = 1; l < slots; ++l) next[l] = s.leaves[l - 1];
          if (winner >= 0) {
            for (int i = 0; i < 3; ++i) --next[node_of[i]];
            next[node_of[winner]] += 3;
          }
          std::vector<long long> leaves(next.begin() + 1, next.end());
          if (concentrate) leaves = concentrate_leaves(leaves);
          std::sort(leaves.begin(), leaves.end(), std::greater<>());
          std::vector<long long> key;
          key.push_back(next[0]);
          key.insert(key.end(), leaves.begin(), leaves.end());
          out[key] += p_draw / 8.0;
        }
      }
  return out;
}

}  // namespace

TEST_CASE("leaf concentration") {
  CHECK(concentrate_leaves({5, 4, 3, 2}) == std::vector<long long>{5, 5, 4, 0});
  CHECK(concentrate_leaves({3, 3, 3}) == std::vector<long long>{3, 3, 3});
  CHECK(concentrate_leaves({0, 0}) == std::vector<long long>{0, 0});
  CHECK(concentrate_leaves({7}) == std::vector<long long>{7});
  CHECK(concentrate_leaves({2, 5, 1}) == std::vector<long long>{5, 3, 0});
}

TEST_CASE("absorbed star states are fixpoints") {
  StarState all_root{12, {0, 0, 0}};
  CHECK(all_root.absorbed());
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    all_root = crtd_step(all_root, rng);
    CHECK(all_root.root == 12);
  }
  const StarState one_leaf{0, {9, 0}};
  CHECK(one_leaf.absorbed());
}

TEST_CASE("truncation bookkeeping") {
  const StarState s{4, {3, 1, 5}};
  CHECK(s.total() == 13);
  CHECK(s.max_leaf() == 5);
  CHECK(s.truncation() == std::pair<long long, long long>{4, 5});
  CHECK_FALSE(s.absorbed());
}

TEST_CASE("two-leaf concentrated and plain step distributions coincide") {
  for (const StarState s : {StarState{4, {3, 3}}, StarState{2, {5, 3}}, StarState{1, {8, 1}}}) {
    const auto plain = next_state_distribution(s, false);
    const auto packed = next_state_distribution(s, true);
    REQUIRE(plain.size() == packed.size());
    for (const auto& [state, prob] : plain) {
      REQUIRE(packed.count(state) == 1);
      CHECK(packed.at(state) == Catch::Approx(prob).margin(1e-12));
    }
  }
}

TEST_CASE("concentrated steps sample the enumerated distribution") {
  const StarState start{5, {4, 3, 2, 0}};
  const auto expected = next_state_distribution(start, true);
  std::map<std::vector<long long>, long long> observed;
  Rng rng(77);
  const long long trials = 100'000;
  for (long long i = 0; i < trials; ++i) {
    const StarState next = crtd_step(start, rng);
    std::vector<long long> key{next.root};
    std::vector<long long> leaves = next.leaves;
    std::sort(leaves.begin(), leaves.end(), std::greater<>());
    key.insert(key.end(), leaves.begin(), leaves.end());
    ++observed[key];
  }
  double total_prob = 0;
  for (const auto& [state, prob] : expected) {
    total_prob += prob;
    const double obs = static_cast<double>(observed[state]);
    const double exp = prob * static_cast<double>(trials);
    const double sigma = std::sqrt(prob * (1 - prob) * static_cast<double>(trials));
    CHECK(std::abs(obs - exp) <= 5.0 * sigma + 1.0);
  }
  CHECK(total_prob == Catch::Approx(1.0).margin(1e-9));
  for (const auto& [state, count] : observed) CHECK(expected.count(state) == 1);
}

TEST_CASE("token counts are conserved along concentrated runs") {
  StarState s{10, {7, 5, 3, 3, 2}};
  Rng rng(3);
  for (int t = 0; t < 500; ++t) {
    s = crtd_step(s, rng);
    CHECK(s.total() == 30);
    // leaves stay packed in non-increasing order
    for (std::size_t i = 1; i < s.leaves.size(); ++i) CHECK(s.leaves[i - 1] >= s.leaves[i]);
  }
}

TEST_CASE("plain restricted star runs dominate concentrated ones") {
  // same truncation on both sides: 6 leaves, 30 tokens, 6 at the root
  const int leaves = 6, n = 30, j = 6;
  const auto star_spec =
      GeneratorSpec::star(leaves, ProfileSpec::star_root(leaves, j, n));
  ExperimentConfig cfg;
  cfg.spec = star_spec;
  cfg.dynamic = Dynamic::Restricted;
  cfg.trials = 4000;
  const TrialReport rtd = run_experiment(cfg, 60);
  const double p_rtd = rtd.win_fraction(0);

  Rng rng(61);
  long long crtd_wins = 0;
  const long long crtd_trials = 4000;
  for (long long i = 0; i < crtd_trials; ++i) {
    StarState s{j, std::vector<long long>(leaves, (n - j) / leaves)};
    if (crtd_root_wins(s, rng)) ++crtd_wins;
  }
  const double p_crtd = static_cast<double>(crtd_wins) / static_cast<double>(crtd_trials);
  const double se = std::sqrt(p_rtd * (1 - p_rtd) / cfg.trials +
                              p_crtd * (1 - p_crtd) / static_cast<double>(crtd_trials));
  CHECK(p_rtd >= p_crtd - 2.0 * se);
}
