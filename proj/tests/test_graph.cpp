#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <set>

#include "tcl/cuts.hpp"
#include "tcl/generate.hpp"
#include "tcl/graph.hpp"
#include "tcl/intervals.hpp"
#include "tcl/median.hpp"
#include "tcl/profile.hpp"

#include "test_helpers.hpp"

using namespace tcl;
using tcl::testing::interval_by_path_enumeration;
using tcl::testing::to_set;

TEST_CASE("graph construction and distances") {
  const Graph path = Graph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(path.distance(0, 2) == 2);
  CHECK(path.distance(2, 0) == 2);
  CHECK(path.distance(1, 1) == 0);
  CHECK(path.edge_count() == 2);

  const Graph triangle = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) CHECK(triangle.distance(x, y) == (x == y ? 0 : 1));

  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}}), DisconnectedGraph);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 0}, {0, 1}, {1, 2}}), SelfLoop);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}, {1, 0}, {1, 2}}), DuplicateEdge);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 5}}), OutOfRange);
}

TEST_CASE("distance table is a graph metric") {
  for (const Graph& g : {make_grid(3, 4), make_tree(2, 3), make_cycle(7), make_hypercube(3)}) {
    const int n = g.node_count();
    for (int x = 0; x < n; ++x) {
      CHECK(g.distance(x, x) == 0);
      for (int y = 0; y < n; ++y) {
        CHECK(g.distance(x, y) == g.distance(y, x));
        CHECK((g.distance(x, y) == 1) == g.has_edge(x, y));
        for (int z = 0; z < n; ++z)
          CHECK(g.distance(x, z) <= g.distance(x, y) + g.distance(y, z));
      }
    }
  }
}

TEST_CASE("interval") {
  const Graph path = make_path(4);
  CHECK(to_set(interval(path, 0, 3)) == std::set<int>{0, 1, 2, 3});
  CHECK(to_set(interval(path, 2, 2)) == std::set<int>{2});

  const Graph c4 = make_cycle(4);
  const auto expected = interval_by_path_enumeration(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 0, 2);
  CHECK(to_set(interval(c4, 0, 2)) == expected);
  CHECK(expected == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("interval agrees with path enumeration on assorted graphs") {
  struct Case {
    int n;
    std::vector<std::pair<int, int>> edges;
  };
  const std::vector<Case> cases = {
      {6, tcl::testing::path_edges(6)},
      {4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}},
      {5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}},
      {6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}}},
      {8, make_hypercube(3).edges()},
  };
  for (const auto& c : cases) {
    const Graph g = Graph::from_edges(c.n, c.edges);
    for (int x = 0; x < c.n; ++x)
      for (int y = 0; y < c.n; ++y)
        CHECK(to_set(interval(g, x, y)) == interval_by_path_enumeration(c.n, c.edges, x, y));
  }
}

TEST_CASE("convexity") {
  const Graph c4 = make_cycle(4);
  CHECK(is_convex(c4, NodeSet::of(4, {2})));
  CHECK_FALSE(is_convex(c4, NodeSet::of(4, {0, 2})));

  const Graph path = make_path(6);
  CHECK(is_convex(path, NodeSet::of(6, {1, 2, 3})));
  CHECK_FALSE(is_convex(path, NodeSet::of(6, {1, 3})));

  CHECK_THROWS_AS(is_convex(path, NodeSet(6)), EmptySet);
}

TEST_CASE("convex hull") {
  const Graph path = make_path(6);
  const NodeSet already = NodeSet::of(6, {2, 3, 4});
  CHECK(convex_hull(path, already) == already);

  const Graph c4 = make_cycle(4);
  CHECK(to_set(convex_hull(c4, NodeSet::of(4, {0, 2}))) == std::set<int>{0, 1, 2, 3});

  const Graph grid = make_grid(3, 3);
  CHECK(convex_hull(grid, NodeSet::of(9, {0, 8})).count() == 9);

  CHECK_THROWS_AS(convex_hull(path, NodeSet(6)), EmptySet);
}

TEST_CASE("gate") {
  const Graph path = make_path(6);
  const NodeSet tail = NodeSet::of(6, {3, 4, 5});
  CHECK(gate(path, tail, 0) == 3);
  CHECK(gate(path, tail, 4) == 4);  // self-gate

  // 3x3 grid, right column from the top-left corner
  const Graph grid = make_grid(3, 3);
  const NodeSet right = NodeSet::of(9, {2, 5, 8});
  const int gx = gate(grid, right, 0);
  CHECK(gx == 2);
  right.for_each([&](int y) {
    CHECK(grid.distance(0, y) == grid.distance(0, gx) + grid.distance(gx, y));
  });

  CHECK_THROWS_AS(gate(path, NodeSet::of(6, {1, 3}), 0), NotConvex);

  // a 5-cycle is not gated: {0,1} is convex but node 3 sees no gate
  const Graph c5 = make_cycle(5);
  CHECK_THROWS_AS(gate(c5, NodeSet::of(5, {0, 1}), 3), NoGate);
}

TEST_CASE("win sets") {
  const Graph path = make_path(4);
  const EdgeCut cut = win_sets(path, 1, 2);
  CHECK(to_set(cut.side_u) == std::set<int>{0, 1});
  CHECK(to_set(cut.side_v) == std::set<int>{2, 3});
  CHECK(cut.separates(0, 3));
  CHECK_FALSE(cut.separates(0, 1));

  const Graph triangle = make_complete(3);
  const EdgeCut tcut = win_sets(triangle, 0, 1);
  CHECK(to_set(tcut.side_u) == std::set<int>{0});
  CHECK(to_set(tcut.side_v) == std::set<int>{1});
  CHECK_FALSE(tcut.side_u.contains(2));
  CHECK_FALSE(tcut.side_v.contains(2));

  const Graph square = make_grid(2, 2);
  for (auto [u, v] : square.edges()) {
    const EdgeCut c = win_sets(square, u, v);
    CHECK(c.side_u.count() == 2);
    CHECK(c.side_v.count() == 2);
  }

  CHECK_THROWS_AS(win_sets(path, 0, 2), NotAnEdge);
}

TEST_CASE("theta decomposition") {
  CHECK(theta_decomposition(make_path(7)).cuts.size() == 6);
  CHECK(theta_decomposition(make_grid(4, 4)).cuts.size() == 6);  // 2(k-1)
  CHECK(theta_decomposition(make_hypercube(3)).cuts.size() == 3);
  CHECK_THROWS_AS(theta_decomposition(make_complete(3)), NotMedianGraph);

  // distance decomposes over separating cuts
  for (const Graph& g : {make_grid(3, 4), make_tree(2, 3), make_hypercube(4)}) {
    const auto theta = theta_decomposition(g);
    for (int x = 0; x < g.node_count(); ++x)
      for (int y = 0; y < g.node_count(); ++y)
        CHECK(theta.separating_count(x, y) == g.distance(x, y));
  }
}

TEST_CASE("median of three") {
  const Graph line = make_path(11);
  CHECK(to_set(median_of_three(line, 2, 5, 9)) == std::set<int>{5});
  CHECK(to_set(median_of_three(line, 4, 4, 9)) == std::set<int>{4});
  CHECK(unique_median(line, 2, 5, 9) == 5);

  // six-cycle with alternating nodes: brute force by hand over all six
  const Graph c6 = make_cycle(6);
  std::set<int> best;
  long long best_cost = 1 << 30;
  for (int u = 0; u < 6; ++u) {
    const long long c = c6.distance(u, 0) + c6.distance(u, 2) + c6.distance(u, 4);
    if (c < best_cost) {
      best_cost = c;
      best.clear();
    }
    if (c == best_cost) best.insert(u);
  }
  CHECK(to_set(median_of_three(c6, 0, 2, 4)) == best);
  CHECK(best == std::set<int>{0, 2, 4});
  CHECK(canonical_median(c6, 0, 2, 4) == 0);

  // grid corners: minimizer of the distance sum over all nine nodes
  const Graph grid = make_grid(3, 3);
  CHECK(unique_median(grid, 0, 2, 6) == 0);
  CHECK(to_set(median_of_three(grid, 0, 2, 6)) == std::set<int>{0});
}

TEST_CASE("median graph recognition") {
  CHECK(is_median_graph(make_path(9)));
  CHECK(is_median_graph(make_grid(4, 5)));
  CHECK(is_median_graph(make_tree(3, 3)));
  CHECK(is_median_graph(make_star(7)));
  CHECK(is_median_graph(make_hypercube(4)));
  CHECK(is_median_graph(make_cycle(4)));
  CHECK_FALSE(is_median_graph(make_complete(3)));
  CHECK_FALSE(is_median_graph(make_cycle(5)));
  CHECK_FALSE(is_median_graph(make_cycle(6)));
  CHECK_FALSE(is_median_graph(make_complete(4)));
  // two squares sharing an edge stay median; adding a diagonal breaks it
  CHECK(is_median_graph(make_grid(2, 3)));
  CHECK_FALSE(is_median_graph(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}})));
}

TEST_CASE("large grid is recognized as median") {
  CHECK(is_median_graph(make_grid(21, 21)));
}

TEST_CASE("condorcet winner") {
  const Graph line = make_path(11);
  CHECK(condorcet_winner(line, std::vector<int>{2, 5, 9}) == 5);
  CHECK(condorcet_winner(line, std::vector<int>{4, 4, 9}) == 4);

  const Graph triangle = make_complete(3);
  CHECK_FALSE(condorcet_winner(triangle, std::vector<int>{0, 1, 2}).has_value());

  // absolute majority at x
  const Graph grid = make_grid(3, 3);
  CHECK(condorcet_winner(grid, std::vector<int>{7, 7, 1}) == 7);

  // profile form
  Profile p(11);
  p.add(2);
  p.add(5);
  p.add(9);
  CHECK(condorcet_winner(line, p) == 5);
}

TEST_CASE("generalized median and total distance") {
  // heavy endpoint configuration: k+1 participants at 0, one at each 1..k
  const int k = 7;
  const Graph line = make_path(k + 1);
  Profile p(k + 1);
  p.add(0, k + 1);
  for (int i = 1; i <= k; ++i) p.add(i, 1);

  // oracle: direct arithmetic over |i - x|
  long long best_cost = 1 << 30;
  int best_node = -1;
  for (int x = 0; x <= k; ++x) {
    long long c = static_cast<long long>(k + 1) * x;
    for (int i = 1; i <= k; ++i) c += std::abs(i - x);
    if (c < best_cost) {
      best_cost = c;
      best_node = x;
    }
  }
  CHECK(best_node == 0);
  CHECK(best_cost == k * (k + 1) / 2);

  const auto [minimizers, cost] = generalized_median(line, p);
  CHECK(to_set(minimizers) == std::set<int>{0});
  CHECK(cost == k * (k + 1) / 2);
  CHECK(total_distance(line, p, 0) == cost);

  // all mass on one node
  Profile solo(5);
  solo.add(3, 4);
  const Graph path5 = make_path(5);
  const auto [ms, c0] = generalized_median(path5, solo);
  CHECK(to_set(ms) == std::set<int>{3});
  CHECK(c0 == 0);

  // uniform path 0..2m
  const int m = 6;
  const Graph path2m = make_path(2 * m + 1);
  Profile uni(2 * m + 1);
  for (int v = 0; v <= 2 * m; ++v) uni.add(v);
  const auto [mu, cu] = generalized_median(path2m, uni);
  CHECK(to_set(mu) == std::set<int>{m});
  CHECK(cu == static_cast<long long>(m) * (m + 1));

  // total_distance basics
  Profile u4(4);
  for (int v = 0; v < 4; ++v) u4.add(v);
  CHECK(total_distance(make_path(4), u4, 0) == 6);
}
