#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tcl/graph.hpp"
#include "tcl/node_set.hpp"

namespace tcl {

/// Win sets of an edge (u,v): side_u holds the nodes strictly closer to u,
/// side_v those strictly closer to v. Equidistant nodes (possible only off
/// median graphs) belong to neither side.
struct EdgeCut {
  int u = -1;
  int v = -1;
  NodeSet side_u;
  NodeSet side_v;

  bool separates(int x, int y) const {
    return (side_u.contains(x) && side_v.contains(y)) ||
           (side_v.contains(x) && side_u.contains(y));
  }
};

inline EdgeCut win_sets(const Graph& g, int u, int v) {
  g.require_node(u);
  g.require_node(v);
  if (!g.has_edge(u, v))
    throw NotAnEdge("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
  const int n = g.node_count();
  EdgeCut cut{u, v, NodeSet(n), NodeSet(n)};
  const std::int32_t* ru = g.dist_row(u);
  const std::int32_t* rv = g.dist_row(v);
  for (int w = 0; w < n; ++w) {
    if (ru[w] < rv[w])
      cut.side_u.insert(w);
    else if (rv[w] < ru[w])
      cut.side_v.insert(w);
  }
  return cut;
}

/// One representative cut per distinct win-set partition of a median graph.
/// Distances decompose over it: d(x,y) equals the number of separating cuts.
struct ThetaDecomposition {
  std::vector<EdgeCut> cuts;

  int separating_count(int x, int y) const {
    int c = 0;
    for (const auto& cut : cuts)
      if (cut.separates(x, y)) ++c;
    return c;
  }
};

inline ThetaDecomposition theta_decomposition(const Graph& g) {
  const int n = g.node_count();
  ThetaDecomposition theta;
  std::set<std::vector<std::uint64_t>> seen;
  for (auto [u, v] : g.edges()) {
    EdgeCut cut = win_sets(g, u, v);
    if (cut.side_u.count() + cut.side_v.count() != n)
      throw NotMedianGraph("edge (" + std::to_string(u) + "," + std::to_string(v) +
                           ") does not partition the nodes");
    // canonical key: the side containing node 0
    const NodeSet& zero_side = cut.side_u.contains(0) ? cut.side_u : cut.side_v;
    if (seen.insert(zero_side.words()).second) theta.cuts.push_back(std::move(cut));
  }
  return theta;
}

}  // namespace tcl
