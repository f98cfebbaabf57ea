#pragma once

#include <vector>

#include "tcl/graph.hpp"
#include "tcl/node_set.hpp"

namespace tcl {

/// All nodes on some shortest path between x and y:
/// { w : d(x,y) = d(x,w) + d(w,y) }. Always contains x and y.
inline NodeSet interval(const Graph& g, int x, int y) {
  g.require_node(x);
  g.require_node(y);
  const int n = g.node_count();
  const std::int32_t* rx = g.dist_row(x);
  const std::int32_t* ry = g.dist_row(y);
  const std::int32_t dxy = rx[y];
  NodeSet s(n);
  for (int w = 0; w < n; ++w)
    if (rx[w] + ry[w] == dxy) s.insert(w);
  return s;
}

/// Members of interval(x, y) as a list, skipping the NodeSet.
inline std::vector<int> interval_nodes(const Graph& g, int x, int y) {
  const int n = g.node_count();
  const std::int32_t* rx = g.dist_row(x);
  const std::int32_t* ry = g.dist_row(y);
  const std::int32_t dxy = rx[y];
  std::vector<int> out;
  for (int w = 0; w < n; ++w)
    if (rx[w] + ry[w] == dxy) out.push_back(w);
  return out;
}

inline bool is_convex(const Graph& g, const NodeSet& s) {
  if (s.empty()) throw EmptySet("is_convex of empty set");
  const auto nodes = s.to_vector();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (!interval(g, nodes[i], nodes[j]).is_subset_of(s)) return false;
  return true;
}

/// Least fixpoint of pairwise-interval closure.
inline NodeSet convex_hull(const Graph& g, const NodeSet& s) {
  if (s.empty()) throw EmptySet("convex_hull of empty set");
  NodeSet hull = s;
  for (;;) {
    NodeSet next = hull;
    const auto nodes = hull.to_vector();
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        next |= interval(g, nodes[i], nodes[j]);
    if (next == hull) return hull;
    hull = next;
  }
}

/// The unique node gx in convex s with d(x,y) = d(x,gx) + d(gx,y) for every
/// y in s. Exists for every convex set of a median graph; a failed
/// verification signals non-median input.
inline int gate(const Graph& g, const NodeSet& s, int x) {
  g.require_node(x);
  if (s.empty()) throw EmptySet("gate into empty set");
  if (!is_convex(g, s)) throw NotConvex("gate requires a convex set");
  if (s.contains(x)) return x;
  const std::int32_t* rx = g.dist_row(x);
  int best = -1;
  s.for_each([&](int y) {
    if (best < 0 || rx[y] < rx[best]) best = y;
  });
  const std::int32_t* rb = g.dist_row(best);
  bool ok = true;
  s.for_each([&](int y) {
    if (rx[y] != rx[best] + rb[y]) ok = false;
  });
  if (!ok) throw NoGate("set is not gated from this node");
  return best;
}

}  // namespace tcl
