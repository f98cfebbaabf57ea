#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tcl/errors.hpp"

namespace tcl {

/// Connected, simple, undirected opinion space with cached all-pairs
/// hop distances (one BFS per node at construction). Immutable afterwards,
/// so concurrent readers need no synchronization.
class Graph {
 public:
  static Graph from_edges(int node_count, const std::vector<std::pair<int, int>>& edge_list) {
    if (node_count <= 0) throw OutOfRange("node_count must be positive");
    Graph g;
    g.n_ = node_count;
    g.adj_.assign(node_count, {});
    std::vector<std::pair<int, int>> canon;
    canon.reserve(edge_list.size());
    for (auto [u, v] : edge_list) {
      if (u < 0 || u >= node_count || v < 0 || v >= node_count)
        throw OutOfRange("edge endpoint out of range");
      if (u == v) throw SelfLoop("self-loop at node " + std::to_string(u));
      canon.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(canon.begin(), canon.end());
    for (std::size_t i = 1; i < canon.size(); ++i)
      if (canon[i] == canon[i - 1])
        throw DuplicateEdge("duplicate edge (" + std::to_string(canon[i].first) + "," +
                            std::to_string(canon[i].second) + ")");
    g.edges_ = std::move(canon);
    for (auto [u, v] : g.edges_) {
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
    g.compute_distances();
    return g;
  }

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }

  bool has_edge(int u, int v) const {
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  int distance(int x, int y) const {
    return dist_[static_cast<std::size_t>(x) * n_ + y];
  }

  /// Contiguous row d(x, .) for tight inner loops.
  const std::int32_t* dist_row(int x) const {
    return dist_.data() + static_cast<std::size_t>(x) * n_;
  }

  bool valid_node(int v) const { return v >= 0 && v < n_; }

  void require_node(int v) const {
    if (!valid_node(v)) throw OutOfRange("node id out of range");
  }

 private:
  Graph() = default;

  void compute_distances() {
    dist_.assign(static_cast<std::size_t>(n_) * n_, -1);
    std::vector<int> queue(n_);
    for (int s = 0; s < n_; ++s) {
      std::int32_t* row = dist_.data() + static_cast<std::size_t>(s) * n_;
      int head = 0, tail = 0;
      row[s] = 0;
      queue[tail++] = s;
      while (head < tail) {
        int u = queue[head++];
        for (int v : adj_[u]) {
          if (row[v] < 0) {
            row[v] = row[u] + 1;
            queue[tail++] = v;
          }
        }
      }
      if (tail != n_) throw DisconnectedGraph("graph is not connected");
    }
  }

  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::int32_t> dist_;
};

}  // namespace tcl
