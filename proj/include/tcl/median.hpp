#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tcl/graph.hpp"
#include "tcl/node_set.hpp"
#include "tcl/profile.hpp"

namespace tcl {

/// Multiplicity-weighted sum of distances from x to the profile.
inline long long total_distance(const Graph& g, const Profile& p, int x) {
  g.require_node(x);
  const std::int32_t* rx = g.dist_row(x);
  long long sum = 0;
  for (int v = 0; v < g.node_count(); ++v) {
    long long c = p.count_at(v);
    if (c > 0) sum += c * rx[v];
  }
  return sum;
}

/// All minimizers of the sum of distances to the profile, with the minimum.
inline std::pair<NodeSet, long long> generalized_median(const Graph& g, const Profile& p) {
  if (p.total() < 1) throw EmptySet("profile has no participants");
  const int n = g.node_count();
  const auto support = p.support();
  long long best = -1;
  std::vector<long long> cost(n, 0);
  for (int v : support) {
    const std::int32_t* rv = g.dist_row(v);
    const long long c = p.count_at(v);
    for (int x = 0; x < n; ++x) cost[x] += c * rv[x];
  }
  for (int x = 0; x < n; ++x)
    if (best < 0 || cost[x] < best) best = cost[x];
  NodeSet minimizers(n);
  for (int x = 0; x < n; ++x)
    if (cost[x] == best) minimizers.insert(x);
  return {minimizers, best};
}

/// All minimizers of d(.,x) + d(.,y) + d(.,z); on a median graph this is a
/// single node.
inline NodeSet median_of_three(const Graph& g, int x, int y, int z) {
  g.require_node(x);
  g.require_node(y);
  g.require_node(z);
  const int n = g.node_count();
  const std::int32_t* rx = g.dist_row(x);
  const std::int32_t* ry = g.dist_row(y);
  const std::int32_t* rz = g.dist_row(z);
  long long best = -1;
  for (int u = 0; u < n; ++u) {
    long long s = static_cast<long long>(rx[u]) + ry[u] + rz[u];
    if (best < 0 || s < best) best = s;
  }
  NodeSet out(n);
  for (int u = 0; u < n; ++u)
    if (rx[u] + ry[u] + rz[u] == best) out.insert(u);
  return out;
}

/// Lowest-id minimizer; the deterministic tie-break used where a single node
/// is required on graphs that are not median.
inline int canonical_median(const Graph& g, int x, int y, int z) {
  return median_of_three(g, x, y, z).first();
}

/// The node lying on shortest paths between all three pairs. Unique on a
/// median graph; found by an early-exit scan, so the common case costs far
/// less than the full minimization.
inline int unique_median(const Graph& g, int x, int y, int z) {
  const int n = g.node_count();
  const std::int32_t* rx = g.dist_row(x);
  const std::int32_t* ry = g.dist_row(y);
  const std::int32_t* rz = g.dist_row(z);
  const std::int32_t dxy = rx[y], dxz = rx[z], dyz = ry[z];
  for (int u = 0; u < n; ++u) {
    if (rx[u] + ry[u] == dxy && rx[u] + rz[u] == dxz && ry[u] + rz[u] == dyz) return u;
  }
  throw NotMedianGraph("no node lies between all three pairs");
}

/// Definitional recognition: every node triple has exactly one node lying
/// simultaneously on shortest paths between each pair. Cubic with bitset
/// pair intervals cached when they fit; streaming fallback beyond that.
inline bool is_median_graph(const Graph& g) {
  const int n = g.node_count();
  if (n <= 2) return true;
  if (n <= 600) {
    const std::size_t words = static_cast<std::size_t>((n + 63) / 64);
    std::vector<std::uint64_t> iv(static_cast<std::size_t>(n) * n * words, 0);
    auto pair_words = [&](int x, int y) {
      return iv.data() + (static_cast<std::size_t>(x) * n + y) * words;
    };
    for (int x = 0; x < n; ++x) {
      const std::int32_t* rx = g.dist_row(x);
      for (int y = x + 1; y < n; ++y) {
        const std::int32_t* ry = g.dist_row(y);
        const std::int32_t dxy = rx[y];
        std::uint64_t* w = pair_words(x, y);
        for (int u = 0; u < n; ++u)
          if (rx[u] + ry[u] == dxy) w[static_cast<std::size_t>(u) >> 6] |= 1ULL << (u & 63);
      }
    }
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        const std::uint64_t* wxy = pair_words(x, y);
        for (int z = y + 1; z < n; ++z) {
          const std::uint64_t* wxz = pair_words(x, z);
          const std::uint64_t* wyz = pair_words(y, z);
          int c = 0;
          for (std::size_t i = 0; i < words; ++i) {
            c += __builtin_popcountll(wxy[i] & wxz[i] & wyz[i]);
            if (c > 1) break;
          }
          if (c != 1) return false;
        }
      }
    return true;
  }
  // large graphs: stream interval members of (y,z) and test against x rows
  std::vector<int> members;
  for (int y = 0; y < n; ++y) {
    const std::int32_t* ry = g.dist_row(y);
    for (int z = y + 1; z < n; ++z) {
      const std::int32_t* rz = g.dist_row(z);
      const std::int32_t dyz = ry[z];
      members.clear();
      for (int u = 0; u < n; ++u)
        if (ry[u] + rz[u] == dyz) members.push_back(u);
      for (int x = 0; x < n; ++x) {
        const std::int32_t* rx = g.dist_row(x);
        const std::int32_t dxy = rx[y], dxz = rx[z];
        int c = 0;
        for (int u : members) {
          if (rx[u] + ry[u] == dxy && rx[u] + rz[u] == dxz && ++c > 1) break;
        }
        if (c != 1) return false;
      }
    }
  }
  return true;
}

namespace detail {

// strict pairwise majority of the multiset against every alternative
template <class CountAt>
std::optional<int> condorcet_scan(const Graph& g, CountAt count_at) {
  const int n = g.node_count();
  for (int x = 0; x < n; ++x) {
    const std::int32_t* rx = g.dist_row(x);
    bool winner = true;
    for (int y = 0; y < n && winner; ++y) {
      if (y == x) continue;
      const std::int32_t* ry = g.dist_row(y);
      long long for_x = 0, for_y = 0;
      count_at([&](int u, long long c) {
        if (rx[u] < ry[u])
          for_x += c;
        else if (ry[u] < rx[u])
          for_y += c;
      });
      if (for_x <= for_y) winner = false;
    }
    if (winner) return x;
  }
  return std::nullopt;
}

}  // namespace detail

/// Condorcet winner of a multiset of opinions, if one exists. Equidistant
/// voters abstain on that comparison.
inline std::optional<int> condorcet_winner(const Graph& g, const std::vector<int>& members) {
  if (members.empty()) throw EmptySet("condorcet_winner of empty multiset");
  for (int m : members) g.require_node(m);
  return detail::condorcet_scan(g, [&](auto&& visit) {
    for (int u : members) visit(u, 1);
  });
}

inline std::optional<int> condorcet_winner(const Graph& g, const Profile& p) {
  if (p.total() < 1) throw EmptySet("condorcet_winner of empty profile");
  const auto support = p.support();
  return detail::condorcet_scan(g, [&](auto&& visit) {
    for (int u : support) visit(u, p.count_at(u));
  });
}

}  // namespace tcl
