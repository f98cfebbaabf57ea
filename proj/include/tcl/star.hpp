#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "tcl/dynamics.hpp"
#include "tcl/errors.hpp"
#include "tcl/rng.hpp"

namespace tcl {

/// Token counts on a star: the root plus one slot per leaf. Node ids follow
/// the star generator (root 0, leaf i at node i+1).
struct StarState {
  long long root = 0;
  std::vector<long long> leaves;

  long long total() const {
    return root + std::accumulate(leaves.begin(), leaves.end(), 0LL);
  }
  long long max_leaf() const {
    return leaves.empty() ? 0 : *std::max_element(leaves.begin(), leaves.end());
  }
  /// (root count, max leaf count) — the truncated representation.
  std::pair<long long, long long> truncation() const { return {root, max_leaf()}; }

  bool absorbed() const {
    const long long n = total();
    return root == n || max_leaf() == n;
  }
};

namespace detail {

inline int star_distance(int a, int b) {
  if (a == b) return 0;
  if (a == 0 || b == 0) return 1;
  return 2;
}

// sample a token uniformly; returns the star node holding it
inline int sample_star_token(const StarState& s, Rng& rng) {
  long long r = static_cast<long long>(rng.below(static_cast<std::uint64_t>(s.total())));
  if (r < s.root) return 0;
  r -= s.root;
  for (std::size_t i = 0; i < s.leaves.size(); ++i) {
    if (r < s.leaves[i]) return static_cast<int>(i) + 1;
    r -= s.leaves[i];
  }
  return static_cast<int>(s.leaves.size());  // unreachable
}

}  // namespace detail

/// One restricted-vote transition on the star, counted form. Uses the same
/// vote core as decide_restricted_vote.
inline StarState rtd_star_step(const StarState& s, Rng& rng) {
  if (s.total() < 1) throw EmptySet("star has no tokens");
  StarState next = s;
  int member_node[3];
  for (int i = 0; i < 3; ++i) member_node[i] = detail::sample_star_token(s, rng);
  auto win = detail::restricted_vote_winner(
      [&](int i, int j) { return detail::star_distance(member_node[i], member_node[j]); }, rng);
  if (win) {
    const int w = member_node[*win];
    auto bucket = [&next](int node) -> long long& {
      return node == 0 ? next.root : next.leaves[node - 1];
    };
    for (int i = 0; i < 3; ++i) --bucket(member_node[i]);
    bucket(w) += 3;
  }
  return next;
}

/// Re-pack leaf tokens greedily, preserving the leaf maximum and total:
/// as many full-max leaves as fit, one partial leaf, zeros after.
inline std::vector<long long> concentrate_leaves(const std::vector<long long>& leaves) {
  const long long total = std::accumulate(leaves.begin(), leaves.end(), 0LL);
  const long long m = leaves.empty() ? 0 : *std::max_element(leaves.begin(), leaves.end());
  std::vector<long long> out(leaves.size(), 0);
  if (m == 0) return out;
  const long long full = total / m;
  for (long long i = 0; i < full; ++i) out[static_cast<std::size_t>(i)] = m;
  if (total % m != 0) out[static_cast<std::size_t>(full)] = total % m;
  return out;
}

/// Concentrated restricted step: one rtd transition, then leaf concentration.
inline StarState crtd_step(const StarState& s, Rng& rng) {
  StarState next = rtd_star_step(s, rng);
  next.leaves = concentrate_leaves(next.leaves);
  return next;
}

/// Runs the concentrated chain to absorption; true when the root ends with
/// every token. Cap guards against bugs, not expected behavior.
inline bool crtd_root_wins(StarState s, Rng& rng, long long step_cap = 0) {
  const long long cap = step_cap > 0 ? step_cap : default_step_cap(s.total());
  for (long long t = 0; t < cap; ++t) {
    if (s.root == s.total()) return true;
    if (s.max_leaf() == s.total()) return false;
    s = crtd_step(s, rng);
  }
  throw Error("concentrated star chain did not absorb within the cap");
}

}  // namespace tcl
