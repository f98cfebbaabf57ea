#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "tcl/generate.hpp"
#include "tcl/graph.hpp"
#include "tcl/intervals.hpp"
#include "tcl/median.hpp"
#include "tcl/profile.hpp"
#include "tcl/rng.hpp"

namespace tcl {

enum class SelectionKind { TriadUniform, DyadUniform };

enum class DecisionKind {
  GeneralizedMedianOfGroup,
  RestrictedVote,
  DyadicSymmetricMidpoint,
  DyadicRandomEndpoint,
};

inline bool is_dyadic(DecisionKind k) {
  return k == DecisionKind::DyadicSymmetricMidpoint || k == DecisionKind::DyadicRandomEndpoint;
}

inline int group_size(SelectionKind k) { return k == SelectionKind::TriadUniform ? 3 : 2; }

/// Which node holds each token, plus the round counter.
struct TokenState {
  std::vector<int> owners;
  long long round = 0;

  int total_tokens() const { return static_cast<int>(owners.size()); }

  std::vector<long long> node_counts(int node_count) const {
    std::vector<long long> c(node_count, 0);
    for (int v : owners) ++c[v];
    return c;
  }

  /// The common owner if all tokens coincide.
  std::optional<int> consensus() const {
    for (int v : owners)
      if (v != owners[0]) return std::nullopt;
    return owners.empty() ? std::nullopt : std::optional<int>(owners[0]);
  }
};

/// k tokens at every participant's opinion node, round 0. Tokens are laid
/// out by ascending node id so identical profiles give identical states.
inline TokenState init_tokens(const Profile& p, int k) {
  if (k < 1) throw OutOfRange("tokens per participant must be at least 1");
  if (p.total() < 1) throw EmptySet("profile has no participants");
  TokenState s;
  s.owners.reserve(static_cast<std::size_t>(p.total() * k));
  for (int v = 0; v < p.node_count(); ++v) {
    const long long copies = p.count_at(v) * k;
    for (long long i = 0; i < copies; ++i) s.owners.push_back(v);
  }
  return s;
}

/// Token indices drawn i.i.d. uniform with replacement.
inline std::vector<int> select_group(const TokenState& s, SelectionKind kind, Rng& rng) {
  const int sz = group_size(kind);
  std::vector<int> idx(sz);
  for (int i = 0; i < sz; ++i) idx[i] = rng.below_int(s.total_tokens());
  return idx;
}

/// The unique generalized median of a triad on a median graph.
inline int decide_triad_median(const Graph& g, const std::array<int, 3>& members) {
  return unique_median(g, members[0], members[1], members[2]);
}

namespace detail {

// Mutual vote among three members given any distance oracle. Each member
// votes for the strictly closer of the other two, coin on ties; a member
// with two or more votes wins. Returns the winning member index.
template <class DistFn>
std::optional<int> restricted_vote_winner(DistFn dist, Rng& rng) {
  int votes[3] = {0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    const int da = dist(i, a), db = dist(i, b);
    int choice;
    if (da < db)
      choice = a;
    else if (db < da)
      choice = b;
    else
      choice = rng.coin() ? a : b;
    ++votes[choice];
  }
  for (int i = 0; i < 3; ++i)
    if (votes[i] >= 2) return i;
  return std::nullopt;  // 1-1-1: no exchange
}

}  // namespace detail

/// Restricted triadic vote: the decision must be one of the members; a
/// three-way tie yields no decision.
inline std::optional<int> decide_restricted_vote(const Graph& g, const std::array<int, 3>& members,
                                                 Rng& rng) {
  for (int m : members) g.require_node(m);
  auto idx = detail::restricted_vote_winner(
      [&](int i, int j) { return g.distance(members[i], members[j]); }, rng);
  if (!idx) return std::nullopt;
  return members[*idx];
}

/// Dyadic decision between two opinions. The midpoint rule is only defined
/// when the interval between them is a single path.
inline int decide_dyad(const Graph& g, int a, int b, DecisionKind rule, Rng& rng) {
  if (!is_dyadic(rule)) throw InvalidSpec("decide_dyad needs a dyadic rule");
  g.require_node(a);
  g.require_node(b);
  if (a == b) return a;
  if (rule == DecisionKind::DyadicRandomEndpoint) return rng.coin() ? a : b;
  const int d = g.distance(a, b);
  const auto nodes = interval_nodes(g, a, b);
  if (static_cast<int>(nodes.size()) != d + 1)
    throw AmbiguousMidpoint("interval is not a path; midpoint undefined");
  const std::int32_t* ra = g.dist_row(a);
  auto at_depth = [&](int depth) {
    for (int w : nodes)
      if (ra[w] == depth) return w;
    return -1;
  };
  if (d % 2 == 0) return at_depth(d / 2);
  return rng.coin() ? at_depth(d / 2) : at_depth(d / 2 + 1);
}

/// Group decision for any rule; absent means no exchange this round.
inline std::optional<int> group_decision(const Graph& g, const std::vector<int>& members,
                                         DecisionKind rule, Rng& rng) {
  switch (rule) {
    case DecisionKind::GeneralizedMedianOfGroup:
      if (members.size() != 3) throw InvalidSpec("median rule expects a triad");
      return decide_triad_median(g, {members[0], members[1], members[2]});
    case DecisionKind::RestrictedVote:
      if (members.size() != 3) throw InvalidSpec("restricted vote expects a triad");
      return decide_restricted_vote(g, {members[0], members[1], members[2]}, rng);
    case DecisionKind::DyadicSymmetricMidpoint:
    case DecisionKind::DyadicRandomEndpoint:
      if (members.size() != 2) throw InvalidSpec("dyadic rule expects a dyad");
      return decide_dyad(g, members[0], members[1], rule, rng);
  }
  throw InvalidSpec("unknown decision rule");
}

/// One transition: selected tokens move to the group decision; an absent
/// decision leaves owners unchanged. Round always advances.
inline TokenState step(const Graph& g, const TokenState& s, SelectionKind sel, DecisionKind dec,
                       Rng& rng) {
  TokenState next = s;
  const auto idx = select_group(s, sel, rng);
  std::vector<int> members(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) members[i] = s.owners[idx[i]];
  const auto decision = group_decision(g, members, dec, rng);
  if (decision)
    for (int i : idx) next.owners[i] = *decision;
  next.round = s.round + 1;
  return next;
}

/// Cap comfortably above the expected consensus scale so that hitting it
/// signals a bug rather than bad luck: 100 n (ln n)^2 + 1000.
inline long long default_step_cap(long long tokens) {
  const double ln = std::log(static_cast<double>(tokens < 2 ? 2 : tokens));
  return static_cast<long long>(100.0 * static_cast<double>(tokens) * ln * ln) + 1000;
}

struct RunOptions {
  long long step_cap = 0;          // 0 = default_step_cap
  std::ostream* trace = nullptr;   // per-round JSON lines
};

struct Trace {
  TokenState terminal;
  std::optional<int> winner;
  long long rounds = 0;
};

namespace detail {

inline void emit_trace_line(std::ostream& os, long long t, const std::vector<int>& tokens,
                            const std::vector<int>& members, const std::optional<int>& decision) {
  os << "{\"t\":" << t << ",\"tokens\":[";
  for (std::size_t i = 0; i < tokens.size(); ++i) os << (i ? "," : "") << tokens[i];
  os << "],\"members\":[";
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i];
  os << "],\"decision\":";
  if (decision)
    os << *decision;
  else
    os << "null";
  os << "}\n";
}

}  // namespace detail

/// Full process: steps until every token has one owner or the cap is hit.
/// The seed is split into a selection stream and a decision stream, so rule
/// variants that consume different amounts of decision randomness still see
/// the same group sequence.
inline Trace run(const Graph& g, const Profile& p, int k, SelectionKind sel, DecisionKind dec,
                 std::uint64_t seed, RunOptions opt = {}) {
  Trace out;
  out.terminal = init_tokens(p, k);
  auto& owners = out.terminal.owners;
  const int total = static_cast<int>(owners.size());
  const long long cap = opt.step_cap > 0 ? opt.step_cap : default_step_cap(total);

  std::vector<int> counts(g.node_count(), 0);
  int occupied = 0;
  for (int v : owners)
    if (counts[v]++ == 0) ++occupied;
  if (occupied == 1) {
    out.winner = owners[0];
    return out;
  }

  Rng sel_rng = Rng::child(seed, 1);
  Rng dec_rng = Rng::child(seed, 2);
  const int gs = group_size(sel);
  std::vector<int> idx(gs), members(gs);
  for (long long t = 1; t <= cap; ++t) {
    for (int i = 0; i < gs; ++i) {
      idx[i] = sel_rng.below_int(total);
      members[i] = owners[idx[i]];
    }
    const auto decision = group_decision(g, members, dec, dec_rng);
    if (decision) {
      const int d = *decision;
      for (int i : idx) {
        const int from = owners[i];
        if (from == d) continue;
        if (--counts[from] == 0) --occupied;
        if (counts[d]++ == 0) ++occupied;
        owners[i] = d;
      }
    }
    out.terminal.round = t;
    if (opt.trace) detail::emit_trace_line(*opt.trace, t, idx, members, decision);
    if (occupied == 1) {
      out.winner = owners[0];
      out.rounds = t;
      return out;
    }
  }
  out.rounds = out.terminal.round;
  return out;  // cap reached, winner absent
}

/// Average embedded token position.
inline double token_mean(const TokenState& s, const std::vector<double>& embedding) {
  double sum = 0;
  for (int v : s.owners) sum += embedding[v];
  return sum / static_cast<double>(s.owners.size());
}

inline std::vector<double> id_embedding(int node_count) {
  std::vector<double> e(node_count);
  for (int i = 0; i < node_count; ++i) e[i] = i;
  return e;
}

/// Empirical check that a dyadic rule's decision distribution is invariant
/// under translating and reflecting the pair along a path: pooled by
/// distance class, the offset histogram must match its own reflection
/// within 4 sigma.
template <class DecideFn>
bool check_local_consistency_fn(DecideFn decide, int line_length, long long trials_per_pair,
                                Rng& rng) {
  const Graph g = make_path(line_length);
  // hist[d][offset], offset measured from the left endpoint
  std::vector<std::vector<long long>> hist(line_length);
  for (int d = 1; d < line_length; ++d) hist[d].assign(d + 1, 0);
  for (int x = 0; x < line_length; ++x)
    for (int y = x + 1; y < line_length; ++y)
      for (long long r = 0; r < trials_per_pair; ++r) {
        const int w = decide(g, x, y, rng);
        const int off = w - x;
        if (off < 0 || off > y - x) return false;  // escaped the hull
        hist[y - x][off]++;
      }
  for (int d = 1; d < line_length; ++d)
    for (int o = 0; o * 2 < d; ++o) {
      const double a = static_cast<double>(hist[d][o]);
      const double b = static_cast<double>(hist[d][d - o]);
      if (a + b == 0) continue;
      if (std::abs(a - b) > 4.0 * std::sqrt(a + b)) return false;
    }
  return true;
}

inline bool check_local_consistency(DecisionKind rule, int line_length, long long trials_per_pair,
                                    Rng& rng) {
  if (!is_dyadic(rule)) throw InvalidSpec("local consistency check needs a dyadic rule");
  return check_local_consistency_fn(
      [rule](const Graph& g, int x, int y, Rng& r) { return decide_dyad(g, x, y, rule, r); },
      line_length, trials_per_pair, rng);
}

}  // namespace tcl
