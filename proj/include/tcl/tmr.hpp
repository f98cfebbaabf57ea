#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcl/dynamics.hpp"
#include "tcl/graph.hpp"
#include "tcl/intervals.hpp"
#include "tcl/node_set.hpp"
#include "tcl/rng.hpp"

namespace tcl {

/// Points strictly better than the current winner for u: the interval from
/// u to the winner, minus the winner itself.
inline NodeSet preferred_points(const Graph& g, int u, int w) {
  NodeSet p = interval(g, u, w);
  p.erase(w);
  return p;
}

/// Preferred points u shares with at least one of the other two members.
inline NodeSet bargaining_points(const Graph& g, int u, int other1, int other2, int w) {
  const NodeSet pu = preferred_points(g, u, w);
  NodeSet b = pu & preferred_points(g, other1, w);
  b |= pu & preferred_points(g, other2, w);
  return b;
}

/// Closest bargaining point to u; ties broken by lowest node id.
inline std::optional<int> best_bargaining_point(const Graph& g, int u, int other1, int other2,
                                                int w) {
  const NodeSet b = bargaining_points(g, u, other1, other2, w);
  if (b.empty()) return std::nullopt;
  const std::int32_t* ru = g.dist_row(u);
  int best = -1;
  b.for_each([&](int v) {
    if (best < 0 || ru[v] < ru[best]) best = v;
  });
  return best;
}

struct TmrStepRecord {
  int proposer_index;             // member index 0..2
  std::optional<int> proposal;    // nullopt = motion to end
  std::array<bool, 3> votes;
  int winner_after;               // node
};

/// What a strategy may observe: everything public about the round so far.
struct TmrView {
  const Graph& g;
  std::array<int, 3> group;   // member opinion nodes
  int self;                   // own index in the group
  int winner;                 // current winner node
  const std::vector<TmrStepRecord>* history;

  int own_node() const { return group[self]; }
  int other_node(int which) const { return group[(self + 1 + which) % 3]; }
};

/// Pure behavior given the view and an explicit randomness stream.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::optional<int> propose(const TmrView& view, Rng& rng) = 0;
  virtual bool vote(const TmrView& view, const std::optional<int>& proposal, Rng& rng) = 0;
};

/// Proposes the best bargaining point while one exists, then moves to end;
/// votes by true distance preference, accepts the end motion exactly when
/// out of bargaining points.
class TruthfulStrategy final : public Strategy {
 public:
  std::optional<int> propose(const TmrView& view, Rng&) override {
    return best_bargaining_point(view.g, view.own_node(), view.other_node(0), view.other_node(1),
                                 view.winner);
  }
  bool vote(const TmrView& view, const std::optional<int>& proposal, Rng&) override {
    if (!proposal)
      return bargaining_points(view.g, view.own_node(), view.other_node(0), view.other_node(1),
                               view.winner)
          .empty();
    return view.g.distance(view.own_node(), *proposal) <
           view.g.distance(view.own_node(), view.winner);
  }
};

/// Proposes uniformly over all nodes plus the end motion; votes by coin.
class UniformRandomProposer final : public Strategy {
 public:
  std::optional<int> propose(const TmrView& view, Rng& rng) override {
    const int n = view.g.node_count();
    const int pick = rng.below_int(n + 1);
    if (pick == n) return std::nullopt;
    return pick;
  }
  bool vote(const TmrView&, const std::optional<int>&, Rng& rng) override { return rng.coin(); }
};

/// Always proposes its own opinion and only accepts that.
class SelfProposer final : public Strategy {
 public:
  std::optional<int> propose(const TmrView& view, Rng&) override { return view.own_node(); }
  bool vote(const TmrView& view, const std::optional<int>& proposal, Rng&) override {
    return proposal && *proposal == view.own_node();
  }
};

/// Truthful proposals while bargaining points remain, then keeps proposing
/// its own opinion; never motions to end and always rejects end motions.
class NeverEnd final : public Strategy {
 public:
  std::optional<int> propose(const TmrView& view, Rng&) override {
    auto b = best_bargaining_point(view.g, view.own_node(), view.other_node(0),
                                   view.other_node(1), view.winner);
    return b ? b : std::optional<int>(view.own_node());
  }
  bool vote(const TmrView& view, const std::optional<int>& proposal, Rng&) override {
    if (!proposal) return false;
    return view.g.distance(view.own_node(), *proposal) <
           view.g.distance(view.own_node(), view.winner);
  }
};

inline TruthfulStrategy& truthful_strategy() {
  static TruthfulStrategy t;
  return t;
}

struct TmrInit {
  int winner_index;    // member index holding the initial status quo
  int proposer_index;  // distinct member index proposing first
};

struct RoundResult {
  std::optional<int> winner;  // absent when the step cap was hit
  long long steps = 0;
  std::vector<TmrStepRecord> transcript;
};

/// One majority-rule round: propose, simultaneous vote, update, until an end
/// motion passes. Without an explicit init, the initial (winner, proposer)
/// pair is drawn uniformly over ordered pairs of distinct members.
inline RoundResult run_tmr_round(const Graph& g, const std::array<int, 3>& group,
                                 const std::array<Strategy*, 3>& strategies,
                                 std::optional<TmrInit> init, Rng& rng, long long step_cap = 0) {
  for (int m : group) g.require_node(m);
  int winner_index, proposer;
  if (init) {
    winner_index = init->winner_index;
    proposer = init->proposer_index;
  } else {
    winner_index = rng.below_int(3);
    proposer = rng.below_int(2);
    if (proposer >= winner_index) ++proposer;
  }
  if (winner_index < 0 || winner_index > 2 || proposer < 0 || proposer > 2 ||
      proposer == winner_index)
    throw OutOfRange("round needs distinct member indices for winner and proposer");

  RoundResult out;
  int winner = group[winner_index];
  const long long cap = step_cap > 0 ? step_cap : 1000 + 4LL * g.node_count();
  for (long long t = 1; t <= cap; ++t) {
    TmrView pview{g, group, proposer, winner, &out.transcript};
    const auto proposal = strategies[proposer]->propose(pview, rng);
    if (proposal) g.require_node(*proposal);
    std::array<bool, 3> votes;
    int yes = 0;
    for (int i = 0; i < 3; ++i) {
      TmrView v{g, group, i, winner, &out.transcript};
      votes[i] = strategies[i]->vote(v, proposal, rng);
      if (votes[i]) ++yes;
    }
    const bool accepted = yes >= 2;
    if (accepted && proposal) winner = *proposal;
    out.transcript.push_back({proposer, proposal, votes, winner});
    if (accepted && !proposal) {
      out.winner = winner;
      out.steps = t;
      return out;
    }
    if (yes == 1 || yes == 2) {
      for (int i = 0; i < 3; ++i)
        if (votes[i] != accepted) proposer = i;  // sole dissenter loses
    }
  }
  out.steps = cap;
  return out;  // never ended
}

inline nlohmann::json transcript_json(const RoundResult& r, const std::array<int, 3>& group) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& rec : r.transcript) {
    nlohmann::json votes = nlohmann::json::object();
    for (int i = 0; i < 3; ++i) votes[std::to_string(group[i])] = rec.votes[i];
    steps.push_back({{"proposer", group[rec.proposer_index]},
                     {"proposal", rec.proposal ? nlohmann::json(*rec.proposal)
                                               : nlohmann::json("END")},
                     {"votes", votes},
                     {"winner_after", rec.winner_after}});
  }
  return steps;
}

// ---------------------------------------------------------------------------
// full strategic process

/// Strategy per opinion node; participants sharing an opinion share a type.
struct StrategyAssignment {
  Strategy* fallback = &truthful_strategy();
  std::map<int, Strategy*> by_node;

  Strategy* at(int node) const {
    auto it = by_node.find(node);
    return it == by_node.end() ? fallback : it->second;
  }
};

struct LdsgCaps {
  long long ldsg_cap = 0;    // 0 = default_step_cap
  long long round_cap = 0;   // 0 = run_tmr_round default
};

struct StrategicTrace {
  TokenState terminal;
  std::optional<int> winner;
  long long rounds = 0;
  bool round_diverged = false;  // some majority-rule round never ended
};

/// LDSG loop where each selected triad's decision is a majority-rule round
/// winner. Selection shares the stream layout of run(), so with all-truthful
/// strategies a run is trajectory-identical to the triadic median dynamic
/// under the same seed.
inline StrategicTrace run_strategic_ldsg(const Graph& g, const Profile& p, int k,
                                         const StrategyAssignment& assignment, std::uint64_t seed,
                                         LdsgCaps caps = {}) {
  StrategicTrace out;
  out.terminal = init_tokens(p, k);
  auto& owners = out.terminal.owners;
  const int total = static_cast<int>(owners.size());
  const long long cap = caps.ldsg_cap > 0 ? caps.ldsg_cap : default_step_cap(total);

  std::vector<int> counts(g.node_count(), 0);
  int occupied = 0;
  for (int v : owners)
    if (counts[v]++ == 0) ++occupied;
  if (occupied == 1) {
    out.winner = owners[0];
    return out;
  }

  Rng sel_rng = Rng::child(seed, 1);
  const std::uint64_t round_base = Rng::derive(seed, 2);
  std::array<int, 3> idx, member;
  for (long long t = 1; t <= cap; ++t) {
    for (int i = 0; i < 3; ++i) {
      idx[i] = sel_rng.below_int(total);
      member[i] = owners[idx[i]];
    }
    Rng round_rng = Rng::child(round_base, static_cast<std::uint64_t>(t));
    const std::array<Strategy*, 3> strategies{assignment.at(member[0]), assignment.at(member[1]),
                                              assignment.at(member[2])};
    const RoundResult round =
        run_tmr_round(g, member, strategies, std::nullopt, round_rng, caps.round_cap);
    out.terminal.round = t;
    if (!round.winner) {
      out.round_diverged = true;
      out.rounds = t;
      return out;
    }
    const int d = *round.winner;
    for (int i : idx) {
      const int from = owners[i];
      if (from == d) continue;
      if (--counts[from] == 0) --occupied;
      if (counts[d]++ == 0) ++occupied;
      owners[i] = d;
    }
    if (occupied == 1) {
      out.winner = owners[0];
      out.rounds = t;
      return out;
    }
  }
  out.rounds = out.terminal.round;
  return out;
}

}  // namespace tcl
