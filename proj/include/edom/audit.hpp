#pragma once

// Rioter policies and the strategy auditor.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edom/error.hpp"
#include "edom/finite.hpp"
#include "edom/grid.hpp"
#include "edom/rng.hpp"

namespace edom {

enum class AttackerKind : std::uint8_t { Random, Greedy, Exhaustive };

inline std::string_view to_string(AttackerKind a) {
  switch (a) {
    case AttackerKind::Random: return "random";
    case AttackerKind::Greedy: return "greedy";
    case AttackerKind::Exhaustive: return "exhaustive";
  }
  return "?";
}

inline AttackerKind parse_attacker(std::string_view s) {
  if (s == "random") return AttackerKind::Random;
  if (s == "greedy") return AttackerKind::Greedy;
  if (s == "exhaustive") return AttackerKind::Exhaustive;
  throw Error(ErrorCode::Parse, "unknown attacker '" + std::string(s) + "'");
}

inline std::vector<Cell> unguarded_cells(const GuardPlacement& p, const GridDims& d) {
  std::vector<Cell> out;
  Window::of(d).for_each([&](const Cell& c) {
    if (!p.contains(c)) out.push_back(c);
  });
  return out;
}

inline Cell random_attack(const GameState& s, Rng& rng) {
  const auto free = unguarded_cells(s.placement, s.dims);
  if (free.empty()) throw Error(ErrorCode::NotFound, "every cell is guarded");
  return free[rng.below(free.size())];
}

/// Fewest guards within distance 2; then nearest to a corner; then row-major.
inline Cell greedy_attack(const GameState& s) {
  const GridDims& d = s.dims;
  const Occupancy occ(d, s.placement.cells());
  std::optional<Cell> best;
  int best_guards = 0;
  Coord best_corner = 0;
  Window::of(d).for_each([&](const Cell& c) {
    if (occ[c]) return;
    int guards = 0;
    for (Coord dr = -2; dr <= 2; ++dr)
      for (Coord dc = -2; dc <= 2; ++dc)
        if ((dr < 0 ? -dr : dr) + (dc < 0 ? -dc : dc) <= 2 && occ[c + Cell{dr, dc}]) ++guards;
    const Coord corner = std::min(c.row, d.m - 1 - c.row) + std::min(c.col, d.n - 1 - c.col);
    if (!best || guards < best_guards || (guards == best_guards && corner < best_corner)) {
      best = c;
      best_guards = guards;
      best_corner = corner;
    }
  });
  if (!best) throw Error(ErrorCode::NotFound, "every cell is guarded");
  return *best;
}

struct Counterexample {
  std::vector<Cell> attacks;
  std::string dump;
};

struct AuditReport {
  bool ok = true;
  std::uint64_t rounds = 0;
  std::size_t states = 0;  // exhaustive only
  std::size_t edges = 0;
  std::optional<Counterexample> counterexample;
};

/// Called after every round with the attack and result.
using RoundObserver = std::function<void(const Cell&, const StepResult&, const InvariantFlags&)>;

/// Plays `rounds` attacks from the initial state, checking invariants each round.
inline AuditReport audit_play(const FiniteStrategy& strategy, Coord m, Coord n, AttackerKind attacker,
                              std::uint64_t rounds, std::uint64_t seed, const RoundObserver& observe = {}) {
  if (attacker == AttackerKind::Exhaustive) throw Error(ErrorCode::Internal, "use audit_exhaustive");
  AuditReport rep;
  GameState s = strategy.init(m, n);
  Rng rng(seed);
  std::vector<Cell> history;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    const Cell a = attacker == AttackerKind::Random ? random_attack(s, rng) : greedy_attack(s);
    history.push_back(a);
    try {
      StepResult r = strategy.step(s, a);
      const InvariantFlags flags = check_step(s, r.plan, a, r.state);
      if (observe) observe(a, r, flags);
      if (!flags.all()) {
        rep.ok = false;
        rep.counterexample = Counterexample{history, "violated " + flags.failed() + "\n" + render(s.placement, a)};
        return rep;
      }
      s = std::move(r.state);
      ++rep.rounds;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvariantViolation) throw;
      rep.ok = false;
      rep.counterexample = Counterexample{history, e.what()};
      return rep;
    }
  }
  return rep;
}

/// BFS over every state reachable under every attack.
inline AuditReport audit_exhaustive(const FiniteStrategy& strategy, Coord m, Coord n,
                                    std::size_t max_states = 100000) {
  AuditReport rep;
  struct Node {
    GameState state;
    std::optional<std::size_t> parent;
    Cell attack;
  };
  std::vector<Node> nodes;
  std::map<std::pair<int, std::vector<Cell>>, std::size_t> seen;
  auto key = [](const GameState& s) { return std::pair{s.interior_pattern.id(), s.placement.cells()}; };
  auto path = [&](std::size_t i, const Cell& last) {
    std::vector<Cell> attacks{last};
    for (std::optional<std::size_t> k = i; k && nodes[*k].parent; k = nodes[*k].parent) attacks.push_back(nodes[*k].attack);
    return std::vector<Cell>(attacks.rbegin(), attacks.rend());
  };

  nodes.push_back({strategy.init(m, n), std::nullopt, {}});
  seen[key(nodes[0].state)] = 0;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const GameState s = nodes[i].state;
    for (const Cell& a : unguarded_cells(s.placement, s.dims)) {
      ++rep.edges;
      std::optional<StepResult> r;
      std::string failure;
      try {
        r = strategy.step(s, a);
        const InvariantFlags flags = check_step(s, r->plan, a, r->state);
        if (!flags.all()) failure = "violated " + flags.failed();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvariantViolation) throw;
        failure = e.what();
      }
      if (!failure.empty()) {
        rep.ok = false;
        rep.states = nodes.size();
        rep.counterexample = Counterexample{path(i, a), failure};
        return rep;
      }
      auto k = key(r->state);
      if (seen.count(k)) continue;
      if (nodes.size() >= max_states) throw Error(ErrorCode::ExceedsLimit, "reachable state space too large");
      seen.emplace(std::move(k), nodes.size());
      queue.push_back(nodes.size());
      nodes.push_back({std::move(r->state), i, a});
    }
  }
  rep.states = nodes.size();
  return rep;
}

}  // namespace edom
