#pragma once

// Computational checks of the lattice, counting and strategy claims, shared
// by the CLI and the test suites.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edom/catalogue.hpp"
#include "edom/finite.hpp"
#include "edom/infinite.hpp"
#include "edom/pattern.hpp"
#include "edom/rng.hpp"

namespace edom {

struct LatticeDominationReport {
  bool dominating = true;
  bool perfect = true;
};

/// All ten placements on a side x side window at the origin; perfection is
/// checked away from the window edge.
inline LatticeDominationReport check_lattice_domination(Coord side = 20, Coord margin = 2) {
  LatticeDominationReport out;
  const Window w(0, side - 1, 0, side - 1);
  const Window inner = *w.shrunk(margin);
  for (const LatticePlacement& lp : all_lattices()) {
    const GuardPlacement p = materialize(lp, w);
    // Guards outside the window still count for cells near its edge.
    const GuardPlacement wide = materialize(lp, Window(-1, side, -1, side));
    if (!dominates_region(wide, w)) out.dominating = false;
    if (!is_perfect_on(p, inner)) out.perfect = false;
  }
  return out;
}

/// Brute-force count of the lattice inside the m x n grid.
inline Coord enumerate_restriction(Coord m, Coord n, Residue t, Family family) {
  Coord k = 0;
  for (Coord r = 0; r < m; ++r)
    for (Coord c = 0; c < n; ++c)
      if (f_value({r, c}, family) == t) ++k;
  return k;
}

struct CountReport {
  bool bounds = true;      // floor(mn/5) <= count <= ceil(mn/5)
  bool extremes = true;    // both bounds attained by some (family, t)
  bool closed_form = true; // formula equals enumeration
  std::string first_failure;
};

inline CountReport check_counts(Coord max, Coord enumerate_max) {
  CountReport out;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && out.first_failure.empty()) out.first_failure = what;
    flag = false;
  };
  for (Coord m = 1; m <= max; ++m) {
    for (Coord n = 1; n <= max; ++n) {
      const Coord lo = m * n / 5;
      const Coord hi = (m * n + 4) / 5;
      Coord seen_lo = hi + 1;
      Coord seen_hi = -1;
      for (const LatticePlacement& lp : all_lattices()) {
        const Coord k = count_restriction(m, n, lp.t, lp.family);
        const std::string tag = std::to_string(m) + "x" + std::to_string(n) + " " + to_string(lp);
        if (k < lo || k > hi) fail(out.bounds, tag + " count " + std::to_string(k));
        seen_lo = std::min(seen_lo, k);
        seen_hi = std::max(seen_hi, k);
        if (m <= enumerate_max && n <= enumerate_max && k != enumerate_restriction(m, n, lp.t, lp.family)) {
          fail(out.closed_form, tag + " formula differs from enumeration");
        }
      }
      if (seen_lo != lo || seen_hi != hi) fail(out.extremes, std::to_string(m) + "x" + std::to_string(n) + " extremes");
    }
  }
  return out;
}

struct StepCase {
  Family family;
  Direction direction;
  int t = 0;
  Cell attack;
  StepVerification result;
};

/// Every (family, direction, t) on a (2 radius + 1)-wide window around the attack.
inline std::vector<StepCase> check_symbolic_steps(Coord radius = 10) {
  std::vector<StepCase> out;
  for (const RotationCase& rc : kRotationCases) {
    for (int t = 0; t < 5; ++t) {
      const LatticePlacement lp{rc.family, Residue(t)};
      const Cell guard = rc.family == Family::Straight ? Cell{t, 0} : Cell{0, t};
      const Cell attack = guard + offset(rc.attack);
      out.push_back({rc.family, rc.attack, t, attack, verify_step_report(lp, attack, Window::around(attack, radius))});
    }
  }
  return out;
}

struct InfiniteRunReport {
  std::uint64_t rounds = 0;
  std::uint64_t violations = 0;
  bool alternates = true;
  LatticePlacement final_pattern;
};

/// Called after every symbolic step with the attack, the step and the window verdict.
using InfiniteObserver = std::function<void(const Cell&, const SymbolicStep&, bool)>;

/// Random attacks near the origin on the symbolic game, each step checked in
/// a window around the attack.
inline InfiniteRunReport run_infinite(std::uint64_t rounds, std::uint64_t seed, LatticePlacement start = {},
                                      Coord spread = 10, Coord radius = 10, const InfiniteObserver& observe = {}) {
  InfiniteRunReport out;
  InfiniteGame game(start);
  Rng rng(seed);
  const auto side = static_cast<std::uint64_t>(2 * spread + 1);
  for (std::uint64_t i = 0; i < rounds; ++i) {
    Cell a;
    do {
      a = {static_cast<Coord>(rng.below(side)) - spread, static_cast<Coord>(rng.below(side)) - spread};
    } while (game.placement().contains(a));
    const LatticePlacement before = game.placement();
    const bool ok = verify_step_in_window(before, a, Window::around(a, radius));
    if (!ok) ++out.violations;
    const SymbolicStep s = game.defend(a);
    if (observe) observe(a, s, ok);
    if (s.after.family == before.family) out.alternates = false;
    ++out.rounds;
  }
  out.final_pattern = game.placement();
  return out;
}

struct GeneralBudgetRow {
  Coord m = 0;
  Coord n = 0;
  Coord guards = 0;
  Coord chang = 0;
  Coord excess = 0;  // guards - chang
};

struct GeneralBudgetReport {
  std::vector<GeneralBudgetRow> rows;
  double max_ratio = 0;  // max excess / (m + n)
  bool within(double c) const { return max_ratio <= c; }
};

inline GeneralBudgetReport check_general_budget(const Catalogue7x7& cat, Coord lo, Coord hi) {
  GeneralBudgetReport out;
  for (Coord m = lo; m <= hi; ++m) {
    for (Coord n = lo; n <= hi; ++n) {
      GeneralBudgetRow row{m, n, static_cast<Coord>(init_general(m, n, cat).placement.size()), chang_bound(m, n), 0};
      row.excess = row.guards - row.chang;
      out.max_ratio = std::max(out.max_ratio, static_cast<double>(row.excess) / static_cast<double>(m + n));
      out.rows.push_back(row);
    }
  }
  return out;
}

struct CatalogueReport {
  bool sizes = true;       // 21 guards each
  bool dominating = true;
  bool corners = true;
  bool sides = true;       // 3 guards per side
  bool closed = true;      // every unguarded cell answered legally, inside the catalogue
  bool symmetric = true;   // A -> B implies B -> A
  std::size_t transitions = 0;
  std::string first_failure;
  bool ok() const { return sizes && dominating && corners && sides && closed && symmetric; }
};

inline CatalogueReport check_catalogue(const Catalogue7x7& cat) {
  CatalogueReport out;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && out.first_failure.empty()) out.first_failure = what;
    flag = false;
  };
  const GridDims d(kCatalogueSize, kCatalogueSize);
  std::array<std::array<bool, 10>, 10> edge{};
  for (int id = 0; id < 10; ++id) {
    const GuardPlacement p = cat.placement(id);
    const std::string tag = "placement " + std::to_string(id);
    if (p.size() != 21) fail(out.sizes, tag + " has " + std::to_string(p.size()) + " guards");
    if (!is_dominating(p)) fail(out.dominating, tag + " does not dominate");
    for (const Cell& c : {Cell{0, 0}, Cell{0, 6}, Cell{6, 0}, Cell{6, 6}})
      if (!p.contains(c)) fail(out.corners, tag + " misses corner " + to_string(c));
    for (Side s : kSides) {
      int k = 0;
      for (int pos = 0; pos < 5; ++pos) k += p.contains(side_cell(s, pos)) ? 1 : 0;
      if (k != 3) fail(out.sides, tag + " side " + std::string(to_string(s)) + " has " + std::to_string(k));
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Cell a = d.cell(i);
      if (p.contains(a)) continue;
      const auto& table = cat.transitions[static_cast<std::size_t>(id)];
      auto it = table.find(a);
      if (it == table.end()) {
        fail(out.closed, tag + " has no response to " + to_string(a));
        continue;
      }
      ++out.transitions;
      const MoveCheck mc = validate_move_plan(p, it->second.plan, a, cat.placement(it->second.to));
      if (!mc) fail(out.closed, tag + " response to " + to_string(a) + ": " + std::string(to_string(mc.reason)));
      for (const Move& mv : it->second.plan.moves)
        if (d.is_corner(mv.from) && mv.from != mv.to) fail(out.corners, tag + " moves a corner guard");
      edge[static_cast<std::size_t>(id)][static_cast<std::size_t>(it->second.to)] = true;
    }
  }
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = 0; b < 10; ++b)
      if (edge[a][b] && !edge[b][a]) fail(out.symmetric, std::to_string(a) + "->" + std::to_string(b) + " has no reverse");
  return out;
}

}  // namespace edom
