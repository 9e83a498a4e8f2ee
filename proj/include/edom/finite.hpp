#pragma once

// Rotate-Square on finite m x n grids.
//
//   FullBoundary  lattice inside, every ring cell guarded; ring guards shift
//                 along the ring to absorb interior guards stepping in and out.
//   Improved      the 7x7 catalogue replicated over 5x5 blocks and 5-cell
//                 side segments; corners never move.
//   General       Improved on the largest (2 mod 5) subgrid at the origin,
//                 leftover rows and columns saturated with idle guards.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edom/catalogue.hpp"
#include "edom/error.hpp"
#include "edom/grid.hpp"
#include "edom/infinite.hpp"
#include "edom/pattern.hpp"

namespace edom {

enum class Variant : std::uint8_t { FullBoundary, Improved, General };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::FullBoundary: return "full";
    case Variant::Improved: return "improved";
    case Variant::General: return "general";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  if (s == "full" || s == "full_boundary" || s == "FULL_BOUNDARY") return Variant::FullBoundary;
  if (s == "improved" || s == "IMPROVED") return Variant::Improved;
  if (s == "general" || s == "GENERAL") return Variant::General;
  throw Error(ErrorCode::Parse, "unknown variant '" + std::string(s) + "'");
}

struct GameState {
  GridDims dims;
  GuardPlacement placement;
  LatticePlacement interior_pattern;
  Variant variant = Variant::FullBoundary;
  std::uint64_t round = 0;
  GridDims core;  // the strategy's own grid; equals dims except for General
};

struct StepResult {
  GameState state;
  MovePlan plan;
};

/// Named booleans, in a fixed order per variant.
struct InvariantFlags {
  std::vector<std::pair<std::string, bool>> flags;

  void set(std::string name, bool v) { flags.emplace_back(std::move(name), v); }
  bool all() const {
    return std::all_of(flags.begin(), flags.end(), [](const auto& f) { return f.second; });
  }
  std::string failed() const {
    std::string out;
    for (const auto& [k, v] : flags)
      if (!v) out += (out.empty() ? "" : ",") + k;
    return out;
  }
};

/// 5 x budget, kept integral.
constexpr Coord full_boundary_budget5(Coord m, Coord n) { return m * n + 8 * (m + n) - 16; }
constexpr Coord improved_budget5(Coord m, Coord n) { return m * n + 4 * (m + n); }

constexpr bool congruent_dims(Coord m, Coord n) { return m >= 7 && n >= 7 && m % 5 == 2 && n % 5 == 2; }

/// Largest value <= v that is 2 mod 5.
constexpr Coord core_extent(Coord v) { return v - ((v % 5) + 3) % 5; }

namespace finite_detail {

inline void require_congruent(Coord m, Coord n) {
  if (!congruent_dims(m, n)) {
    throw Error(ErrorCode::BadDimensions, "need m, n >= 7 with m = n = 2 (mod 5), got " + std::to_string(m) + "x" +
                                              std::to_string(n));
  }
}

inline void require_attackable(const GameState& s, const Cell& attack) {
  if (!s.dims.contains(attack)) throw Error(ErrorCode::OutOfBounds, "attack " + to_string(attack) + " is off the grid");
  if (s.placement.contains(attack)) throw Error(ErrorCode::AttackOnGuard, "attack " + to_string(attack) + " is guarded");
}

// Clockwise ring starting at the top-left corner.
inline std::vector<Cell> ring_cells(const GridDims& d) {
  std::vector<Cell> out;
  for (Coord c = 0; c < d.n; ++c) out.push_back({0, c});
  for (Coord r = 1; r < d.m; ++r) out.push_back({r, d.n - 1});
  for (Coord c = d.n - 2; c >= 0; --c) out.push_back({d.m - 1, c});
  for (Coord r = d.m - 2; r >= 1; --r) out.push_back({r, 0});
  return out;
}

inline std::size_t ring_index(const GridDims& d, const Cell& c) {
  if (c.row == 0) return static_cast<std::size_t>(c.col);
  if (c.col == d.n - 1) return static_cast<std::size_t>(d.n - 1 + c.row);
  if (c.row == d.m - 1) return static_cast<std::size_t>(d.n - 1 + d.m - 1 + (d.n - 1 - c.col));
  return static_cast<std::size_t>(2 * (d.n - 1) + d.m - 1 + (d.m - 1 - c.row));
}

inline std::string dump(const GameState& s, const Cell& attack, const MovePlan& plan) {
  std::string out = "round " + std::to_string(s.round) + " pattern " + to_string(s.interior_pattern) + " attack " +
                    to_string(attack) + "\n" + render(s.placement, attack) + "plan:";
  for (const Move& mv : plan.moves)
    if (mv.from != mv.to) out += " " + to_string(mv.from) + "->" + to_string(mv.to);
  return out + "\n";
}

// Contraction of a congruent grid onto 7x7: borders stay, the interior folds mod 5.
inline Coord fold(Coord v, Coord extent) {
  if (v == 0) return 0;
  if (v == extent - 1) return kCatalogueSize - 1;
  return (v - 1) % 5 + 1;
}

inline Cell fold(const Cell& c, const GridDims& d) { return {fold(c.row, d.m), fold(c.col, d.n)}; }

}  // namespace finite_detail

/// Variant-specific state invariants.
inline InvariantFlags check_state(const GameState& s) {
  InvariantFlags f;
  f.set("dominating", is_dominating(s.placement));

  const GridDims& core = s.core;
  bool pattern = true;
  bool exact = true;
  Window(1, core.m - 2, 1, core.n - 2).for_each([&](const Cell& c) {
    const bool lattice = s.interior_pattern.contains(c);
    if (lattice && !s.placement.contains(c)) pattern = false;
    if (lattice != s.placement.contains(c)) exact = false;
  });
  f.set("contains_pattern", pattern);

  if (s.variant == Variant::FullBoundary) {
    bool saturated = true;
    for (const Cell& c : finite_detail::ring_cells(s.dims))
      if (!s.placement.contains(c)) saturated = false;
    f.set("boundary_saturated", saturated);
    return f;
  }

  f.set("interior_exact", exact);
  bool corners = true;
  for (const Cell& c : {Cell{0, 0}, Cell{0, core.n - 1}, Cell{core.m - 1, 0}, Cell{core.m - 1, core.n - 1}})
    if (!s.placement.contains(c)) corners = false;
  f.set("corners_occupied", corners);

  // Side segments: 3 guards each, all segments on a side alike.
  bool three = true;
  bool identical = true;
  auto side = [&](auto cell_at, Coord length) {
    std::optional<std::uint8_t> first;
    for (Coord seg = 0; seg < length / 5; ++seg) {
      std::uint8_t mask = 0;
      for (int k = 0; k < 5; ++k)
        if (s.placement.contains(cell_at(1 + seg * 5 + k))) mask |= static_cast<std::uint8_t>(1u << k);
      if (__builtin_popcount(mask) != 3) three = false;
      if (first && *first != mask) identical = false;
      first = mask;
    }
  };
  side([&](Coord c) { return Cell{0, c}; }, core.n - 2);
  side([&](Coord c) { return Cell{core.m - 1, c}; }, core.n - 2);
  side([&](Coord r) { return Cell{r, 0}; }, core.m - 2);
  side([&](Coord r) { return Cell{r, core.n - 1}; }, core.m - 2);
  f.set("segments_three", three);
  f.set("segments_identical", identical);

  if (s.variant == Variant::General) {
    bool strips = true;
    Window::of(s.dims).for_each([&](const Cell& c) {
      if (!core.contains(c) && !s.placement.contains(c)) strips = false;
    });
    f.set("strips_saturated", strips);
  }
  return f;
}

/// Everything checked after a round: the move, the budget, and the new state.
inline InvariantFlags check_step(const GameState& before, const MovePlan& plan, const Cell& attack,
                                 const GameState& after) {
  InvariantFlags f;
  f.set("plan_valid", validate_move_plan(before.placement, plan, attack, after.placement).ok());
  f.set("guard_count_constant", before.placement.size() == after.placement.size());
  if (before.variant != Variant::FullBoundary) {
    const GridDims& core = before.core;
    bool fixed = true;
    for (const Move& mv : plan.moves)
      if (core.is_corner(mv.from) && mv.from != mv.to) fixed = false;
    f.set("corners_fixed", fixed);
  }
  if (before.variant == Variant::General) {
    bool idle = true;
    for (const Move& mv : plan.moves)
      if (!before.core.contains(mv.from) && mv.from != mv.to) idle = false;
    f.set("strips_idle", idle);
  }
  for (auto& kv : check_state(after).flags) f.flags.push_back(std::move(kv));
  return f;
}

// ---------------------------------------------------------------------------
// Full boundary

inline GameState init_full_boundary(Coord m, Coord n) {
  finite_detail::require_congruent(m, n);
  const GridDims d(m, n);
  const LatticePlacement lp{Family::Straight, pick_max_residue(m, n, Family::Straight)};
  std::vector<Cell> cells;
  Window::of(d).for_each([&](const Cell& c) {
    if (d.is_ring(c) || lp.contains(c)) cells.push_back(c);
  });
  GameState s{d, GuardPlacement(std::move(cells), d), lp, Variant::FullBoundary, 0, d};
  if (static_cast<Coord>(s.placement.size()) * 5 != full_boundary_budget5(m, n)) {
    throw Error(ErrorCode::Internal, "full-boundary budget mismatch");
  }
  return s;
}

struct FullBoundaryOptions {
  bool shift_ring = true;  // off: ring guards ignore crossings (broken on purpose)
};

namespace finite_detail {

// Flow on ring edge i -> i+1 (positive = clockwise). Returns nullopt if no
// offset keeps every cell to one outgoing and one incoming guard.
inline std::optional<std::vector<int>> ring_flow(const std::vector<int>& delta, const std::vector<int>& entry,
                                                 const std::vector<int>& exit) {
  const std::size_t r = delta.size();
  std::vector<int> prefix(r);
  int acc = 0;
  for (std::size_t i = 0; i < r; ++i) prefix[i] = acc += delta[i];
  if (acc != 0) return std::nullopt;
  std::optional<std::vector<int>> best;
  int best_cost = std::numeric_limits<int>::max();
  // Descending offsets so ties keep the more clockwise flow.
  for (int c = 2; c >= -2; --c) {
    std::vector<int> flow(r);
    bool ok = true;
    int cost = 0;
    for (std::size_t i = 0; i < r && ok; ++i) {
      flow[i] = c + prefix[i];
      if (flow[i] < -1 || flow[i] > 1) ok = false;
      cost += std::abs(flow[i]);
    }
    for (std::size_t i = 0; i < r && ok; ++i) {
      const int f = flow[i];
      const int g = flow[(i + r - 1) % r];
      const int out = entry[i] + (f > 0) + (g < 0);
      const int in = exit[i] + (g > 0) + (f < 0);
      if (out > 1 || in > 1) ok = false;
    }
    if (ok && cost < best_cost) {
      best_cost = cost;
      best = std::move(flow);
    }
  }
  return best;
}

}  // namespace finite_detail

inline StepResult step_full_boundary(const GameState& s, const Cell& attack, const FullBoundaryOptions& opt = {}) {
  using namespace finite_detail;
  if (s.variant != Variant::FullBoundary) throw Error(ErrorCode::Internal, "not a full-boundary state");
  require_attackable(s, attack);
  const GridDims& d = s.dims;
  const SymbolicStep step = rotate_square_step(s.interior_pattern, attack);

  const std::vector<Cell> ring = ring_cells(d);
  const std::size_t r = ring.size();
  std::vector<int> entry(r, 0);
  std::vector<int> exit(r, 0);
  std::vector<std::optional<Cell>> ring_target(r);
  MovePlan plan;

  for (const Cell& p : lattice_cells(s.interior_pattern, Window::of(d))) {
    const Cell q = p + step.displacement(p);
    if (d.is_interior(p)) {
      plan.moves.push_back({p, q});
      if (d.is_ring(q)) exit[ring_index(d, q)] = 1;
    } else if (d.is_interior(q)) {
      entry[ring_index(d, p)] = 1;
      ring_target[ring_index(d, p)] = q;
    }
  }

  std::vector<int> delta(r);
  for (std::size_t i = 0; i < r; ++i) delta[i] = exit[i] - entry[i];
  std::vector<int> flow(r, 0);
  if (opt.shift_ring) {
    auto f = ring_flow(delta, entry, exit);
    if (!f) {
      throw Error(ErrorCode::InvariantViolation, "ring shift has no solution\n" + dump(s, attack, plan));
    }
    flow = std::move(*f);
  }
  for (std::size_t i = 0; i < r; ++i) {
    const Cell& c = ring[i];
    if (ring_target[i]) plan.moves.push_back({c, *ring_target[i]});
    else if (flow[i] > 0) plan.moves.push_back({c, ring[(i + 1) % r]});
    else if (flow[(i + r - 1) % r] < 0) plan.moves.push_back({c, ring[(i + r - 1) % r]});
    else plan.moves.push_back({c, c});
  }
  plan.sort();

  std::vector<Cell> targets;
  for (const Move& mv : plan.moves) targets.push_back(mv.to);
  std::sort(targets.begin(), targets.end());
  if (auto it = std::adjacent_find(targets.begin(), targets.end()); it != targets.end()) {
    throw Error(ErrorCode::InvariantViolation, "two guards sent to " + to_string(*it) + "\n" + dump(s, attack, plan));
  }
  GameState next{d, GuardPlacement(std::move(targets), d), step.after, Variant::FullBoundary, s.round + 1, d};
  const InvariantFlags flags = check_step(s, plan, attack, next);
  if (!flags.all()) {
    throw Error(ErrorCode::InvariantViolation, "violated " + flags.failed() + "\n" + dump(s, attack, plan));
  }
  return {std::move(next), std::move(plan)};
}

// ---------------------------------------------------------------------------
// Improved: every block and segment copies the 7x7 catalogue.

/// Lift of catalogue placement `id` onto a congruent grid.
inline std::vector<Cell> lift_placement(const Catalogue7x7& cat, int id, const GridDims& d) {
  const GuardPlacement small = cat.placement(id);
  std::vector<Cell> out;
  Window::of(d).for_each([&](const Cell& c) {
    if (small.contains(finite_detail::fold(c, d))) out.push_back(c);
  });
  return out;
}

inline GameState init_improved(Coord m, Coord n, const Catalogue7x7& cat) {
  finite_detail::require_congruent(m, n);
  const GridDims d(m, n);
  const LatticePlacement lp{Family::Straight, pick_max_residue(m, n, Family::Straight)};
  GameState s{d, GuardPlacement(lift_placement(cat, lp.id(), d), d), lp, Variant::Improved, 0, d};
  if (static_cast<Coord>(s.placement.size()) * 5 != improved_budget5(m, n)) {
    throw Error(ErrorCode::Internal, "improved budget mismatch");
  }
  return s;
}

namespace finite_detail {

// Lifted plan on the core grid; guards outside the core stay.
inline std::pair<MovePlan, int> lifted_plan(const GameState& s, const Cell& attack, const Catalogue7x7& cat) {
  const GridDims& core = s.core;
  const CatalogueTransition& tr = cat.transition(s.interior_pattern.id(), fold(attack, core));
  MovePlan plan;
  plan.moves.reserve(s.placement.size());
  for (const Cell& c : s.placement.cells()) {
    if (!core.contains(c)) {
      plan.moves.push_back({c, c});
      continue;
    }
    const Cell small = fold(c, core);
    auto it = std::lower_bound(tr.plan.moves.begin(), tr.plan.moves.end(), Move{small, Cell{std::numeric_limits<Coord>::min(), 0}});
    if (it == tr.plan.moves.end() || it->from != small) {
      throw Error(ErrorCode::Internal, "catalogue plan has no move for " + to_string(small));
    }
    plan.moves.push_back({c, c + (it->to - it->from)});
  }
  plan.sort();
  return {std::move(plan), tr.to};
}

inline StepResult step_lifted(const GameState& s, const Cell& attack, const Catalogue7x7& cat) {
  require_attackable(s, attack);
  auto [plan, to] = lifted_plan(s, attack, cat);
  std::vector<Cell> targets;
  for (const Move& mv : plan.moves) targets.push_back(mv.to);
  std::sort(targets.begin(), targets.end());
  if (auto it = std::adjacent_find(targets.begin(), targets.end()); it != targets.end()) {
    throw Error(ErrorCode::InvariantViolation, "two guards sent to " + to_string(*it) + "\n" + dump(s, attack, plan));
  }
  GameState next{s.dims, GuardPlacement(std::move(targets), s.dims), LatticePlacement::from_id(to), s.variant,
                 s.round + 1, s.core};
  const InvariantFlags flags = check_step(s, plan, attack, next);
  if (!flags.all()) {
    throw Error(ErrorCode::InvariantViolation, "violated " + flags.failed() + "\n" + dump(s, attack, plan));
  }
  return {std::move(next), std::move(plan)};
}

}  // namespace finite_detail

inline StepResult step_improved(const GameState& s, const Cell& attack, const Catalogue7x7& cat) {
  if (s.variant != Variant::Improved) throw Error(ErrorCode::Internal, "not an improved state");
  return finite_detail::step_lifted(s, attack, cat);
}

// ---------------------------------------------------------------------------
// General dimensions

inline GameState init_general(Coord m, Coord n, const Catalogue7x7& cat) {
  if (m < 16 || n < 16) {
    throw Error(ErrorCode::BadDimensions, "general strategy needs m, n >= 16, got " + std::to_string(m) + "x" +
                                              std::to_string(n));
  }
  const GridDims d(m, n);
  const GridDims core(core_extent(m), core_extent(n));
  const LatticePlacement lp{Family::Straight, pick_max_residue(core.m, core.n, Family::Straight)};
  std::vector<Cell> cells = lift_placement(cat, lp.id(), core);
  Window::of(d).for_each([&](const Cell& c) {
    if (!core.contains(c)) cells.push_back(c);
  });
  return {d, GuardPlacement(std::move(cells), d), lp, Variant::General, 0, core};
}

inline StepResult step_general(const GameState& s, const Cell& attack, const Catalogue7x7& cat) {
  if (s.variant != Variant::General) throw Error(ErrorCode::Internal, "not a general state");
  return finite_detail::step_lifted(s, attack, cat);
}

// ---------------------------------------------------------------------------

/// One entry point over the three variants.
class FiniteStrategy {
 public:
  FiniteStrategy(Variant v, const Catalogue7x7* cat, FullBoundaryOptions opt = {}) : variant_(v), cat_(cat), opt_(opt) {
    if (v != Variant::FullBoundary && cat == nullptr) throw Error(ErrorCode::Internal, "catalogue required");
  }

  Variant variant() const { return variant_; }

  GameState init(Coord m, Coord n) const {
    switch (variant_) {
      case Variant::FullBoundary: return init_full_boundary(m, n);
      case Variant::Improved: return init_improved(m, n, *cat_);
      case Variant::General: return init_general(m, n, *cat_);
    }
    throw Error(ErrorCode::Internal, "bad variant");
  }

  StepResult step(const GameState& s, const Cell& attack) const {
    switch (variant_) {
      case Variant::FullBoundary: return step_full_boundary(s, attack, opt_);
      case Variant::Improved: return step_improved(s, attack, *cat_);
      case Variant::General: return step_general(s, attack, *cat_);
    }
    throw Error(ErrorCode::Internal, "bad variant");
  }

 private:
  Variant variant_;
  const Catalogue7x7* cat_;
  FullBoundaryOptions opt_;
};

}  // namespace edom
