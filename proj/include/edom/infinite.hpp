#pragma once

// Strategies on the infinite grid, kept symbolic: a placement is a
// (family, residue) pair and a defence is a periodic displacement field.
// Correctness is checked by materialising windows.

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edom/error.hpp"
#include "edom/grid.hpp"
#include "edom/pattern.hpp"

namespace edom {

enum class Direction : std::uint8_t { Up, Down, Left, Right };

constexpr Cell offset(Direction d) {
  switch (d) {
    case Direction::Up: return kUp;
    case Direction::Down: return kDown;
    case Direction::Left: return kLeft;
    case Direction::Right: return kRight;
  }
  return {};
}

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
  }
  return "?";
}

inline std::optional<Direction> direction_of(const Cell& delta) {
  if (delta == kUp) return Direction::Up;
  if (delta == kDown) return Direction::Down;
  if (delta == kLeft) return Direction::Left;
  if (delta == kRight) return Direction::Right;
  return std::nullopt;
}

/// The unique lattice guard in N[attack]; lattice placements dominate perfectly.
inline Cell responsible_guard(const LatticePlacement& lp, const Cell& attack) {
  std::optional<Cell> found;
  for (const Cell& c : closed_neighborhood(attack)) {
    if (!lp.contains(c)) continue;
    if (found) throw Error(ErrorCode::Internal, "two guards dominate " + to_string(attack));
    found = c;
  }
  if (!found) throw Error(ErrorCode::Internal, "no guard dominates " + to_string(attack));
  return *found;
}

/// Whole-lattice translation toward the attack.
inline std::pair<LatticePlacement, Direction> shift_step(const LatticePlacement& lp, const Cell& attack) {
  if (lp.contains(attack)) throw Error(ErrorCode::AttackOnGuard, to_string(attack));
  const Cell g = responsible_guard(lp, attack);
  const Direction d = *direction_of(attack - g);
  return {{lp.family, f_value(attack, lp.family)}, d};
}

/// A 2x2 block of unguarded cells next to a guard.
struct EmptySquare {
  Cell anchor;  // top-left
  int index = 0;
  bool primed = false;

  std::array<Cell, 4> cells() const {
    return {anchor, anchor + kRight, anchor + kDown, anchor + kDown + kRight};
  }
  bool contains(const Cell& c) const {
    return c.row >= anchor.row && c.row <= anchor.row + 1 && c.col >= anchor.col && c.col <= anchor.col + 1;
  }
  friend bool operator==(const EmptySquare&, const EmptySquare&) = default;
};

namespace detail {

// Top-left corners of the four empty squares, relative to the guard.
inline constexpr std::array<Cell, 4> kSquareAnchors{Cell{-1, 1}, Cell{1, 0}, Cell{0, -2}, Cell{-2, -1}};
// Transposed family. Index 2 is the block directly left of the guard
// spanning the guard's row and the one above.
inline constexpr std::array<Cell, 4> kPrimedSquareAnchors{Cell{0, 1}, Cell{1, -1}, Cell{-1, -2}, Cell{-2, 0}};

}  // namespace detail

inline std::array<EmptySquare, 4> empty_squares(Family family, const Cell& guard) {
  const bool primed = family == Family::Transposed;
  const auto& anchors = primed ? detail::kPrimedSquareAnchors : detail::kSquareAnchors;
  const Residue t = f_value(guard, family);
  std::array<EmptySquare, 4> out{};
  for (int i = 0; i < 4; ++i) {
    out[static_cast<std::size_t>(i)] = {guard + anchors[static_cast<std::size_t>(i)], i, primed};
    for (const Cell& c : out[static_cast<std::size_t>(i)].cells()) {
      if (f_value(c, family) == t) {
        throw Error(ErrorCode::Internal, "empty square " + std::to_string(i) + " holds a guard at " + to_string(c));
      }
    }
  }
  return out;
}

/// Literal residue expression a*x + b*y + c as printed next to a transition
/// table row, with x, y the responsible guard's coordinates.
struct StatedResidue {
  std::string_view text;
};

struct ParsedResidue {
  int x = 0;
  int y = 0;
  int c = 0;
  bool doubled_operator = false;  // e.g. "+ -3"
};

/// Parses "2x + y - 2" style expressions.
inline ParsedResidue parse_residue_expr(std::string_view s) {
  ParsedResidue out;
  int sign = 1;
  bool pending_op = false;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (ch == ' ') {
      ++i;
      continue;
    }
    if (ch == '+' || ch == '-') {
      if (pending_op) out.doubled_operator = true;
      if (ch == '-') sign = -sign;
      pending_op = true;
      ++i;
      continue;
    }
    int coef = 0;
    bool has_digits = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coef = coef * 10 + (s[i] - '0');
      has_digits = true;
      ++i;
    }
    if (i < s.size() && (s[i] == 'x' || s[i] == 'y')) {
      const int v = sign * (has_digits ? coef : 1);
      (s[i] == 'x' ? out.x : out.y) += v;
      ++i;
    } else if (has_digits) {
      out.c += sign * coef;
    } else {
      throw Error(ErrorCode::Parse, "bad residue expression '" + std::string(s) + "'");
    }
    sign = 1;
    pending_op = false;
  }
  return out;
}

/// One defence: attack direction relative to the responsible guard, the
/// four rotating guards around the pattern square and one guard that stays.
struct RotationCase {
  Family family;
  Direction attack;
  int attack_square;
  int pattern_square;
  std::array<Move, 4> rotation;  // relative to the responsible guard; rotation[0] is the guard itself
  Cell still;
  std::array<StatedResidue, 5> stated;  // rotation rows then the still row
};

// clang-format off
inline constexpr std::array<RotationCase, 8> kRotationCases{{
  {Family::Straight, Direction::Up, 3, 0,
   {{{{0, 0}, {-1, 0}}, {{-2, 1}, {-2, 2}}, {{-1, 3}, {0, 3}}, {{1, 2}, {1, 1}}}}, {-3, -1},
   {{{"2x + y - 2"}, {"2x + y - 2"}, {"2x + y + 3"}, {"2x + y + 3"}, {"2x + y - 2"}}}},
  {Family::Straight, Direction::Left, 2, 3,
   {{{{0, 0}, {0, -1}}, {{-1, -2}, {-2, -2}}, {{-3, -1}, {-3, 0}}, {{-2, 1}, {-1, 1}}}}, {1, 2},
   {{{"2x + y - 1"}, {"2x + y - 1"}, {"2x + y - 1"}, {"2x + y - 1"}, {"2x + y + 4"}}}},
  {Family::Straight, Direction::Down, 1, 2,
   {{{{0, 0}, {1, 0}}, {{2, -1}, {2, -2}}, {{1, -3}, {0, -3}}, {{-1, -2}, {-1, -1}}}}, {-2, 1},
   {{{"2x + y + 2"}, {"2x + y + 2"}, {"2x + y - 3"}, {"2x + y - 3"}, {"2x + y - 3"}}}},
  {Family::Straight, Direction::Right, 0, 1,
   {{{{0, 0}, {0, 1}}, {{1, 2}, {2, 2}}, {{3, 1}, {3, 0}}, {{2, -1}, {1, -1}}}}, {-1, 3},
   {{{"2x + y + 1"}, {"2x + y + 1"}, {"2x + y + 1"}, {"2x + y + 1"}, {"2x + y + 1"}}}},
  {Family::Transposed, Direction::Up, 3, 2,
   {{{{0, 0}, {-1, 0}}, {{-2, -1}, {-2, -2}}, {{-1, -3}, {0, -3}}, {{1, -2}, {1, -1}}}}, {-3, 1},
   {{{"x + 2y - 1"}, {"x + 2y - 1"}, {"x + 2y -1"}, {"x + 2y -1"}, {"x + 2y - 1"}}}},
  {Family::Transposed, Direction::Left, 2, 1,
   {{{{0, 0}, {0, -1}}, {{2, 1}, {1, 1}}, {{3, -1}, {3, 0}}, {{1, -2}, {2, -2}}}}, {-1, 2},
   {{{"x + 2y - 2"}, {"x + 2y + 3"}, {"x + 2y + 3"}, {"x + 2y - 2"}, {"x + 2y + 3"}}}},
  {Family::Transposed, Direction::Down, 1, 0,
   {{{{0, 0}, {1, 0}}, {{2, 1}, {2, 2}}, {{1, 3}, {0, 3}}, {{-1, 2}, {-1, 1}}}}, {-2, -1},
   {{{"x + 2y + 1"}, {"x + 2y + 1"}, {"x + y + 1"}, {"x + 2y + 1"}, {"x + 2y - 4"}}}},
  {Family::Transposed, Direction::Right, 0, 3,
   {{{{0, 0}, {0, 1}}, {{-1, 2}, {-2, 2}}, {{-3, 1}, {-3, 0}}, {{-2, -1}, {-1, -1}}}}, {1, 3},
   {{{"x + 2y + 2"}, {"x + 2y + 2"}, {"x + 2y - 3"}, {"x + 2y + -3"}, {"x + 2y + 2"}}}},
}};
// clang-format on

inline const RotationCase& rotation_case(Family family, Direction attack) {
  for (const RotationCase& rc : kRotationCases)
    if (rc.family == family && rc.attack == attack) return rc;
  throw Error(ErrorCode::Internal, "missing rotation case");
}

/// One symbolic defence. Local moves are relative to `guard`.
struct SymbolicStep {
  LatticePlacement before;
  Cell guard;
  Cell attack_offset;
  LatticePlacement after;
  EmptySquare pattern_square;
  MovePlan local_moves;  // four rotation moves then the still guard (identity)

  /// Displacement of any lattice guard of `before`: guards congruent mod 5
  /// in both coordinates to a local mover copy its move; the rest stay.
  Cell displacement(const Cell& p) const {
    const Cell rel = p - guard;
    for (const Move& mv : local_moves.moves) {
      if (mod5(rel.row - mv.from.row) == 0 && mod5(rel.col - mv.from.col) == 0) return mv.to - mv.from;
    }
    throw Error(ErrorCode::Internal, "cell " + to_string(p) + " is not a guard of " + to_string(before));
  }
};

inline SymbolicStep rotate_square_step(const LatticePlacement& lp, const Cell& attack) {
  if (lp.contains(attack)) throw Error(ErrorCode::AttackOnGuard, to_string(attack));
  const Cell g = responsible_guard(lp, attack);
  const auto dir = direction_of(attack - g);
  if (!dir) throw Error(ErrorCode::Internal, "attack not adjacent to its responsible guard");
  const RotationCase& rc = rotation_case(lp.family, *dir);

  const auto squares = empty_squares(lp.family, g);
  if (!squares[static_cast<std::size_t>(rc.attack_square)].contains(attack)) {
    throw Error(ErrorCode::Internal, "attacked cell is not in the expected empty square");
  }
  const int step = lp.family == Family::Straight ? 1 : 3;  // (i+1) or (i-1) mod 4
  if ((rc.attack_square + step) % 4 != rc.pattern_square) throw Error(ErrorCode::Internal, "pattern square rule");

  SymbolicStep out;
  out.before = lp;
  out.guard = g;
  out.attack_offset = attack - g;
  out.after = {flipped(lp.family), f_value(attack, flipped(lp.family))};
  out.pattern_square = squares[static_cast<std::size_t>(rc.pattern_square)];
  for (const Move& mv : rc.rotation) out.local_moves.moves.push_back(mv);
  out.local_moves.moves.push_back({rc.still, rc.still});

  for (const Move& mv : out.local_moves.moves) {
    if (!lp.contains(g + mv.from) || !out.after.contains(g + mv.to)) {
      throw Error(ErrorCode::Internal, "rotation move " + to_string(mv.from) + "->" + to_string(mv.to) +
                                           " does not connect the two lattices");
    }
  }
  return out;
}

/// The periodic plan restricted to the lattice guards inside `w`.
/// Targets may fall one cell outside `w`.
inline MovePlan expand_step(const SymbolicStep& step, const Window& w) {
  MovePlan plan;
  for (const Cell& p : lattice_cells(step.before, w)) plan.moves.push_back({p, p + step.displacement(p)});
  return plan;
}

struct StepVerification {
  MoveCheck move;
  bool matches_lattice = false;
  bool dominating = false;

  bool ok() const { return move.ok() && matches_lattice && dominating; }
};

/// Checks an arbitrary plan for a lattice defence inside a window.
inline StepVerification verify_plan_in_window(const LatticePlacement& before, const LatticePlacement& after,
                                              const Cell& attack, const Window& w, const MovePlan& plan) {
  StepVerification out;
  const GuardPlacement start = materialize(before, w);
  std::vector<Cell> targets;
  for (const Move& mv : plan.moves) targets.push_back(mv.to);
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
    out.move = {MoveError::DuplicateOccupancy, "plan sends two guards to one cell"};
    return out;
  }
  const GuardPlacement end(targets, Bound{});
  out.move = validate_move_plan(start, plan, attack, end);

  const auto inner1 = w.shrunk(1);
  const auto inner2 = w.shrunk(2);
  if (!inner1 || !inner2) throw Error(ErrorCode::BadDimensions, "window too small to verify");
  std::vector<Cell> inside;
  for (const Cell& c : targets)
    if (inner1->contains(c)) inside.push_back(c);
  out.matches_lattice = inside == lattice_cells(after, *inner1);
  out.dominating = dominates_region(end, *inner2);
  return out;
}

inline StepVerification verify_step_report(const LatticePlacement& lp, const Cell& attack, const Window& w) {
  if (!w.contains(attack) || !Window(w.row_lo + 4, w.row_hi - 4, w.col_lo + 4, w.col_hi - 4).contains(attack)) {
    throw Error(ErrorCode::BadDimensions, "window needs 4 cells of margin around the attack");
  }
  const SymbolicStep step = rotate_square_step(lp, attack);
  return verify_plan_in_window(lp, step.after, attack, w, expand_step(step, w));
}

inline bool verify_step_in_window(const LatticePlacement& lp, const Cell& attack, const Window& w) {
  return verify_step_report(lp, attack, w).ok();
}

/// Cross-check of one printed table row against the computed residue.
struct TableRowCheck {
  std::string_view stated;
  std::string computed;
  bool coefficients_match = false;
  bool constant_matches = false;
  bool doubled_operator = false;
};

struct TableCheck {
  const RotationCase* rotation = nullptr;
  int computed_t_offset = 0;  // t' - (the linear part), mod 5
  std::array<TableRowCheck, 5> rows{};
  bool consistent = false;  // all computed residues agree
};

inline std::string format_residue(int x, int y, int c) {
  auto term = [](int k, char v) {
    if (k == 0) return std::string();
    return (k == 1 ? std::string() : std::to_string(k)) + v;
  };
  std::string s = term(x, 'x');
  const std::string ty = term(y, 'y');
  if (!ty.empty()) s += (s.empty() ? "" : " + ") + ty;
  if (c != 0) s += (c > 0 ? " + " : " - ") + std::to_string(c > 0 ? c : -c);
  return s;
}

/// Recomputes the residue column of a rotation table from the moves alone.
inline TableCheck check_rotation_table(const RotationCase& rc) {
  TableCheck out;
  out.rotation = &rc;
  const Family after = flipped(rc.family);
  std::array<Move, 5> rows{};
  for (std::size_t i = 0; i < 4; ++i) rows[i] = rc.rotation[i];
  rows[4] = {rc.still, rc.still};
  out.consistent = true;
  for (std::size_t i = 0; i < 5; ++i) {
    const Cell d = rows[i].to;
    // f of (x + d.row, y + d.col) under the new family, as a*x + b*y + c.
    const int a = after == Family::Straight ? 1 : 2;
    const int b = after == Family::Straight ? 2 : 1;
    const int c = after == Family::Straight ? static_cast<int>(d.row + 2 * d.col)
                                            : static_cast<int>(d.col + 2 * d.row);
    if (i == 0) out.computed_t_offset = mod5(c);
    else if (mod5(c) != out.computed_t_offset) out.consistent = false;
    const ParsedResidue p = parse_residue_expr(rc.stated[i].text);
    TableRowCheck& row = out.rows[i];
    row.stated = rc.stated[i].text;
    row.coefficients_match = mod5(p.x) == a && mod5(p.y) == b;
    row.constant_matches = mod5(p.c) == mod5(c);
    // print the constant the way the stated row does when they agree
    row.computed = format_residue(a, b, row.constant_matches ? p.c : mod5(c));
    row.doubled_operator = p.doubled_operator;
  }
  return out;
}

/// The symbolic Rotate-Square game on the infinite grid.
class InfiniteGame {
 public:
  explicit InfiniteGame(LatticePlacement start) : current_(start) {}

  const LatticePlacement& placement() const { return current_; }

  SymbolicStep defend(const Cell& attack) {
    SymbolicStep s = rotate_square_step(current_, attack);
    current_ = s.after;
    return s;
  }

 private:
  LatticePlacement current_;
};

}  // namespace edom
