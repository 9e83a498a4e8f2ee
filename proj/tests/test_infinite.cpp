#include <gtest/gtest.h>

#include "edom/infinite.hpp"
#include "edom/verify.hpp"

using namespace edom;

namespace {

// Independent oracle: scan a materialized window for guards next to the attack.
Cell window_guard(const LatticePlacement& lp, const Cell& attack) {
  const GuardPlacement w = materialize(lp, Window::around(attack, 3));
  std::vector<Cell> found;
  for (const Cell& c : closed_neighborhood(attack))
    if (w.contains(c)) found.push_back(c);
  EXPECT_EQ(found.size(), 1u);
  return found.front();
}

}  // namespace

TEST(Infinite, ShiftStepGoldens) {
  const LatticePlacement d0{Family::Straight, Residue(0)};
  auto [up, dir_up] = shift_step(d0, {-1, 0});
  EXPECT_EQ(up, (LatticePlacement{Family::Straight, Residue(4)}));
  EXPECT_EQ(dir_up, Direction::Up);

  EXPECT_EQ(window_guard(d0, {0, 1}), (Cell{0, 0}));
  auto [right, dir_right] = shift_step(d0, {0, 1});
  EXPECT_EQ(right, (LatticePlacement{Family::Straight, Residue(2)}));
  EXPECT_EQ(dir_right, Direction::Right);

  EXPECT_EQ(window_guard(d0, {0, -1}), (Cell{0, 0}));
  auto [left, dir_left] = shift_step(d0, {0, -1});
  EXPECT_EQ(left, (LatticePlacement{Family::Straight, Residue(3)}));
  EXPECT_EQ(dir_left, Direction::Left);

  EXPECT_THROW(shift_step(d0, {0, 0}), Error);
}

// Shifting the whole lattice one step is itself a legal defence.
TEST(Infinite, ShiftStepIsLegalEverywhere) {
  for (const LatticePlacement& lp : all_lattices()) {
    Window(-2, 2, -2, 2).for_each([&](const Cell& a) {
      if (lp.contains(a)) return;
      auto [after, dir] = shift_step(lp, a);
      const Window w = Window::around(a, 8);
      MovePlan plan;
      for (const Cell& p : lattice_cells(lp, w)) plan.moves.push_back({p, p + offset(dir)});
      EXPECT_TRUE(verify_plan_in_window(lp, after, a, w, plan).ok());
    });
  }
}

TEST(Infinite, ResponsibleGuard) {
  EXPECT_EQ(responsible_guard({Family::Straight, Residue(0)}, {-1, 0}), (Cell{0, 0}));
  EXPECT_EQ(responsible_guard({Family::Straight, Residue(0)}, {0, -1}), (Cell{0, 0}));
  EXPECT_EQ(responsible_guard({Family::Transposed, Residue(0)}, {1, 0}), (Cell{0, 0}));
  for (const LatticePlacement& lp : all_lattices())
    Window(-6, 6, -6, 6).for_each([&](const Cell& a) { EXPECT_EQ(responsible_guard(lp, a), window_guard(lp, a)); });
}

TEST(Infinite, EmptySquares) {
  const auto sq = empty_squares(Family::Straight, {0, 0});
  EXPECT_EQ(sq[1].cells(), (std::array<Cell, 4>{Cell{1, 0}, Cell{1, 1}, Cell{2, 0}, Cell{2, 1}}));
  const auto sqp = empty_squares(Family::Transposed, {0, 0});
  EXPECT_EQ(sqp[0].cells(), (std::array<Cell, 4>{Cell{0, 1}, Cell{0, 2}, Cell{1, 1}, Cell{1, 2}}));
  EXPECT_EQ(sqp[2].cells(), (std::array<Cell, 4>{Cell{-1, -2}, Cell{-1, -1}, Cell{0, -2}, Cell{0, -1}}));
  // all four are guard-free and adjacent to the guard, for every guard
  for (const LatticePlacement& lp : all_lattices()) {
    for (const Cell& g : lattice_cells(lp, Window(-5, 5, -5, 5))) {
      for (const EmptySquare& s : empty_squares(lp.family, g)) {
        bool touches = false;
        for (const Cell& c : s.cells()) {
          EXPECT_FALSE(lp.contains(c));
          touches = touches || distance(c, g) == 1;
        }
        EXPECT_TRUE(touches);
      }
    }
  }
}

TEST(Infinite, RotateSquareExamples) {
  const Cell g{3, 4};
  const LatticePlacement lp{Family::Straight, f_value(g, Family::Straight)};
  const SymbolicStep up = rotate_square_step(lp, g + kUp);
  EXPECT_EQ(up.after, (LatticePlacement{Family::Transposed, Residue(2 * g.row + g.col - 2)}));
  const std::vector<Move> expected{{{0, 0}, {-1, 0}}, {{-2, 1}, {-2, 2}}, {{-1, 3}, {0, 3}}, {{1, 2}, {1, 1}}, {{-3, -1}, {-3, -1}}};
  EXPECT_EQ(up.local_moves.moves, expected);

  const SymbolicStep right = rotate_square_step(lp, g + kRight);
  EXPECT_EQ(right.after, (LatticePlacement{Family::Transposed, Residue(2 * g.row + g.col + 1)}));

  const LatticePlacement tp{Family::Transposed, f_value(g, Family::Transposed)};
  const SymbolicStep tright = rotate_square_step(tp, g + kRight);
  EXPECT_EQ(tright.after, (LatticePlacement{Family::Straight, Residue(g.row + 2 * g.col + 2)}));
}

TEST(Infinite, ExpandStepCopiesMovesPeriodically) {
  const LatticePlacement lp{Family::Straight, Residue(0)};
  const SymbolicStep s = rotate_square_step(lp, {-1, 0});
  const MovePlan plan = expand_step(s, Window::around({0, 0}, 10));
  auto target = [&](const Cell& from) {
    for (const Move& mv : plan.moves)
      if (mv.from == from) return mv.to;
    ADD_FAILURE() << "no move from " << to_string(from);
    return from;
  };
  for (const Cell& p : {Cell{-2, 1}, Cell{3, 1}, Cell{-7, 1}, Cell{-2, 6}, Cell{-2, -4}}) {
    EXPECT_EQ(target(p), p + kRight);
  }
}

TEST(Infinite, AllCasesVerifyInWindows) {
  const auto cases = check_symbolic_steps(10);
  ASSERT_EQ(cases.size(), 40u);
  for (const StepCase& c : cases) EXPECT_TRUE(c.result.ok()) << to_string(c.family) << " " << to_string(c.direction) << " t=" << c.t;
}

// Every unguarded cell of a window, not just the canonical offsets.
TEST(Infinite, EveryAttackNearOrigin) {
  for (const LatticePlacement& lp : all_lattices()) {
    Window(-3, 3, -3, 3).for_each([&](const Cell& a) {
      if (!lp.contains(a)) { EXPECT_TRUE(verify_step_in_window(lp, a, Window::around(a, 9))); }
    });
  }
}

TEST(Infinite, TableReconciliation) {
  int coefficient_typos = 0;
  int doubled = 0;
  for (const RotationCase& rc : kRotationCases) {
    const TableCheck tc = check_rotation_table(rc);
    EXPECT_TRUE(tc.consistent);
    for (const TableRowCheck& row : tc.rows) {
      EXPECT_TRUE(row.constant_matches) << row.stated;
      coefficient_typos += !row.coefficients_match;
      doubled += row.doubled_operator;
    }
  }
  EXPECT_EQ(coefficient_typos, 1);
  EXPECT_EQ(doubled, 1);
  const TableCheck td = check_rotation_table(rotation_case(Family::Transposed, Direction::Down));
  EXPECT_FALSE(td.rows[2].coefficients_match);
  EXPECT_EQ(td.rows[2].computed, "x + 2y + 1");
  const TableCheck tr = check_rotation_table(rotation_case(Family::Transposed, Direction::Right));
  EXPECT_TRUE(tr.rows[3].doubled_operator);
}

TEST(Infinite, ParseResidueExpressions) {
  const ParsedResidue a = parse_residue_expr("2x + y - 2");
  EXPECT_EQ(a.x, 2);
  EXPECT_EQ(a.y, 1);
  EXPECT_EQ(a.c, -2);
  const ParsedResidue b = parse_residue_expr("x + 2y + -3");
  EXPECT_EQ(b.c, -3);
  EXPECT_TRUE(b.doubled_operator);
  EXPECT_THROW(parse_residue_expr("x + ?"), Error);
}

TEST(Infinite, RandomPlayAlternatesFamilies) {
  const InfiniteRunReport r = run_infinite(2000, 11);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_TRUE(r.alternates);
}
