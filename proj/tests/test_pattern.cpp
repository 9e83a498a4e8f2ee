#include <gtest/gtest.h>

#include "edom/pattern.hpp"
#include "edom/verify.hpp"

#include <set>

using namespace edom;

TEST(Pattern, ResidueValues) {
  EXPECT_EQ(f_value({0, 0}, Family::Straight).value(), 0);
  EXPECT_EQ(f_value({1, 2}, Family::Straight).value(), 0);
  EXPECT_EQ(f_value({1, 2}, Family::Transposed).value(), 4);
  EXPECT_EQ(f_value({-1, 0}, Family::Straight).value(), 4);
  EXPECT_EQ(mod5(-11), 4);
}

TEST(Pattern, MaterializeSmallWindows) {
  const GuardPlacement p = materialize({Family::Straight, Residue(0)}, Window(0, 4, 0, 4));
  EXPECT_EQ(p.cells(), (std::vector<Cell>{{0, 0}, {1, 2}, {2, 4}, {3, 1}, {4, 3}}));
  EXPECT_TRUE(materialize({Family::Straight, Residue(1)}, Window(0, 0, 0, 0)).empty());

  // one guard per row and per column of any 5x5 window
  for (const LatticePlacement& lp : all_lattices()) {
    for (Coord r0 : {-3, 0, 8}) {
      const auto cells = lattice_cells(lp, Window(r0, r0 + 4, r0 - 1, r0 + 3));
      ASSERT_EQ(cells.size(), 5u);
      std::set<Coord> rows;
      std::set<Coord> cols;
      for (const Cell& c : cells) {
        rows.insert(c.row);
        cols.insert(c.col);
      }
      EXPECT_EQ(rows.size(), 5u);
      EXPECT_EQ(cols.size(), 5u);
    }
  }
}

TEST(Pattern, EveryLatticeIsPerfect) {
  const LatticeDominationReport r = check_lattice_domination(20, 2);
  EXPECT_TRUE(r.dominating);
  EXPECT_TRUE(r.perfect);
}

// A bare 5x5 restriction has 5 guards, but the 5x5 grid needs 7: edge cells
// lose their dominators outside the window.
TEST(Pattern, FiveByFiveRestrictionNeedsOutsideGuards) {
  for (const LatticePlacement& lp : all_lattices()) {
    const GuardPlacement on5 = materialize(lp, GridDims(5, 5));
    EXPECT_EQ(on5.size(), 5u);
    EXPECT_FALSE(is_dominating(on5)) << to_string(lp);
    const GuardPlacement wide = materialize(lp, Window(-1, 5, -1, 5));
    EXPECT_TRUE(dominates_region(wide, Window(0, 4, 0, 4))) << to_string(lp);
  }
}

TEST(Pattern, CountExamples) {
  for (int t = 0; t < 5; ++t) EXPECT_EQ(count_restriction(5, 5, Residue(t), Family::Straight), 5);
  std::set<Coord> seen;
  for (int t = 0; t < 5; ++t) {
    const Coord k = count_restriction(7, 7, Residue(t), Family::Straight);
    EXPECT_TRUE(k == 9 || k == 10);
    seen.insert(k);
  }
  EXPECT_EQ(seen, (std::set<Coord>{9, 10}));
  EXPECT_EQ(count_restriction(1, 1, Residue(0), Family::Straight), 1);
  EXPECT_THROW(count_restriction(0, 3, Residue(0), Family::Straight), Error);
}

TEST(Pattern, ClosedFormMatchesEnumeration) {
  for (Coord m = 1; m <= 30; ++m)
    for (Coord n = 1; n <= 30; ++n)
      for (const LatticePlacement& lp : all_lattices())
        ASSERT_EQ(count_restriction(m, n, lp.t, lp.family), enumerate_restriction(m, n, lp.t, lp.family))
            << m << "x" << n << " " << to_string(lp);
}

TEST(Pattern, CountBoundsAndExtremes) {
  const CountReport r = check_counts(50, 0);
  EXPECT_TRUE(r.bounds) << r.first_failure;
  EXPECT_TRUE(r.extremes) << r.first_failure;
}

TEST(Pattern, PickMaxResidueTieBreak) {
  EXPECT_EQ(pick_max_residue(5, 5, Family::Straight).value(), 0);
  const int t7 = pick_max_residue(7, 7, Family::Straight).value();
  EXPECT_EQ(count_restriction(7, 7, Residue(t7), Family::Straight), 10);
  for (int t = 0; t < t7; ++t) EXPECT_LT(count_restriction(7, 7, Residue(t), Family::Straight), 10);
  const int t2 = pick_max_residue(2, 2, Family::Straight).value();
  EXPECT_EQ(count_restriction(2, 2, Residue(t2), Family::Straight), 1);
  for (int t = 0; t < t2; ++t) EXPECT_LT(count_restriction(2, 2, Residue(t), Family::Straight), 1);
}

TEST(Pattern, ChangConstruction) {
  EXPECT_EQ(chang_dominating_set(8, 8).size(), 16u);
  EXPECT_EQ(chang_dominating_set(10, 10).size(), 24u);
  EXPECT_EQ(chang_dominating_set(8, 9).size(), 18u);
  for (Coord m = 8; m <= 20; ++m) {
    for (Coord n = 8; n <= 20; ++n) {
      const GuardPlacement p = chang_dominating_set(m, n);
      EXPECT_EQ(static_cast<Coord>(p.size()), chang_bound(m, n)) << m << "x" << n;
      EXPECT_TRUE(is_dominating(p)) << m << "x" << n;
    }
  }
  EXPECT_THROW(chang_dominating_set(7, 9), Error);
}
