#include <gtest/gtest.h>

#include "edom/grid.hpp"

using namespace edom;

namespace {

std::vector<Cell> sorted(std::vector<Cell> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Grid, ClosedNeighborhoodClipsToBound) {
  EXPECT_EQ(sorted(closed_neighborhood({0, 0}, GridDims(3, 3))), sorted({{0, 0}, {0, 1}, {1, 0}}));
  EXPECT_EQ(sorted(closed_neighborhood({1, 1}, GridDims(3, 3))), sorted({{1, 1}, {0, 1}, {2, 1}, {1, 0}, {1, 2}}));
  EXPECT_EQ(sorted(closed_neighborhood({5, 5})), sorted({{5, 5}, {4, 5}, {6, 5}, {5, 4}, {5, 6}}));
}

TEST(Grid, RingClassificationIsDisjoint) {
  for (Coord m = 3; m <= 9; ++m) {
    for (Coord n = 3; n <= 9; ++n) {
      const GridDims d(m, n);
      int corners = 0;
      int boundary = 0;
      int interior = 0;
      Window::of(d).for_each([&](const Cell& c) {
        const int kinds = d.is_corner(c) + d.is_boundary(c) + d.is_interior(c);
        EXPECT_EQ(kinds, 1);
        corners += d.is_corner(c);
        boundary += d.is_boundary(c);
        interior += d.is_interior(c);
      });
      EXPECT_EQ(corners, 4);
      EXPECT_EQ(boundary, 2 * (m + n) - 8);
      EXPECT_EQ(interior, (m - 2) * (n - 2));
    }
  }
  EXPECT_THROW(GridDims(0, 3), Error);
}

TEST(Grid, PlacementRejectsDuplicatesAndStrays) {
  EXPECT_THROW(GuardPlacement({{0, 0}, {0, 0}}, GridDims(2, 2)), Error);
  EXPECT_THROW(GuardPlacement({{2, 0}}, GridDims(2, 2)), Error);
  EXPECT_NO_THROW(GuardPlacement({{-7, 3}}, Bound{}));
}

TEST(Grid, Domination) {
  EXPECT_FALSE(is_dominating(GuardPlacement({{1, 1}}, GridDims(3, 3))));
  EXPECT_TRUE(is_dominating(GuardPlacement({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, GridDims(2, 2))));
  EXPECT_FALSE(is_perfect_on(GuardPlacement({{1, 1}, {1, 2}}, GridDims(3, 4)), Window(1, 1, 0, 3)));
  EXPECT_FALSE(is_perfect_on(GuardPlacement({}, GridDims(3, 3)), Window(0, 2, 0, 2)));
  EXPECT_THROW(is_dominating(GuardPlacement({{0, 0}}, Bound{})), Error);
}

TEST(Grid, MoveValidationOnPaths) {
  const GridDims p3(1, 3);
  const GuardPlacement before({{0, 1}}, p3);
  const GuardPlacement left({{0, 0}}, p3);
  EXPECT_TRUE(validate_move_plan(before, {{{{0, 1}, {0, 0}}}}, {0, 0}, left).ok());
  EXPECT_EQ(validate_move_plan(before, {{{{0, 1}, {0, 0}}}}, {0, 2}, left).reason, MoveError::AttackUncovered);

  const GuardPlacement ends({{0, 0}, {0, 2}}, GridDims(1, 4));
  const GuardPlacement shifted({{0, 1}, {0, 3}}, GridDims(1, 4));
  EXPECT_EQ(validate_move_plan(ends, {{{{0, 0}, {0, 2}}, {{0, 2}, {0, 3}}}}, {0, 3}, shifted).reason,
            MoveError::NotBijective);
  EXPECT_EQ(validate_move_plan(ends, {{{{0, 0}, {0, 1}}, {{0, 2}, {0, 1}}}}, {0, 1}, shifted).reason,
            MoveError::DuplicateOccupancy);
  EXPECT_EQ(validate_move_plan(GuardPlacement({{0, 0}}, p3), {{{{0, 0}, {0, 2}}}}, {0, 2},
                               GuardPlacement({{0, 2}}, p3))
                .reason,
            MoveError::DistanceExceeded);
  EXPECT_EQ(validate_move_plan(left, {{{{0, 0}, {0, -1}}}}, {0, 0}, left).reason, MoveError::CellOutOfBounds);
}

TEST(Grid, TransitionExistsByMatching) {
  const GridDims p3(1, 3);
  EXPECT_TRUE(transition_exists(GuardPlacement({{0, 1}}, p3), {0, 0}, GuardPlacement({{0, 0}}, p3)));
  EXPECT_FALSE(transition_exists(GuardPlacement({{0, 0}}, p3), {0, 2}, GuardPlacement({{0, 2}}, p3)));
  const GridDims p4(1, 4);
  const GuardPlacement a({{0, 0}, {0, 2}}, p4);
  const GuardPlacement b({{0, 1}, {0, 3}}, p4);
  const auto plan = find_transition(a, {0, 3}, b);
  ASSERT_TRUE(plan);
  EXPECT_TRUE(validate_move_plan(a, *plan, {0, 3}, b).ok());
}

// Matching agrees with brute force over all bijections on random small cases.
TEST(Grid, MatchingAgreesWithPermutations) {
  const GridDims d(3, 4);
  std::uint64_t state = 12345;
  auto next = [&] { return state = state * 6364136223846793005ULL + 1442695040888963407ULL; };
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Cell> all;
    Window::of(d).for_each([&](const Cell& c) { all.push_back(c); });
    auto pick = [&](int k) {
      std::vector<Cell> pool = all;
      std::vector<Cell> out;
      for (int i = 0; i < k; ++i) {
        const auto j = next() % pool.size();
        out.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<long>(j));
      }
      return GuardPlacement(out, d);
    };
    const int k = 1 + static_cast<int>(next() % 4);
    const GuardPlacement a = pick(k);
    const GuardPlacement b = pick(k);
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    bool brute = false;
    do {
      bool ok = true;
      for (int i = 0; i < k; ++i)
        if (distance(a.cells()[static_cast<std::size_t>(i)], b.cells()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]) > 1)
          ok = false;
      brute = brute || ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    TransitionMatcher m;
    EXPECT_EQ(m.match(a.cells(), b.cells()), brute);
  }
}

TEST(Grid, RenderRoundTrip) {
  const GuardPlacement p({{0, 1}, {1, 3}, {2, 0}}, GridDims(3, 4));
  const std::string text = render(p, Cell{0, 0});
  EXPECT_EQ(text, "!#..\n...#\n#...\n");
  EXPECT_TRUE(parse_rendering(text).same_cells(p));
  EXPECT_THROW(parse_rendering("#.\n#\n"), Error);
}
