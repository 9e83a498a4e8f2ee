#pragma once

// The modular lattice placements {(r, c) : r + 2c = t (mod 5)} and their
// transposes, finite restrictions and counting, and the static dominating
// set built from an extended lattice.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edom/error.hpp"
#include "edom/grid.hpp"

namespace edom {

/// Non-negative remainder mod 5, exact for negative inputs.
constexpr int mod5(Coord v) { return static_cast<int>(((v % 5) + 5) % 5); }

class Residue {
 public:
  constexpr Residue() = default;
  constexpr explicit Residue(Coord v) : value_(mod5(v)) {}

  constexpr int value() const { return value_; }
  constexpr Residue operator+(Coord d) const { return Residue(value_ + d); }
  constexpr Residue operator-(Coord d) const { return Residue(value_ - d); }
  friend constexpr auto operator<=>(const Residue&, const Residue&) = default;

 private:
  int value_ = 0;
};

enum class Family : std::uint8_t { Straight = 0, Transposed = 1 };

constexpr Family flipped(Family f) { return f == Family::Straight ? Family::Transposed : Family::Straight; }

inline std::string_view to_string(Family f) { return f == Family::Straight ? "straight" : "transposed"; }

inline Family parse_family(std::string_view s) {
  if (s == "straight" || s == "D" || s == "S") return Family::Straight;
  if (s == "transposed" || s == "D'" || s == "T") return Family::Transposed;
  throw Error(ErrorCode::Parse, "unknown family '" + std::string(s) + "'");
}

/// r + 2c (straight) or c + 2r (transposed), mod 5.
constexpr Residue f_value(const Cell& c, Family family) {
  return family == Family::Straight ? Residue(c.row + 2 * c.col) : Residue(c.col + 2 * c.row);
}

/// Names one of the ten infinite lattice placements; nothing is stored.
struct LatticePlacement {
  Family family = Family::Straight;
  Residue t;

  constexpr bool contains(const Cell& c) const { return f_value(c, family) == t; }
  /// 0..4 straight, 5..9 transposed.
  constexpr int id() const { return static_cast<int>(family) * 5 + t.value(); }
  static constexpr LatticePlacement from_id(int id) {
    return {id < 5 ? Family::Straight : Family::Transposed, Residue(id % 5)};
  }
  friend constexpr auto operator<=>(const LatticePlacement&, const LatticePlacement&) = default;
};

inline std::string to_string(const LatticePlacement& lp) {
  return std::string(lp.family == Family::Straight ? "D" : "D'") + "_" + std::to_string(lp.t.value());
}

inline constexpr std::array<LatticePlacement, 10> all_lattices() {
  std::array<LatticePlacement, 10> out{};
  for (int i = 0; i < 10; ++i) out[static_cast<std::size_t>(i)] = LatticePlacement::from_id(i);
  return out;
}

inline std::vector<Cell> lattice_cells(const LatticePlacement& lp, const Window& w) {
  std::vector<Cell> out;
  w.for_each([&](const Cell& c) {
    if (lp.contains(c)) out.push_back(c);
  });
  return out;
}

inline GuardPlacement materialize(const LatticePlacement& lp, const Window& w) {
  return GuardPlacement(lattice_cells(lp, w), w);
}

inline GuardPlacement materialize(const LatticePlacement& lp, const GridDims& d) {
  return GuardPlacement(lattice_cells(lp, Window::of(d)), d);
}

/// |lattice ∩ (m x n grid at the origin)|, counted column class by column class.
inline Coord count_restriction(Coord m, Coord n, Residue t, Family family) {
  if (m < 1 || n < 1) throw Error(ErrorCode::BadDimensions, "count_restriction needs m, n >= 1");
  if (family == Family::Transposed) return count_restriction(n, m, t, Family::Straight);
  // Rows x in [0, m) with x = r (mod 5).
  auto rows_with = [m](int r) -> Coord { return r < m ? (m - 1 - r) / 5 + 1 : 0; };
  auto cols_with = [n](int c) -> Coord { return c < n ? (n - 1 - c) / 5 + 1 : 0; };
  Coord total = 0;
  for (int c = 0; c < 5; ++c) total += cols_with(c) * rows_with(mod5(t.value() - 2 * c));
  return total;
}

/// A residue with the largest restriction count; ties go to the smallest t.
inline Residue pick_max_residue(Coord m, Coord n, Family family) {
  Residue best(0);
  Coord best_count = -1;
  for (int t = 0; t < 5; ++t) {
    const Coord k = count_restriction(m, n, Residue(t), family);
    if (k > best_count) {
      best_count = k;
      best = Residue(t);
    }
  }
  return best;
}

/// floor((m+2)(n+2)/5) - 4.
constexpr Coord chang_bound(Coord m, Coord n) { return (m + 2) * (n + 2) / 5 - 4; }

namespace detail {

// Next k-combination of {0..n-1} in lexicographic order.
inline bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

// Re-places the guards inside one corner block with one guard fewer, keeping
// every cell near the corner dominated.
inline bool thin_corner(Occupancy& occ, const Cell& corner, Coord block) {
  const GridDims& d = occ.dims();
  const Coord r0 = corner.row == 0 ? 0 : d.m - block;
  const Coord c0 = corner.col == 0 ? 0 : d.n - block;
  std::vector<Cell> region;
  for (Coord r = r0; r < r0 + block; ++r)
    for (Coord c = c0; c < c0 + block; ++c) region.push_back({r, c});
  std::vector<Cell> watched;
  for (Coord r = r0 - 1; r <= r0 + block; ++r)
    for (Coord c = c0 - 1; c <= c0 + block; ++c)
      if (d.contains({r, c})) watched.push_back({r, c});

  std::vector<Cell> inside;
  for (const Cell& c : region)
    if (occ[c]) inside.push_back(c);
  if (inside.empty()) return false;
  for (const Cell& c : inside) occ.set(c, false);

  const int keep = static_cast<int>(inside.size()) - 1;
  std::vector<int> idx(static_cast<std::size_t>(keep));
  for (int i = 0; i < keep; ++i) idx[static_cast<std::size_t>(i)] = i;
  do {
    for (int i : idx) occ.set(region[static_cast<std::size_t>(i)], true);
    const bool ok = std::all_of(watched.begin(), watched.end(), [&](const Cell& c) { return occ.dominates(c); });
    if (ok) return true;
    for (int i : idx) occ.set(region[static_cast<std::size_t>(i)], false);
  } while (next_combination(idx, static_cast<int>(region.size())));

  for (const Cell& c : inside) occ.set(c, true);
  return false;
}

}  // namespace detail

/// Dominating set of the m x n grid with exactly chang_bound(m, n) guards:
/// a straight lattice on the grid extended by one ring, ring guards projected
/// inward, then each corner block re-placed with one guard fewer.
inline GuardPlacement chang_dominating_set(Coord m, Coord n) {
  if (m < 8 || n < 8) throw Error(ErrorCode::BadDimensions, "chang_dominating_set needs m, n >= 8");
  const GridDims dims(m, n);
  const Coord target = chang_bound(m, n);
  const Window extended(-1, m, -1, n);
  const std::array<Cell, 4> corners{Cell{0, 0}, Cell{0, n - 1}, Cell{m - 1, 0}, Cell{m - 1, n - 1}};

  for (Coord block : {4, 5}) {
    for (int t = 0; t < 5; ++t) {
      Occupancy occ(dims);
      Coord count = 0;
      for (const Cell& c : lattice_cells({Family::Straight, Residue(t)}, extended)) {
        const Cell p{std::clamp<Coord>(c.row, 0, m - 1), std::clamp<Coord>(c.col, 0, n - 1)};
        if (!occ[p]) {
          occ.set(p);
          ++count;
        }
      }
      if (count != target + 4) continue;
      bool ok = true;
      for (const Cell& corner : corners) {
        if (!detail::thin_corner(occ, corner, block)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<Cell> cells;
      for (std::size_t i = 0; i < dims.size(); ++i)
        if (occ[dims.cell(i)]) cells.push_back(dims.cell(i));
      GuardPlacement result(std::move(cells), dims);
      if (static_cast<Coord>(result.size()) == target && is_dominating(result)) return result;
    }
  }
  throw Error(ErrorCode::ConstructionFailed,
              "no residue/corner choice reached " + std::to_string(target) + " guards on " + std::to_string(m) +
                  "x" + std::to_string(n));
}

}  // namespace edom
