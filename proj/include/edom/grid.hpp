#pragma once

// Grid geometry, domination predicates and the move-legality oracle.
//
// Coordinates are (row, col) with row r above row r+1 and column c left of
// column c+1. Cells are signed so that patterns on the infinite grid can be
// handled around the origin without offsets.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "edom/error.hpp"

namespace edom {

using Coord = std::int64_t;

struct Cell {
  Coord row = 0;
  Coord col = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
  constexpr Cell operator+(const Cell& o) const { return {row + o.row, col + o.col}; }
  constexpr Cell operator-(const Cell& o) const { return {row - o.row, col - o.col}; }
};

inline std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

/// Manhattan distance; moves are legal iff this is at most 1.
constexpr Coord distance(const Cell& a, const Cell& b) {
  const Coord dr = a.row > b.row ? a.row - b.row : b.row - a.row;
  const Coord dc = a.col > b.col ? a.col - b.col : b.col - a.col;
  return dr + dc;
}

inline constexpr Cell kUp{-1, 0};
inline constexpr Cell kDown{1, 0};
inline constexpr Cell kLeft{0, -1};
inline constexpr Cell kRight{0, 1};
inline constexpr Cell kOrthogonal[4] = {kUp, kDown, kLeft, kRight};

/// m rows by n columns, cells (0..m-1, 0..n-1).
struct GridDims {
  Coord m = 0;
  Coord n = 0;

  GridDims() = default;
  GridDims(Coord rows, Coord cols) : m(rows), n(cols) {
    if (m < 1 || n < 1) {
      throw Error(ErrorCode::BadDimensions,
                  "grid must be at least 1x1, got " + std::to_string(m) + "x" + std::to_string(n));
    }
  }

  friend bool operator==(const GridDims&, const GridDims&) = default;

  bool contains(const Cell& c) const { return c.row >= 0 && c.row < m && c.col >= 0 && c.col < n; }
  std::size_t size() const { return static_cast<std::size_t>(m * n); }
  std::size_t index(const Cell& c) const { return static_cast<std::size_t>(c.row * n + c.col); }
  Cell cell(std::size_t i) const { return {static_cast<Coord>(i) / n, static_cast<Coord>(i) % n}; }

  bool is_corner(const Cell& c) const {
    return contains(c) && (c.row == 0 || c.row == m - 1) && (c.col == 0 || c.col == n - 1);
  }
  /// Boundary ring cell that is not a corner.
  bool is_boundary(const Cell& c) const {
    return contains(c) && !is_corner(c) &&
           (c.row == 0 || c.row == m - 1 || c.col == 0 || c.col == n - 1);
  }
  bool is_ring(const Cell& c) const { return is_corner(c) || is_boundary(c); }
  bool is_interior(const Cell& c) const {
    return c.row >= 1 && c.row <= m - 2 && c.col >= 1 && c.col <= n - 2;
  }
};

/// Inclusive rectangle of cells; the finite stand-in for a piece of the infinite grid.
struct Window {
  Coord row_lo = 0;
  Coord row_hi = 0;
  Coord col_lo = 0;
  Coord col_hi = 0;

  Window() = default;
  Window(Coord rlo, Coord rhi, Coord clo, Coord chi) : row_lo(rlo), row_hi(rhi), col_lo(clo), col_hi(chi) {
    if (row_lo > row_hi || col_lo > col_hi) {
      throw Error(ErrorCode::BadDimensions, "window bounds are inverted");
    }
  }

  /// Square window of the given radius centred on `c`.
  static Window around(const Cell& c, Coord radius) {
    return {c.row - radius, c.row + radius, c.col - radius, c.col + radius};
  }
  static Window of(const GridDims& d) { return {0, d.m - 1, 0, d.n - 1}; }

  friend bool operator==(const Window&, const Window&) = default;

  bool contains(const Cell& c) const {
    return c.row >= row_lo && c.row <= row_hi && c.col >= col_lo && c.col <= col_hi;
  }
  Coord rows() const { return row_hi - row_lo + 1; }
  Coord cols() const { return col_hi - col_lo + 1; }
  /// Shrinks every side by `margin`; nullopt when nothing is left.
  std::optional<Window> shrunk(Coord margin) const {
    if (rows() <= 2 * margin || cols() <= 2 * margin) return std::nullopt;
    return Window(row_lo + margin, row_hi - margin, col_lo + margin, col_hi - margin);
  }

  template <class F>
  void for_each(F&& f) const {
    for (Coord r = row_lo; r <= row_hi; ++r)
      for (Coord c = col_lo; c <= col_hi; ++c) f(Cell{r, c});
  }
};

/// No bound means the infinite grid.
using Bound = std::variant<std::monostate, GridDims, Window>;

inline bool bound_contains(const Bound& b, const Cell& c) {
  if (const auto* d = std::get_if<GridDims>(&b)) return d->contains(c);
  if (const auto* w = std::get_if<Window>(&b)) return w->contains(c);
  return true;
}

/// c together with its orthogonal neighbours, clipped to the bound.
inline std::vector<Cell> closed_neighborhood(const Cell& c, const Bound& bound = {}) {
  std::vector<Cell> out;
  out.reserve(5);
  if (bound_contains(bound, c)) out.push_back(c);
  for (const Cell& d : kOrthogonal) {
    const Cell nb = c + d;
    if (bound_contains(bound, nb)) out.push_back(nb);
  }
  return out;
}

/// A set of distinct guard cells, kept sorted, all inside its bound.
class GuardPlacement {
 public:
  GuardPlacement() = default;
  GuardPlacement(std::vector<Cell> cells, Bound bound) : cells_(std::move(cells)), bound_(std::move(bound)) {
    std::sort(cells_.begin(), cells_.end());
    if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end()) {
      throw Error(ErrorCode::InvalidPlacement, "two guards share a cell");
    }
    for (const Cell& c : cells_) {
      if (!bound_contains(bound_, c)) throw Error(ErrorCode::InvalidPlacement, "guard outside bound at " + to_string(c));
    }
  }

  const std::vector<Cell>& cells() const { return cells_; }
  const Bound& bound() const { return bound_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  bool contains(const Cell& c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

  /// Same cells, ignoring the bound.
  bool same_cells(const GuardPlacement& o) const { return cells_ == o.cells_; }

 private:
  std::vector<Cell> cells_;
  Bound bound_;
};

struct Move {
  Cell from;
  Cell to;
  friend auto operator<=>(const Move&, const Move&) = default;
};

/// Guard assignment old cell -> new cell. Legality is not enforced here;
/// `validate_move_plan` is the single judge.
struct MovePlan {
  std::vector<Move> moves;

  void sort() { std::sort(moves.begin(), moves.end()); }
  std::size_t size() const { return moves.size(); }
  friend bool operator==(const MovePlan&, const MovePlan&) = default;
};

enum class MoveError {
  None,
  NotBijective,
  DistanceExceeded,
  AttackUncovered,
  CellOutOfBounds,
  DuplicateOccupancy,
};

inline std::string_view to_string(MoveError e) {
  switch (e) {
    case MoveError::None: return "OK";
    case MoveError::NotBijective: return "NOT_BIJECTIVE";
    case MoveError::DistanceExceeded: return "DISTANCE_EXCEEDED";
    case MoveError::AttackUncovered: return "ATTACK_UNCOVERED";
    case MoveError::CellOutOfBounds: return "CELL_OUT_OF_BOUNDS";
    case MoveError::DuplicateOccupancy: return "DUPLICATE_OCCUPANCY";
  }
  return "UNKNOWN";
}

struct MoveCheck {
  MoveError reason = MoveError::None;
  std::string detail;

  bool ok() const { return reason == MoveError::None; }
  explicit operator bool() const { return ok(); }
};

inline MoveCheck validate_move_plan(const GuardPlacement& before, const MovePlan& plan, const Cell& attack,
                                    const GuardPlacement& after) {
  for (const Move& mv : plan.moves) {
    if (!bound_contains(before.bound(), mv.from)) return {MoveError::CellOutOfBounds, "source " + to_string(mv.from)};
    if (!bound_contains(after.bound(), mv.to)) return {MoveError::CellOutOfBounds, "target " + to_string(mv.to)};
  }
  std::vector<Cell> from;
  std::vector<Cell> to;
  from.reserve(plan.size());
  to.reserve(plan.size());
  for (const Move& mv : plan.moves) {
    from.push_back(mv.from);
    to.push_back(mv.to);
  }
  std::sort(from.begin(), from.end());
  std::sort(to.begin(), to.end());
  if (auto it = std::adjacent_find(to.begin(), to.end()); it != to.end()) {
    return {MoveError::DuplicateOccupancy, "two guards end on " + to_string(*it)};
  }
  if (auto it = std::adjacent_find(from.begin(), from.end()); it != from.end()) {
    return {MoveError::NotBijective, "guard at " + to_string(*it) + " moved twice"};
  }
  if (from != before.cells()) return {MoveError::NotBijective, "plan sources differ from the placement"};
  if (to != after.cells()) return {MoveError::NotBijective, "plan targets differ from the expected placement"};
  for (const Move& mv : plan.moves) {
    if (distance(mv.from, mv.to) > 1) {
      return {MoveError::DistanceExceeded, to_string(mv.from) + "->" + to_string(mv.to)};
    }
  }
  if (!after.contains(attack)) return {MoveError::AttackUncovered, "no guard reaches " + to_string(attack)};
  return {};
}

/// Dense occupancy over a finite grid, for the hot domination checks.
class Occupancy {
 public:
  explicit Occupancy(const GridDims& dims) : dims_(dims), bits_(dims.size(), 0) {}
  Occupancy(const GridDims& dims, const std::vector<Cell>& cells) : Occupancy(dims) {
    for (const Cell& c : cells)
      if (dims_.contains(c)) bits_[dims_.index(c)] = 1;
  }

  const GridDims& dims() const { return dims_; }
  bool operator[](const Cell& c) const { return dims_.contains(c) && bits_[dims_.index(c)]; }
  void set(const Cell& c, bool v = true) { bits_[dims_.index(c)] = v ? 1 : 0; }

  bool dominates(const Cell& c) const {
    if ((*this)[c]) return true;
    for (const Cell& d : kOrthogonal)
      if ((*this)[c + d]) return true;
    return false;
  }
  int dominator_count(const Cell& c) const {
    int k = (*this)[c] ? 1 : 0;
    for (const Cell& d : kOrthogonal) k += (*this)[c + d] ? 1 : 0;
    return k;
  }

 private:
  GridDims dims_;
  std::vector<std::uint8_t> bits_;
};

namespace detail {

inline int count_dominators(const GuardPlacement& p, const Cell& c) {
  int k = 0;
  for (const Cell& nb : closed_neighborhood(c))
    if (p.contains(nb)) ++k;
  return k;
}

}  // namespace detail

/// True iff every cell of `region` has a guard in its closed neighbourhood.
inline bool dominates_region(const GuardPlacement& p, const Window& region) {
  bool ok = true;
  region.for_each([&](const Cell& c) {
    if (ok && detail::count_dominators(p, c) == 0) ok = false;
  });
  return ok;
}

/// Requires a placement bound to a finite grid (or window, taken as the whole graph).
inline bool is_dominating(const GuardPlacement& p) {
  if (const auto* d = std::get_if<GridDims>(&p.bound())) {
    const Occupancy occ(*d, p.cells());
    for (std::size_t i = 0; i < d->size(); ++i)
      if (!occ.dominates(d->cell(i))) return false;
    return true;
  }
  if (const auto* w = std::get_if<Window>(&p.bound())) return dominates_region(p, *w);
  throw Error(ErrorCode::InvalidPlacement, "is_dominating needs a finite bound");
}

/// Every cell of `region` has exactly one guard in its closed neighbourhood.
inline bool is_perfect_on(const GuardPlacement& p, const Window& region) {
  bool ok = true;
  region.for_each([&](const Cell& c) {
    if (ok && detail::count_dominators(p, c) != 1) ok = false;
  });
  return ok;
}

/// Bipartite matching between two equal-size guard sets, an edge wherever
/// two cells are within distance 1. Buffers are reused across calls.
class TransitionMatcher {
 public:
  /// Finds a full matching; on success `assignment()[i]` is the index in
  /// `to` matched with `from[i]`. Both spans must be sorted.
  bool match(const std::vector<Cell>& from, const std::vector<Cell>& to) {
    const std::size_t k = from.size();
    if (k != to.size()) return false;
    adj_.assign(k * 5, kNone);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t slot = 0;
      auto add = [&](const Cell& c) {
        auto it = std::lower_bound(to.begin(), to.end(), c);
        if (it != to.end() && *it == c) adj_[i * 5 + slot++] = static_cast<std::size_t>(it - to.begin());
      };
      add(from[i]);
      for (const Cell& d : kOrthogonal) add(from[i] + d);
      if (slot == 0) return false;
    }
    match_to_.assign(k, kNone);
    match_from_.assign(k, kNone);
    for (std::size_t i = 0; i < k; ++i) {
      seen_.assign(k, 0);
      if (!augment(i)) return false;
    }
    return true;
  }

  const std::vector<std::size_t>& assignment() const { return match_from_; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t u) {
    for (std::size_t s = 0; s < 5; ++s) {
      const std::size_t v = adj_[u * 5 + s];
      if (v == kNone) break;
      if (seen_[v]) continue;
      seen_[v] = 1;
      if (match_to_[v] == kNone || augment(match_to_[v])) {
        match_to_[v] = u;
        match_from_[u] = v;
        return true;
      }
    }
    return false;
  }

  std::vector<std::size_t> adj_;
  std::vector<std::size_t> match_to_;
  std::vector<std::size_t> match_from_;
  std::vector<std::uint8_t> seen_;
};

/// A legal plan from `before` to `after` answering `attack`, if one exists.
inline std::optional<MovePlan> find_transition(const GuardPlacement& before, const Cell& attack,
                                               const GuardPlacement& after) {
  if (before.size() != after.size() || !after.contains(attack) || before.contains(attack)) return std::nullopt;
  TransitionMatcher matcher;
  if (!matcher.match(before.cells(), after.cells())) return std::nullopt;
  MovePlan plan;
  for (std::size_t i = 0; i < before.size(); ++i) {
    plan.moves.push_back({before.cells()[i], after.cells()[matcher.assignment()[i]]});
  }
  return plan;
}

inline bool transition_exists(const GuardPlacement& before, const Cell& attack, const GuardPlacement& after) {
  return find_transition(before, attack, after).has_value();
}

/// One text line per row: '#' guard, '.' empty, '!' attacked cell.
inline std::string render(const std::vector<Cell>& guards, const Window& w, std::optional<Cell> attack = std::nullopt) {
  std::vector<Cell> sorted = guards;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  out.reserve(static_cast<std::size_t>(w.rows() * (w.cols() + 1)));
  for (Coord r = w.row_lo; r <= w.row_hi; ++r) {
    for (Coord c = w.col_lo; c <= w.col_hi; ++c) {
      const Cell cell{r, c};
      if (attack && *attack == cell) out += '!';
      else out += std::binary_search(sorted.begin(), sorted.end(), cell) ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

inline std::string render(const GuardPlacement& p, std::optional<Cell> attack = std::nullopt) {
  if (const auto* d = std::get_if<GridDims>(&p.bound())) return render(p.cells(), Window::of(*d), attack);
  if (const auto* w = std::get_if<Window>(&p.bound())) return render(p.cells(), *w, attack);
  throw Error(ErrorCode::InvalidPlacement, "render needs a finite bound");
}

/// Inverse of `render` for golden files; the bound is the parsed rectangle.
inline GuardPlacement parse_rendering(std::string_view text, Cell origin = {0, 0}) {
  std::vector<Cell> cells;
  Coord row = 0;
  Coord width = -1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    if (!line.empty()) {
      if (width >= 0 && static_cast<Coord>(line.size()) != width) throw Error(ErrorCode::Parse, "ragged rendering");
      width = static_cast<Coord>(line.size());
      for (Coord c = 0; c < width; ++c) {
        const char ch = line[static_cast<std::size_t>(c)];
        if (ch == '#') cells.push_back({origin.row + row, origin.col + c});
        else if (ch != '.' && ch != '!') throw Error(ErrorCode::Parse, std::string("bad glyph '") + ch + "'");
      }
      ++row;
    }
    pos = end + 1;
  }
  if (row == 0) throw Error(ErrorCode::Parse, "empty rendering");
  return GuardPlacement(std::move(cells), Window(origin.row, origin.row + row - 1, origin.col, origin.col + width - 1));
}

}  // namespace edom
