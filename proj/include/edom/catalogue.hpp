#pragma once

// The 7x7 catalogue behind the partial-boundary strategy: ten placements
// (one per lattice) made of the lattice inside the 5x5 interior, the four
// corners and three guards on each 5-cell side, plus a legal response to
// every attack that lands in the catalogue again.
//
// Responses are built so that they can be replicated block by block on any
// m x n grid with m = n = 2 (mod 5): interior guards follow a periodic
// Rotate-Square field and side guards never leave their own segment.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "edom/error.hpp"
#include "edom/grid.hpp"
#include "edom/infinite.hpp"
#include "edom/pattern.hpp"

namespace edom {

inline constexpr int kCatalogueVersion = 1;
inline constexpr Coord kCatalogueSize = 7;

struct CatalogueTransition {
  int to = 0;
  MovePlan plan;  // 7x7 coordinates, sorted by source
  friend bool operator==(const CatalogueTransition&, const CatalogueTransition&) = default;
};

struct Catalogue7x7 {
  int version = kCatalogueVersion;
  std::array<std::vector<Cell>, 10> placements;             // index = lattice id
  std::array<std::map<Cell, CatalogueTransition>, 10> transitions;  // keyed by attacked cell

  GuardPlacement placement(int id) const {
    return GuardPlacement(placements[static_cast<std::size_t>(id)], GridDims(kCatalogueSize, kCatalogueSize));
  }
  const CatalogueTransition& transition(int from, const Cell& attack) const {
    const auto& table = transitions[static_cast<std::size_t>(from)];
    auto it = table.find(attack);
    if (it == table.end()) throw Error(ErrorCode::NotFound, "no catalogue response to " + to_string(attack));
    return it->second;
  }
  friend bool operator==(const Catalogue7x7&, const Catalogue7x7&) = default;
};

enum class Side : std::uint8_t { Top, Bottom, Left, Right };
inline constexpr std::array<Side, 4> kSides{Side::Top, Side::Bottom, Side::Left, Side::Right};

inline std::string_view to_string(Side s) {
  switch (s) {
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
    case Side::Left: return "left";
    case Side::Right: return "right";
  }
  return "?";
}

/// Cell `pos` (0..4) of a 7x7 side, ordered by increasing column or row.
constexpr Cell side_cell(Side s, int pos) {
  switch (s) {
    case Side::Top: return {0, pos + 1};
    case Side::Bottom: return {kCatalogueSize - 1, pos + 1};
    case Side::Left: return {pos + 1, 0};
    case Side::Right: return {pos + 1, kCatalogueSize - 1};
  }
  return {};
}

inline std::optional<std::pair<Side, int>> side_of(const Cell& c) {
  const GridDims d(kCatalogueSize, kCatalogueSize);
  if (!d.is_boundary(c)) return std::nullopt;
  if (c.row == 0) return std::pair{Side::Top, static_cast<int>(c.col - 1)};
  if (c.row == kCatalogueSize - 1) return std::pair{Side::Bottom, static_cast<int>(c.col - 1)};
  if (c.col == 0) return std::pair{Side::Left, static_cast<int>(c.row - 1)};
  return std::pair{Side::Right, static_cast<int>(c.row - 1)};
}

// ---------------------------------------------------------------------------
// Serialization: one placement or transition per line, [row,col] pairs.

inline std::string serialize(const Catalogue7x7& cat) {
  auto cell = [](const Cell& c) { return "[" + std::to_string(c.row) + "," + std::to_string(c.col) + "]"; };
  std::ostringstream os;
  os << "{\n";
  os << "\"format\": \"edom-catalogue-7x7\",\n";
  os << "\"version\": " << cat.version << ",\n";
  os << "\"grid\": [7,7],\n";
  os << "\"fields\": {\"placements\": [\"id\",\"family\",\"t\",\"cells\"], "
        "\"transitions\": [\"from\",\"attack\",\"to\",\"plan\"]},\n";
  os << "\"placements\": [\n";
  for (int id = 0; id < 10; ++id) {
    const LatticePlacement lp = LatticePlacement::from_id(id);
    os << "{\"id\": " << id << ", \"family\": \"" << to_string(lp.family) << "\", \"t\": " << lp.t.value()
       << ", \"cells\": [";
    const auto& cells = cat.placements[static_cast<std::size_t>(id)];
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cell(cells[i]);
    os << "]}" << (id < 9 ? "," : "") << "\n";
  }
  os << "],\n";
  os << "\"transitions\": [\n";
  bool first = true;
  for (int id = 0; id < 10; ++id) {
    for (const auto& [attack, tr] : cat.transitions[static_cast<std::size_t>(id)]) {
      if (!first) os << ",\n";
      first = false;
      os << "{\"from\": " << id << ", \"attack\": " << cell(attack) << ", \"to\": " << tr.to << ", \"plan\": [";
      for (std::size_t i = 0; i < tr.plan.moves.size(); ++i) {
        os << (i ? "," : "") << "[" << cell(tr.plan.moves[i].from) << "," << cell(tr.plan.moves[i].to) << "]";
      }
      os << "]}";
    }
  }
  os << "\n]\n}\n";
  return os.str();
}

inline Catalogue7x7 parse_catalogue(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  auto cell = [](const nlohmann::json& a) { return Cell{a.at(0).get<Coord>(), a.at(1).get<Coord>()}; };
  try {
    if (j.at("format") != "edom-catalogue-7x7") throw Error(ErrorCode::Parse, "not a 7x7 catalogue");
    Catalogue7x7 cat;
    cat.version = j.at("version").get<int>();
    if (cat.version != kCatalogueVersion) {
      throw Error(ErrorCode::Parse, "unsupported catalogue version " + std::to_string(cat.version));
    }
    for (const auto& p : j.at("placements")) {
      const int id = p.at("id").get<int>();
      if (id < 0 || id > 9) throw Error(ErrorCode::Parse, "placement id out of range");
      auto& cells = cat.placements[static_cast<std::size_t>(id)];
      for (const auto& c : p.at("cells")) cells.push_back(cell(c));
      std::sort(cells.begin(), cells.end());
    }
    for (const auto& t : j.at("transitions")) {
      CatalogueTransition tr;
      tr.to = t.at("to").get<int>();
      for (const auto& mv : t.at("plan")) tr.plan.moves.push_back({cell(mv.at(0)), cell(mv.at(1))});
      const int from = t.at("from").get<int>();
      if (from < 0 || from > 9 || tr.to < 0 || tr.to > 9) throw Error(ErrorCode::Parse, "transition id out of range");
      cat.transitions[static_cast<std::size_t>(from)][cell(t.at("attack"))] = std::move(tr);
    }
    return cat;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

// ---------------------------------------------------------------------------
// Derivation.

namespace catalogue_detail {

using Mask = std::uint8_t;  // 5 bits, one per side position

struct Field {
  std::array<Cell, 5> disp{};  // displacement per lattice class, keyed by (row mod 5)
  LatticePlacement after;
  friend bool operator==(const Field& a, const Field& b) { return a.disp == b.disp && a.after == b.after; }
};

// Lattice guards have distinct rows mod 5, so the row residue names the class.
inline Field field_of(const SymbolicStep& step) {
  Field f;
  f.after = step.after;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const Cell p{r, c};
      if (step.before.contains(p)) f.disp[static_cast<std::size_t>(r)] = step.displacement(p);
    }
  }
  return f;
}

inline Cell disp_of(const Field& f, const Cell& p) { return f.disp[static_cast<std::size_t>(mod5(p.row))]; }

inline bool interior7(const Cell& c) { return c.row >= 1 && c.row <= 5 && c.col >= 1 && c.col <= 5; }

struct SideEffect {
  Mask entries = 0;  // side positions whose guard steps into the interior
  Mask exits = 0;    // side positions an interior guard steps onto
};

inline SideEffect side_effect(const LatticePlacement& lp, const Field& f, Side s) {
  SideEffect e;
  for (int pos = 0; pos < 5; ++pos) {
    const Cell c = side_cell(s, pos);
    if (lp.contains(c) && interior7(c + disp_of(f, c))) e.entries |= static_cast<Mask>(1u << pos);
    for (const Cell& d : kOrthogonal) {
      const Cell p = c + d;
      if (interior7(p) && lp.contains(p) && p + disp_of(f, p) == c) e.exits |= static_cast<Mask>(1u << pos);
    }
  }
  return e;
}

inline int popcount(Mask m) { return __builtin_popcount(m); }

/// Side guards not entering the interior, matched in order to free target
/// cells along the 5-cell path (sorted matching is optimal on a line).
inline std::optional<std::vector<std::pair<int, int>>> side_matching(Mask before, const SideEffect& e, Mask after,
                                                                     int must = -1) {
  if ((e.entries & ~before) || (e.exits & ~after)) return std::nullopt;
  if (must >= 0 && !(after & (1u << must))) return std::nullopt;
  const Mask src = before & static_cast<Mask>(~e.entries);
  const Mask dst = after & static_cast<Mask>(~e.exits);
  if (popcount(src) != popcount(dst)) return std::nullopt;
  std::vector<std::pair<int, int>> pairs;
  int j = 0;
  for (int i = 0; i < 5; ++i) {
    if (!(src & (1u << i))) continue;
    while (!(dst & (1u << j))) ++j;
    if (std::abs(i - j) > 1) return std::nullopt;
    pairs.push_back({i, j});
    ++j;
  }
  return pairs;
}

struct Problem {
  // covers[state][side] = the six allowed 3-of-5 masks containing the lattice cell
  std::array<std::array<std::vector<Mask>, 4>, 10> covers;
  // per state: the periodic field for each unguarded interior cell, and the distinct fields
  std::array<std::map<Cell, Field>, 10> interior_fields;
  std::array<std::vector<Field>, 10> candidates;
};

inline Problem build_problem() {
  Problem p;
  for (int id = 0; id < 10; ++id) {
    const LatticePlacement lp = LatticePlacement::from_id(id);
    for (Side s : kSides) {
      int lattice_pos = -1;
      for (int pos = 0; pos < 5; ++pos)
        if (lp.contains(side_cell(s, pos))) lattice_pos = pos;
      if (lattice_pos < 0) throw Error(ErrorCode::Internal, "side without a lattice cell");
      auto& out = p.covers[static_cast<std::size_t>(id)][static_cast<std::size_t>(s)];
      for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
          if (a != lattice_pos && b != lattice_pos) out.push_back(static_cast<Mask>((1u << lattice_pos) | (1u << a) | (1u << b)));
    }
    for (Coord r = 1; r <= 5; ++r) {
      for (Coord c = 1; c <= 5; ++c) {
        const Cell a{r, c};
        if (lp.contains(a)) continue;
        const Field f = field_of(rotate_square_step(lp, a));
        p.interior_fields[static_cast<std::size_t>(id)][a] = f;
        auto& cand = p.candidates[static_cast<std::size_t>(id)];
        if (std::find(cand.begin(), cand.end(), f) == cand.end()) cand.push_back(f);
      }
    }
  }
  return p;
}

// Per-side cover assignment: index into covers[state][side] for each state.
using SideAssignment = std::array<std::uint8_t, 10>;

inline std::vector<SideAssignment> side_solutions(const Problem& p, Side s) {
  const auto si = static_cast<std::size_t>(s);
  // compat[a][i][b][j]: every interior attack a->b keeps side s realisable
  std::vector<std::uint8_t> compat(10 * 6 * 10 * 6, 1);
  std::vector<std::uint8_t> related(100, 0);
  auto at = [](int a, int i, int b, int j) { return static_cast<std::size_t>(((a * 6 + i) * 10 + b) * 6 + j); };
  for (int a = 0; a < 10; ++a) {
    const LatticePlacement lp = LatticePlacement::from_id(a);
    for (const auto& [cell, f] : p.interior_fields[static_cast<std::size_t>(a)]) {
      const int b = f.after.id();
      related[static_cast<std::size_t>(a * 10 + b)] = 1;
      const SideEffect e = side_effect(lp, f, s);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          if (!side_matching(p.covers[static_cast<std::size_t>(a)][si][static_cast<std::size_t>(i)], e,
                             p.covers[static_cast<std::size_t>(b)][si][static_cast<std::size_t>(j)]))
            compat[at(a, i, b, j)] = 0;
    }
  }
  std::vector<SideAssignment> out;
  SideAssignment cur{};
  auto rec = [&](auto&& self, int k) -> void {
    if (k == 10) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v < 6; ++v) {
      cur[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(v);
      bool ok = true;
      for (int o = 0; o <= k && ok; ++o) {
        const int vo = cur[static_cast<std::size_t>(o)];
        if (related[static_cast<std::size_t>(o * 10 + k)] && !compat[at(o, vo, k, v)]) ok = false;
        if (related[static_cast<std::size_t>(k * 10 + o)] && !compat[at(k, v, o, vo)]) ok = false;
      }
      if (ok) self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

// Feasibility masks of one side assignment: for each state, which candidate
// fields keep the side realisable, with and without a forced cell.
struct SideProfile {
  std::array<std::uint32_t, 10> free{};
  std::array<std::array<std::uint32_t, 5>, 10> forced{};  // by attacked position
};

inline SideProfile profile(const Problem& p, Side s, const SideAssignment& asg) {
  const auto si = static_cast<std::size_t>(s);
  SideProfile out;
  for (int a = 0; a < 10; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    const LatticePlacement lp = LatticePlacement::from_id(a);
    const Mask before = p.covers[ai][si][asg[ai]];
    const auto& cand = p.candidates[ai];
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const auto bi = static_cast<std::size_t>(cand[k].after.id());
      const Mask after = p.covers[bi][si][asg[bi]];
      const SideEffect e = side_effect(lp, cand[k], s);
      if (side_matching(before, e, after)) out.free[ai] |= 1u << k;
      for (int pos = 0; pos < 5; ++pos) {
        if (before & (1u << pos)) continue;
        if (side_matching(before, e, after, pos)) out.forced[ai][static_cast<std::size_t>(pos)] |= 1u << k;
      }
    }
  }
  return out;
}

// Every side attack on `mine` has a field that the other sides also accept.
inline bool side_attacks_ok(const Problem& p, Side s, const SideAssignment& asg, const SideProfile& mine,
                            const std::array<std::uint32_t, 10>& others_free) {
  for (int a = 0; a < 10; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    const Mask before = p.covers[ai][static_cast<std::size_t>(s)][asg[ai]];
    for (int pos = 0; pos < 5; ++pos) {
      if (before & (1u << pos)) continue;
      if (!(mine.forced[ai][static_cast<std::size_t>(pos)] & others_free[ai])) return false;
    }
  }
  return true;
}

}  // namespace catalogue_detail

/// Searches side covers and responses; deterministic. Throws NO_CLOSURE when
/// no combination closes.
inline Catalogue7x7 derive_catalogue_7x7() {
  using namespace catalogue_detail;
  const Problem p = build_problem();

  std::array<std::vector<SideAssignment>, 4> sols;
  std::array<std::vector<SideProfile>, 4> profs;
  for (Side s : kSides) {
    const auto si = static_cast<std::size_t>(s);
    sols[si] = side_solutions(p, s);
    if (sols[si].empty()) {
      throw Error(ErrorCode::NoClosure, std::string("no cover assignment for side ") + std::string(to_string(s)) +
                                            " survives the interior attacks");
    }
    for (const auto& a : sols[si]) profs[si].push_back(profile(p, s, a));
  }

  auto and_free = [](std::array<std::uint32_t, 10> acc, const SideProfile& pr) {
    for (std::size_t i = 0; i < 10; ++i) acc[i] &= pr.free[i];
    return acc;
  };
  std::array<std::uint32_t, 10> all{};
  all.fill(~0u);

  std::array<std::size_t, 4> chosen{};
  bool found = false;
  for (std::size_t a = 0; a < sols[0].size() && !found; ++a) {
    for (std::size_t b = 0; b < sols[1].size() && !found; ++b) {
      if (!side_attacks_ok(p, Side::Top, sols[0][a], profs[0][a], and_free(all, profs[1][b]))) continue;
      if (!side_attacks_ok(p, Side::Bottom, sols[1][b], profs[1][b], and_free(all, profs[0][a]))) continue;
      for (std::size_t c = 0; c < sols[2].size() && !found; ++c) {
        const auto ab = and_free(and_free(all, profs[0][a]), profs[1][b]);
        if (!side_attacks_ok(p, Side::Left, sols[2][c], profs[2][c], ab)) continue;
        for (std::size_t d = 0; d < sols[3].size() && !found; ++d) {
          const std::array<const SideProfile*, 4> pr{&profs[0][a], &profs[1][b], &profs[2][c], &profs[3][d]};
          const std::array<const SideAssignment*, 4> as{&sols[0][a], &sols[1][b], &sols[2][c], &sols[3][d]};
          bool ok = true;
          for (std::size_t s = 0; s < 4 && ok; ++s) {
            auto others = all;
            for (std::size_t o = 0; o < 4; ++o)
              if (o != s) others = and_free(others, *pr[o]);
            ok = side_attacks_ok(p, kSides[s], *as[s], *pr[s], others);
          }
          if (ok) {
            chosen = {a, b, c, d};
            found = true;
          }
        }
      }
    }
  }
  if (!found) throw Error(ErrorCode::NoClosure, "no side-cover combination answers every side attack");

  auto cover = [&](int state, Side s) {
    const auto si = static_cast<std::size_t>(s);
    return p.covers[static_cast<std::size_t>(state)][si][sols[si][chosen[si]][static_cast<std::size_t>(state)]];
  };

  Catalogue7x7 cat;
  const std::array<Cell, 4> corners{Cell{0, 0}, Cell{0, 6}, Cell{6, 0}, Cell{6, 6}};
  for (int id = 0; id < 10; ++id) {
    const LatticePlacement lp = LatticePlacement::from_id(id);
    auto& cells = cat.placements[static_cast<std::size_t>(id)];
    for (const Cell& c : corners) cells.push_back(c);
    Window(1, 5, 1, 5).for_each([&](const Cell& c) {
      if (lp.contains(c)) cells.push_back(c);
    });
    for (Side s : kSides) {
      const Mask m = cover(id, s);
      for (int pos = 0; pos < 5; ++pos)
        if (m & (1u << pos)) cells.push_back(side_cell(s, pos));
    }
    std::sort(cells.begin(), cells.end());
  }

  // Builds the explicit plan for one field; nullopt if some side cannot follow.
  auto realise = [&](int from, const Field& f, std::optional<Cell> side_attack) -> std::optional<MovePlan> {
    const LatticePlacement lp = LatticePlacement::from_id(from);
    const int to = f.after.id();
    MovePlan plan;
    for (const Cell& c : corners) plan.moves.push_back({c, c});
    Window(1, 5, 1, 5).for_each([&](const Cell& c) {
      if (lp.contains(c)) plan.moves.push_back({c, c + disp_of(f, c)});
    });
    for (Side s : kSides) {
      int must = -1;
      if (side_attack) {
        const auto where = side_of(*side_attack);
        if (where && where->first == s) must = where->second;
      }
      const SideEffect e = side_effect(lp, f, s);
      const auto pairs = side_matching(cover(from, s), e, cover(to, s), must);
      if (!pairs) return std::nullopt;
      for (int pos = 0; pos < 5; ++pos) {
        if (e.entries & (1u << pos)) {
          const Cell c = side_cell(s, pos);
          plan.moves.push_back({c, c + disp_of(f, c)});
        }
      }
      for (const auto& [i, j] : *pairs) plan.moves.push_back({side_cell(s, i), side_cell(s, j)});
    }
    plan.sort();
    return plan;
  };

  for (int id = 0; id < 10; ++id) {
    const auto ii = static_cast<std::size_t>(id);
    const GuardPlacement here = cat.placement(id);
    for (std::size_t k = 0; k < 49; ++k) {
      const Cell a = GridDims(7, 7).cell(k);
      if (here.contains(a)) continue;
      std::optional<MovePlan> plan;
      int to = -1;
      if (interior7(a)) {
        const Field& f = p.interior_fields[ii].at(a);
        plan = realise(id, f, std::nullopt);
        to = f.after.id();
      } else {
        for (const Field& f : p.candidates[ii]) {
          plan = realise(id, f, a);
          if (plan) {
            to = f.after.id();
            break;
          }
        }
      }
      if (!plan) throw Error(ErrorCode::NoClosure, "no response to " + to_string(a) + " from placement " + std::to_string(id));
      const MoveCheck check = validate_move_plan(here, *plan, a, cat.placement(to));
      if (!check) {
        throw Error(ErrorCode::NoClosure, "derived response to " + to_string(a) + " is illegal: " +
                                              std::string(to_string(check.reason)) + " " + check.detail);
      }
      cat.transitions[ii][a] = {to, std::move(*plan)};
    }
  }
  return cat;
}

}  // namespace edom
