#pragma once

// One JSON object per round. Field order is fixed so equal runs give
// byte-identical files.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "edom/error.hpp"
#include "edom/finite.hpp"
#include "edom/grid.hpp"
#include "edom/pattern.hpp"

namespace edom {

inline constexpr int kTraceSchemaVersion = 1;

/// FNV-1a 64 over the cells in sorted order, each as two little-endian int64.
inline std::uint64_t placement_hash(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&h](Coord v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (u >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const Cell& c : cells) {
    eat(c.row);
    eat(c.col);
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct TraceRecord {
  std::uint64_t round = 0;
  Cell attack;
  MovePlan plan;
  std::vector<Cell> placement_after;  // sorted
  std::uint64_t hash = 0;
  LatticePlacement pattern_after;
  InvariantFlags invariant_flags;
};

inline TraceRecord make_record(const Cell& attack, const StepResult& r, const InvariantFlags& flags) {
  TraceRecord t;
  t.round = r.state.round;
  t.attack = attack;
  t.plan = r.plan;
  t.placement_after = r.state.placement.cells();
  t.hash = placement_hash(t.placement_after);
  t.pattern_after = r.state.interior_pattern;
  t.invariant_flags = flags;
  return t;
}

inline nlohmann::ordered_json cell_json(const Cell& c) { return nlohmann::ordered_json::array({c.row, c.col}); }

inline Cell cell_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "cell must be [row,col]");
  return {j.at(0).get<Coord>(), j.at(1).get<Coord>()};
}

inline nlohmann::ordered_json pattern_json(const LatticePlacement& lp) {
  nlohmann::ordered_json j;
  j["family"] = to_string(lp.family);
  j["t"] = lp.t.value();
  return j;
}

inline nlohmann::ordered_json plan_json(const MovePlan& plan, bool moving_only) {
  auto a = nlohmann::ordered_json::array();
  for (const Move& mv : plan.moves)
    if (!moving_only || mv.from != mv.to) a.push_back(nlohmann::ordered_json::array({cell_json(mv.from), cell_json(mv.to)}));
  return a;
}

inline nlohmann::ordered_json flags_json(const InvariantFlags& f) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : f.flags) j[k] = v;
  return j;
}

inline std::string to_jsonl(const TraceRecord& t) {
  nlohmann::ordered_json j;
  j["v"] = kTraceSchemaVersion;
  j["round"] = t.round;
  j["attack"] = cell_json(t.attack);
  j["plan"] = plan_json(t.plan, false);
  auto cells = nlohmann::ordered_json::array();
  for (const Cell& c : t.placement_after) cells.push_back(cell_json(c));
  j["placement_after"] = {{"cells", cells}, {"hash", hex64(t.hash)}};
  j["pattern_after"] = pattern_json(t.pattern_after);
  j["invariant_flags"] = flags_json(t.invariant_flags);
  return j.dump();
}

/// Parses one line and re-checks it: hash, sortedness, and plan targets.
inline TraceRecord parse_trace_line(const std::string& line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  try {
    if (j.at("v").get<int>() != kTraceSchemaVersion) throw Error(ErrorCode::Parse, "unsupported trace version");
    TraceRecord t;
    t.round = j.at("round").get<std::uint64_t>();
    t.attack = cell_from_json(j.at("attack"));
    for (const auto& mv : j.at("plan")) t.plan.moves.push_back({cell_from_json(mv.at(0)), cell_from_json(mv.at(1))});
    for (const auto& c : j.at("placement_after").at("cells")) t.placement_after.push_back(cell_from_json(c));
    t.hash = std::stoull(j.at("placement_after").at("hash").get<std::string>(), nullptr, 16);
    const auto& p = j.at("pattern_after");
    t.pattern_after = {parse_family(p.at("family").get<std::string>()), Residue(p.at("t").get<int>())};
    for (const auto& [k, v] : j.at("invariant_flags").items()) t.invariant_flags.set(k, v.get<bool>());

    if (!std::is_sorted(t.placement_after.begin(), t.placement_after.end())) {
      throw Error(ErrorCode::Parse, "round " + std::to_string(t.round) + ": cells not sorted");
    }
    if (placement_hash(t.placement_after) != t.hash) {
      throw Error(ErrorCode::Parse, "round " + std::to_string(t.round) + ": hash mismatch");
    }
    std::vector<Cell> targets;
    for (const Move& mv : t.plan.moves) targets.push_back(mv.to);
    std::sort(targets.begin(), targets.end());
    if (targets != t.placement_after) {
      throw Error(ErrorCode::Parse, "round " + std::to_string(t.round) + ": plan targets differ from placement");
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

}  // namespace edom
