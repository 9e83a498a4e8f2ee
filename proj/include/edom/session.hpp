#pragma once

// Interactive games over newline-delimited JSON. handle_message is the whole
// protocol; the TCP server only moves lines.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "edom/audit.hpp"
#include "edom/catalogue.hpp"
#include "edom/error.hpp"
#include "edom/finite.hpp"
#include "edom/trace.hpp"

namespace edom {

using ojson = nlohmann::ordered_json;

struct Session {
  std::mutex mu;
  std::string id;
  FiniteStrategy strategy;
  std::vector<GameState> states;     // undo stack; back() is current
  std::vector<TraceRecord> history;  // append-only, undone rounds included
  std::chrono::system_clock::time_point created_at;

  Session(std::string sid, FiniteStrategy s, GameState start)
      : id(std::move(sid)), strategy(s), states{std::move(start)}, created_at(std::chrono::system_clock::now()) {}
};

inline ojson snapshot_json(const GameState& s) {
  ojson j;
  j["m"] = s.dims.m;
  j["n"] = s.dims.n;
  j["variant"] = to_string(s.variant);
  j["round"] = s.round;
  j["pattern"] = pattern_json(s.interior_pattern);
  auto guards = ojson::array();
  for (const Cell& c : s.placement.cells()) guards.push_back(cell_json(c));
  j["guards"] = guards;
  j["hash"] = hex64(placement_hash(s.placement.cells()));
  return j;
}

class SessionRegistry {
 public:
  explicit SessionRegistry(const Catalogue7x7& cat) : cat_(cat) {}

  std::shared_ptr<Session> create(Variant v, Coord m, Coord n) {
    FiniteStrategy strategy(v, &cat_);
    GameState start = strategy.init(m, n);
    std::lock_guard lock(mu_);
    std::string id = "s" + std::to_string(++counter_);
    auto s = std::make_shared<Session>(id, strategy, std::move(start));
    sessions_[id] = s;
    return s;
  }
  std::shared_ptr<Session> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }
  bool close(const std::string& id) {
    std::lock_guard lock(mu_);
    return sessions_.erase(id) > 0;
  }
  std::size_t size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }

 private:
  const Catalogue7x7& cat_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

namespace session_detail {

struct FieldError {
  std::string field;
  std::string message;
};

inline const nlohmann::json& field(const nlohmann::json& j, const std::string& name) {
  auto it = j.find(name);
  if (it == j.end()) throw FieldError{name, "missing field '" + name + "'"};
  return *it;
}

template <class T>
T get(const nlohmann::json& j, const std::string& name) {
  try {
    return field(j, name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FieldError{name, "field '" + name + "' has the wrong type"};
  }
}

inline ojson rejected(const std::string& id, std::string_view reason, const std::string& detail = {}) {
  ojson r;
  r["type"] = "REJECTED";
  if (!id.empty()) r["id"] = id;
  r["reason"] = reason;
  if (!detail.empty()) r["detail"] = detail;
  return r;
}

}  // namespace session_detail

/// One request line in, one reply line out (no trailing newline). Never throws.
inline std::string handle_message(SessionRegistry& reg, const std::string& line) {
  using namespace session_detail;
  nlohmann::json msg;
  try {
    msg = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    ojson r;
    r["type"] = "PROTOCOL_ERROR";
    r["position"] = e.byte;
    r["message"] = e.what();
    return r.dump();
  }
  try {
    if (!msg.is_object()) throw FieldError{"", "message must be an object"};
    const auto type = get<std::string>(msg, "type");
    if (type == "NEW_SESSION") {
      const auto m = get<Coord>(msg, "m");
      const auto n = get<Coord>(msg, "n");
      Variant v;
      try {
        v = parse_variant(get<std::string>(msg, "variant"));
      } catch (const Error& e) {
        throw FieldError{"variant", e.what()};
      }
      try {
        auto s = reg.create(v, m, n);
        std::lock_guard lock(s->mu);
        ojson r;
        r["type"] = "SESSION_CREATED";
        r["id"] = s->id;
        r["state"] = snapshot_json(s->states.back());
        return r.dump();
      } catch (const Error& e) {
        return rejected("", to_string(e.code()), e.what()).dump();
      }
    }

    const auto id = get<std::string>(msg, "id");
    auto s = reg.find(id);
    if (type != "ATTACK" && type != "UNDO" && type != "HINT" && type != "CLOSE") {
      throw FieldError{"type", "unknown message type '" + type + "'"};
    }
    if (!s) return rejected(id, "NO_SESSION").dump();
    std::lock_guard lock(s->mu);

    if (type == "ATTACK") {
      const auto& raw = field(msg, "cell");
      if (!raw.is_array() || raw.size() != 2 || !raw[0].is_number_integer() || !raw[1].is_number_integer()) {
        throw FieldError{"cell", "cell must be [row,col]"};
      }
      const Cell a{raw[0].get<Coord>(), raw[1].get<Coord>()};
      const GameState& cur = s->states.back();
      if (!cur.dims.contains(a)) return rejected(id, "OUT_OF_BOUNDS").dump();
      if (cur.placement.contains(a)) return rejected(id, "ATTACK_ON_GUARD").dump();
      StepResult step;
      InvariantFlags flags;
      try {
        step = s->strategy.step(cur, a);
        flags = check_step(cur, step.plan, a, step.state);
      } catch (const Error& e) {
        return rejected(id, to_string(e.code()), e.what()).dump();
      }
      s->history.push_back(make_record(a, step, flags));
      ojson r;
      r["type"] = "MOVE_REPORT";
      r["id"] = id;
      r["attack"] = cell_json(a);
      r["plan"] = plan_json(step.plan, true);
      r["state"] = snapshot_json(step.state);
      r["invariant_flags"] = flags_json(flags);
      s->states.push_back(std::move(step.state));
      return r.dump();
    }
    if (type == "UNDO") {
      if (s->states.size() < 2) return rejected(id, "NOTHING_TO_UNDO").dump();
      s->states.pop_back();
      ojson out;
      out["type"] = "UNDONE";
      out["id"] = id;
      out["state"] = snapshot_json(s->states.back());
      return out.dump();
    }
    if (type == "HINT") {
      ojson out;
      out["type"] = "HINT";
      out["id"] = id;
      out["cell"] = cell_json(greedy_attack(s->states.back()));
      return out.dump();
    }
    reg.close(id);
    ojson out;
    out["type"] = "CLOSED";
    out["id"] = id;
    return out.dump();
  } catch (const FieldError& fe) {
    ojson r;
    r["type"] = "PROTOCOL_ERROR";
    std::size_t pos = 0;
    if (!fe.field.empty()) {
      const auto at = line.find("\"" + fe.field + "\"");
      if (at != std::string::npos) pos = at;
    }
    r["position"] = pos;
    if (!fe.field.empty()) r["field"] = fe.field;
    r["message"] = fe.message;
    return r.dump();
  } catch (const std::exception& e) {
    ojson r;
    r["type"] = "PROTOCOL_ERROR";
    r["position"] = 0;
    r["message"] = e.what();
    return r.dump();
  }
}

}  // namespace edom
