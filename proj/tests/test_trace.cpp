#include <gtest/gtest.h>

#include "edom/audit.hpp"
#include "edom/embedded_catalogue.hpp"
#include "edom/rng.hpp"
#include "edom/trace.hpp"

using namespace edom;

namespace {

std::vector<std::string> play(Variant v, Coord m, Coord n, std::uint64_t seed, std::uint64_t rounds) {
  std::vector<std::string> lines;
  audit_play(FiniteStrategy(v, &embedded_catalogue()), m, n, AttackerKind::Random, rounds, seed,
             [&](const Cell& a, const StepResult& r, const InvariantFlags& f) { lines.push_back(to_jsonl(make_record(a, r, f))); });
  return lines;
}

}  // namespace

TEST(Trace, HashGoldens) {
  EXPECT_EQ(hex64(placement_hash({})), "cbf29ce484222325");
  EXPECT_EQ(hex64(placement_hash({{0, 0}})), "88201fb960ff6465");
  EXPECT_EQ(hex64(placement_hash({{1, 2}, {-1, 0}})), "bb7581f9214cdd1e");
}

TEST(Trace, HashIgnoresInputOrder) {
  const std::vector<Cell> a{{3, 1}, {0, 0}, {2, 5}};
  const std::vector<Cell> b{{2, 5}, {3, 1}, {0, 0}};
  EXPECT_EQ(placement_hash(a), placement_hash(b));
  EXPECT_NE(placement_hash(a), placement_hash({{3, 1}, {0, 0}}));
  EXPECT_NE(placement_hash({{1, 0}}), placement_hash({{0, 1}}));
}

TEST(Trace, RngIsStandardEngine) {
  Rng r(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.below(13), b.below(13));
  Rng c(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(c.below(5), 5u);
}

TEST(Trace, RecordsRoundTrip) {
  const auto lines = play(Variant::Improved, 12, 12, 4, 50);
  ASSERT_EQ(lines.size(), 50u);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const TraceRecord t = parse_trace_line(lines[i]);
    EXPECT_EQ(t.round, i + 1);
    EXPECT_TRUE(t.invariant_flags.all());
    EXPECT_EQ(to_jsonl(t), lines[i]);
  }
}

TEST(Trace, FieldOrder) {
  const std::string line = play(Variant::FullBoundary, 7, 7, 1, 1).front();
  const auto at = [&](const char* key) { return line.find(std::string("\"") + key + "\""); };
  EXPECT_EQ(at("v"), 1u);
  EXPECT_LT(at("v"), at("round"));
  EXPECT_LT(at("round"), at("attack"));
  EXPECT_LT(at("attack"), at("plan"));
  EXPECT_LT(at("plan"), at("placement_after"));
  EXPECT_LT(at("placement_after"), at("pattern_after"));
  EXPECT_LT(at("pattern_after"), at("invariant_flags"));
}

TEST(Trace, SameSeedSameBytes) {
  EXPECT_EQ(play(Variant::Improved, 12, 17, 42, 200), play(Variant::Improved, 12, 17, 42, 200));
  EXPECT_NE(play(Variant::Improved, 12, 17, 42, 20), play(Variant::Improved, 12, 17, 43, 20));
}

TEST(Trace, TamperingIsDetected) {
  const std::string line = play(Variant::Improved, 7, 7, 2, 1).front();
  auto tampered = [&](const std::string& from, const std::string& to) {
    std::string s = line;
    const auto p = s.find(from);
    EXPECT_NE(p, std::string::npos) << from;
    s.replace(p, from.size(), to);
    return s;
  };
  const nlohmann::json j = nlohmann::json::parse(line);
  const std::string hash = j["placement_after"]["hash"];
  EXPECT_THROW(parse_trace_line(tampered(hash, std::string(16, '0'))), Error);
  EXPECT_THROW(parse_trace_line(tampered("\"v\":1", "\"v\":2")), Error);
  EXPECT_THROW(parse_trace_line(tampered("\"cells\":[[0,0],", "\"cells\":[[0,0],[0,0],")), Error);
  EXPECT_THROW(parse_trace_line(line.substr(0, line.size() / 2)), Error);
}
