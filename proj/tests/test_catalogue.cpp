#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "edom/catalogue.hpp"
#include "edom/embedded_catalogue.hpp"
#include "edom/verify.hpp"

using namespace edom;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Catalogue, DerivationMatchesCommittedFile) {
  const std::string golden = read_file(std::string(EDOM_SOURCE_DIR) + "/data/catalogue_7x7.json");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(serialize(derive_catalogue_7x7()), golden);
  EXPECT_EQ(std::string(kEmbeddedCatalogue), golden);
}

TEST(Catalogue, EmbeddedCopyIsClosedAndSymmetric) {
  const CatalogueReport r = check_catalogue(embedded_catalogue());
  EXPECT_TRUE(r.ok()) << r.first_failure;
  EXPECT_EQ(r.transitions, 280u);
}

TEST(Catalogue, PlacementsRealiseTheirLattice) {
  const Catalogue7x7& cat = embedded_catalogue();
  for (int id = 0; id < 10; ++id) {
    const LatticePlacement lp = LatticePlacement::from_id(id);
    const GuardPlacement p = cat.placement(id);
    Window(1, 5, 1, 5).for_each([&](const Cell& c) { EXPECT_EQ(p.contains(c), lp.contains(c)); });
    // each side keeps the lattice's own side cell
    for (Side s : kSides)
      for (int pos = 0; pos < 5; ++pos)
        if (lp.contains(side_cell(s, pos))) { EXPECT_TRUE(p.contains(side_cell(s, pos))); }
  }
}

TEST(Catalogue, RoundTripAndVersioning) {
  const Catalogue7x7& cat = embedded_catalogue();
  EXPECT_EQ(parse_catalogue(serialize(cat)), cat);
  std::string text = serialize(cat);
  text.replace(text.find("\"version\": 1"), 12, "\"version\": 9");
  EXPECT_THROW(parse_catalogue(text), Error);
  EXPECT_THROW(parse_catalogue("{\"format\": 3"), Error);
}

TEST(Catalogue, MissingTransitionIsReported) {
  Catalogue7x7 cat = embedded_catalogue();
  cat.transitions[0].erase(cat.transitions[0].begin());
  const CatalogueReport r = check_catalogue(cat);
  EXPECT_FALSE(r.closed);
}

TEST(Catalogue, SideMatchingOnALine) {
  using namespace catalogue_detail;
  // guards at 0,2,4; position 1 must be covered; nobody enters or leaves
  const auto ok = side_matching(0b10101, {}, 0b10110, 1);
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->size(), 3u);
  // a guard would need to travel two cells
  EXPECT_FALSE(side_matching(0b00111, {}, 0b11100));
  // an exit onto an uncovered target cell is not allowed
  EXPECT_FALSE(side_matching(0b00111, SideEffect{0, 0b01000}, 0b00111));
}
