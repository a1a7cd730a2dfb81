#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "fixtures.hpp"
#include "wayfind/error.hpp"
#include "wayfind/gridmap.hpp"

using namespace wayfind;
using namespace wayfind::testing;

namespace {

GrayImage white(int w, int h) { return GrayImage{w, h, std::vector<std::uint8_t>(w * h, 255)}; }

void paint(GrayImage& img, int x, int y, std::uint8_t v) {
  img.pixels[static_cast<std::size_t>(y) * img.width + x] = v;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no wayfind::Error thrown";
  return ErrorCode::kInternal;
}

bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
  for (const auto& v : vs)
    if (v.kind == k) return true;
  return false;
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("wayfind_gridmap_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Binarize, AllWhiteIsAllFree) {
  const auto g = binarize_mask(white(100, 100), 2, 2);
  EXPECT_EQ(g.rows(), 2);
  EXPECT_EQ(g.cols(), 2);
  EXPECT_EQ(g.free_count(), 4u);
}

TEST(Binarize, TopLeftQuadrantDark) {
  auto img = white(4, 4);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) paint(img, x, y, 0);
  const auto g = binarize_mask(img, 2, 2);
  EXPECT_EQ(g.to_rows(), (std::vector<std::string>{"01", "11"}));
}

TEST(Binarize, SixtyPercentDarkBlockIsBlocked) {
  // One cell covering a 10x1 strip; 6 of 10 pixels dark.
  auto img = white(10, 1);
  for (int x = 0; x < 6; ++x) paint(img, x, 0, 10);
  EXPECT_FALSE(binarize_mask(img, 1, 1).is_free({0, 0}));
}

TEST(Binarize, ExactlyHalfDarkStaysFree) {
  auto img = white(10, 1);
  for (int x = 0; x < 5; ++x) paint(img, x, 0, 10);
  EXPECT_TRUE(binarize_mask(img, 1, 1).is_free({0, 0}));
}

TEST(Binarize, LuminanceCutoffIsStrict) {
  auto img = white(2, 1);
  paint(img, 0, 0, 127);
  paint(img, 1, 0, 127);
  EXPECT_FALSE(binarize_mask(img, 1, 1).is_free({0, 0}));
  paint(img, 0, 0, 128);
  paint(img, 1, 0, 128);
  EXPECT_TRUE(binarize_mask(img, 1, 1).is_free({0, 0}));
}

TEST(Binarize, Errors) {
  EXPECT_EQ(code_of([] { binarize_mask(GrayImage{}, 1, 1); }), ErrorCode::kEmptyMask);
  EXPECT_EQ(code_of([] { binarize_mask(white(4, 4), 5, 2); }), ErrorCode::kGridLargerThanMask);
  EXPECT_EQ(code_of([] { binarize_mask(white(4, 4), 0, 2); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { binarize_mask(white(4, 4), 2, 2, {0.0, 128}); }),
            ErrorCode::kInvalidArgument);
}

// Property: output shape equals (rows, cols) and matches a direct pixel count
// over the same partition, for random masks and sizes.
TEST(Binarize, MatchesIndependentCountOnRandomMasks) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = std::uniform_int_distribution<int>(1, 40)(rng);
    const int h = std::uniform_int_distribution<int>(1, 40)(rng);
    const int rows = std::uniform_int_distribution<int>(1, h)(rng);
    const int cols = std::uniform_int_distribution<int>(1, w)(rng);
    GrayImage img = white(w, h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xff);
    const auto g = binarize_mask(img, rows, cols);
    ASSERT_EQ(g.rows(), rows);
    ASSERT_EQ(g.cols(), cols);
    const int bh = h / rows, bw = w / cols;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int y1 = r == rows - 1 ? h : (r + 1) * bh;
        const int x1 = c == cols - 1 ? w : (c + 1) * bw;
        int dark = 0, total = 0;
        for (int y = r * bh; y < y1; ++y)
          for (int x = c * bw; x < x1; ++x) {
            ++total;
            dark += img.at(x, y) < 128;
          }
        EXPECT_EQ(g.is_free({r, c}), !(2 * dark > total)) << trial << " " << r << "," << c;
      }
    }
  }
}

// Property: darkening pixels never frees a blocked cell.
TEST(Binarize, DarkeningIsMonotone) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    GrayImage img = white(30, 20);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() & 0xff);
    const auto before = binarize_mask(img, 7, 9);
    for (auto& p : img.pixels)
      if (rng() % 3 == 0) p = static_cast<std::uint8_t>(p / 2);
    const auto after = binarize_mask(img, 7, 9);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 9; ++j)
        if (!before.is_free({i, j})) EXPECT_FALSE(after.is_free({i, j}));
  }
}

TEST(Binarize, SuggestDimensionsKeepsAspect) {
  EXPECT_EQ(suggest_dimensions(1300, 900, 130), (std::pair<int, int>{90, 130}));
  EXPECT_EQ(suggest_dimensions(100, 200, 50), (std::pair<int, int>{50, 25}));
  EXPECT_EQ(suggest_dimensions(10, 10, 50), (std::pair<int, int>{10, 10}));
}

TEST(Image, PgmRoundTrip) {
  const auto dir = temp_dir("pgm");
  GrayImage img = white(7, 3);
  paint(img, 2, 1, 42);
  save_pgm(img, (dir / "m.pgm").string());
  const auto back = load_gray_image((dir / "m.pgm").string());
  EXPECT_EQ(back.width, 7);
  EXPECT_EQ(back.height, 3);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(code_of([&] { load_gray_image((dir / "missing.pgm").string()); }),
            ErrorCode::kIoFailure);
  std::filesystem::remove_all(dir);
}

TEST(Grid, FromRowsAndBounds) {
  const auto g = OccupancyGrid::from_rows(std::vector<std::string>{"101", "011"});
  EXPECT_EQ(g.rows(), 2);
  EXPECT_EQ(g.cols(), 3);
  EXPECT_TRUE(g.is_free({0, 0}));
  EXPECT_FALSE(g.is_free({0, 1}));
  EXPECT_FALSE(g.is_free({-1, 0}));
  EXPECT_FALSE(g.is_free({0, 3}));
  EXPECT_EQ(g.free_count(), 4u);
  EXPECT_EQ(code_of([] { OccupancyGrid::from_rows(std::vector<std::string>{"10", "1"}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { OccupancyGrid(0, 3); }), ErrorCode::kInvalidArgument);
}

TEST(Validate, WellFormedTwoFloorMapIsClean) {
  EXPECT_TRUE(validate_building(two_floor_mall()).empty());
  EXPECT_TRUE(validate_building(terminal_90x130()).empty());
  EXPECT_TRUE(validate_building(mall_two_floor_large()).empty());
}

TEST(Validate, PoiOnBlockedCellNamesThePoi) {
  auto m = single_floor({"10", "11"});
  m.pois.push_back({"Kiosk", {0, {0, 1}}});
  const auto vs = validate_building(m);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kPoiOnBlockedCell);
  EXPECT_NE(vs[0].subject.find("Kiosk"), std::string::npos);
}

TEST(Validate, PortalToSameFloorIsOneViolation) {
  auto m = single_floor({"11", "11"});
  m.portals.push_back({PortalKind::kStaircase, {0, {0, 0}}, {0, {1, 1}}, 1.0});
  const auto vs = validate_building(m);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kPortalSameFloor);
}

// Each violation class constructed in isolation.
TEST(Validate, EveryViolationClass) {
  const BuildingMap base = two_floor_mall();
  {
    BuildingMap m;
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kNoFloors));
  }
  {
    auto m = base;
    m.floors.push_back(m.floors[0]);
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kDuplicateFloor));
  }
  {
    auto m = base;
    m.pois.push_back({"Ghost", {7, {0, 0}}});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPoiUnknownFloor));
  }
  {
    auto m = base;
    m.pois.push_back({"Far", {0, {40, 0}}});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPoiOutOfBounds));
  }
  {
    auto m = base;
    m.pois.push_back({"main entrance", {0, {10, 1}}});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kDuplicatePoiName));
  }
  {
    auto m = base;
    m.portals.push_back({PortalKind::kElevator, {0, {1, 1}}, {5, {1, 1}}, 1.0});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPortalUnknownFloor));
  }
  {
    auto m = base;
    m.portals.push_back({PortalKind::kElevator, {0, {1, 1}}, {1, {1, 99}}, 1.0});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPortalOutOfBounds));
  }
  {
    auto m = base;
    m.portals.push_back({PortalKind::kElevator, {0, {8, 0}}, {1, {1, 1}}, 1.0});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPortalOnBlockedCell));
  }
  {
    auto m = base;
    m.portals.push_back({PortalKind::kElevator, {0, {1, 1}}, {1, {1, 1}}, -2.0});
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPortalBadCost));
  }
  {
    auto m = base;
    m.portals.push_back(m.portals[0]);
    EXPECT_TRUE(has_kind(validate_building(m), ViolationKind::kPortalAmbiguous));
  }
}

TEST(Edit, SetCellChangesExactlyOneCell) {
  const auto m = all_free(4, 5);
  const auto out = set_cell(m, 0, {2, 3}, false);
  int diffs = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j)
      diffs += m.floors[0].grid.is_free({i, j}) != out.floors[0].grid.is_free({i, j});
  EXPECT_EQ(diffs, 1);
  EXPECT_TRUE(m.floors[0].grid.is_free({2, 3}));  // input untouched
}

TEST(Edit, SetCellIdempotent) {
  const auto m = two_floor_mall();
  EXPECT_EQ(set_cell(m, 0, {3, 3}, false), m);
  EXPECT_EQ(set_cell(m, 0, {4, 4}, true), m);
}

TEST(Edit, BlockingSouthwestGateWouldOrphan) {
  const auto m = terminal_90x130();
  EXPECT_EQ(code_of([&] { set_cell(m, 0, {53, 16}, false); }),
            ErrorCode::kWouldOrphanPoiOrPortal);
}

TEST(Edit, BlockingPortalEndpointWouldOrphan) {
  const auto m = two_floor_mall();
  EXPECT_EQ(code_of([&] { set_cell(m, 1, {5, 2}, false); }),
            ErrorCode::kWouldOrphanPoiOrPortal);
}

TEST(Edit, SetCellErrors) {
  const auto m = two_floor_mall();
  EXPECT_EQ(code_of([&] { set_cell(m, 4, {0, 0}, false); }), ErrorCode::kUnknownFloor);
  EXPECT_EQ(code_of([&] { set_cell(m, 0, {12, 0}, false); }), ErrorCode::kOutOfBounds);
}

TEST(Edit, PoiAndPortalLifecycle) {
  auto m = two_floor_mall();
  EXPECT_EQ(code_of([&] { add_poi(m, {"FOOD COURT", {0, {0, 0}}}); }), ErrorCode::kDuplicatePoi);
  EXPECT_EQ(code_of([&] { add_poi(m, {"Wall", {0, {8, 0}}}); }), ErrorCode::kNodeBlocked);
  m = add_poi(m, {"Bank", {0, {9, 9}}});
  ASSERT_NE(m.find_poi("bank"), nullptr);
  m = remove_poi(m, "BANK");
  EXPECT_EQ(m.find_poi("bank"), nullptr);
  EXPECT_EQ(code_of([&] { remove_poi(m, "Bank"); }), ErrorCode::kUnknownPoi);

  m = add_portal(m, {PortalKind::kStaircase, {0, {11, 15}}, {1, {11, 15}}, 2.0});
  EXPECT_EQ(m.portals.size(), 3u);
  EXPECT_EQ(code_of([&] { add_portal(m, m.portals[2]); }), ErrorCode::kInvalidArgument);
  m = remove_portal(m, 2);
  EXPECT_EQ(m, two_floor_mall());
  EXPECT_EQ(code_of([&] { remove_portal(m, 9); }), ErrorCode::kOutOfBounds);
}

TEST(Bundle, RoundTripOneFloorOnePoi) {
  auto m = single_floor({"110", "011"}, "tiny");
  m.pois.push_back({"Desk", {0, {1, 2}}});
  const auto dir = temp_dir("rt");
  const auto path = (dir / "tiny.json").string();
  save_bundle(m, path);
  EXPECT_EQ(load_bundle(path), m);
  std::filesystem::remove_all(dir);
}

// Property: parse(serialize(m)) == m over varied valid maps.
TEST(Bundle, RoundTripProperty) {
  std::vector<BuildingMap> maps{two_floor_mall(), terminal_90x130(), mall_two_floor_large()};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = random_grid(5 + seed % 7, 3 + seed % 11, 0.3, seed);
    m.name = "r" + std::to_string(seed);
    if (seed % 2) m.meters_per_cell = 0.25 * static_cast<double>(seed);
    const auto comp = largest_component(m);
    if (!comp.empty()) m.pois.push_back({"P" + std::to_string(seed), comp.front()});
    maps.push_back(m);
  }
  maps[1].floors[0].source_image = "masks/terminal.png";
  for (const auto& m : maps) {
    const auto text = serialize_bundle(m);
    EXPECT_EQ(parse_bundle(text), m) << m.name;
    EXPECT_EQ(serialize_bundle(parse_bundle(text)), text);
  }
}

TEST(Bundle, TruncatedFileFailsToLoad) {
  const auto text = serialize_bundle(two_floor_mall());
  for (std::size_t cut : {std::size_t{0}, std::size_t{10}, text.size() / 2, text.size() - 3}) {
    const auto code = code_of([&] { parse_bundle(text.substr(0, cut)); });
    EXPECT_TRUE(code == ErrorCode::kParseError || code == ErrorCode::kSchemaVersionMismatch)
        << error_code_name(code);
  }
}

TEST(Bundle, WrongVersionOrFormat) {
  auto text = serialize_bundle(two_floor_mall());
  auto bumped = text;
  bumped.replace(bumped.find("\"version\": 1"), 12, "\"version\": 2");
  EXPECT_EQ(code_of([&] { parse_bundle(bumped); }), ErrorCode::kSchemaVersionMismatch);
  EXPECT_EQ(code_of([] { parse_bundle("{\"floors\": []}"); }), ErrorCode::kSchemaVersionMismatch);
}

TEST(Bundle, PoiOnBlockedCellIsValidationFailure) {
  auto m = single_floor({"10"});
  m.pois.push_back({"Bad", {0, {0, 1}}});
  const auto text = serialize_bundle(m);
  EXPECT_EQ(code_of([&] { parse_bundle(text); }), ErrorCode::kValidationFailure);
  EXPECT_EQ(parse_bundle(text, BundleCheck::kSkipValidation), m);
  const auto dir = temp_dir("bad");
  EXPECT_EQ(code_of([&] { save_bundle(m, (dir / "bad.json").string()); }),
            ErrorCode::kValidationFailure);
  EXPECT_FALSE(std::filesystem::exists(dir / "bad.json"));
  std::filesystem::remove_all(dir);
}

TEST(Bundle, SaveReplacesAtomicallyAndLeavesNoTemporaries) {
  const auto dir = temp_dir("atomic");
  const auto path = (dir / "mall.json").string();
  save_bundle(two_floor_mall(), path);
  auto edited = set_cell(two_floor_mall(), 0, {0, 5}, false);
  save_bundle(edited, path);
  EXPECT_EQ(load_bundle(path), edited);
  int files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1);
  std::filesystem::remove_all(dir);
}

TEST(Bundle, MissingFileIsIoFailure) {
  EXPECT_EQ(code_of([] { load_bundle("/nonexistent/x.json"); }), ErrorCode::kIoFailure);
}

TEST(Map, PoiLookupIsCaseInsensitive) {
  const auto m = two_floor_mall();
  ASSERT_NE(m.find_poi("food court"), nullptr);
  EXPECT_EQ(m.find_poi("food court")->name, "Food Court");
  EXPECT_EQ(m.find_poi("food"), nullptr);
}
