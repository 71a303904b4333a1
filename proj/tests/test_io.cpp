#include <gtest/gtest.h>

#include <fstream>

#include "mpdist/io.hpp"

using namespace mpdist;

TEST(BarcodeJson, NullMeansInfinity) {
  const Barcode b{1, {{0.5, kInfinity}, {0.1, 0.30000000000000004}}};
  const nlohmann::json j = to_json(b);
  EXPECT_EQ(j.dump(), R"({"bars":[[0.1,0.30000000000000004],[0.5,null]],"degree":1})");
  EXPECT_EQ(barcode_from_json(j), b);
}

TEST(BarcodeJson, RoundTripIsBitExact) {
  detail::Rng rng(3);
  Barcode b{0, {}};
  for (int i = 0; i < 50; ++i) {
    const double birth = rng.uniform(-1e3, 1e3) / 7.0;
    b.add(birth, rng.index(4) ? birth + rng.uniform01() : kInfinity);
  }
  const Barcode back = barcode_from_json(nlohmann::json::parse(to_json(b).dump()));
  EXPECT_EQ(back.canonical().bars, b.canonical().bars);
}

TEST(BarcodeJson, RejectsMalformedInput) {
  using nlohmann::json;
  EXPECT_THROW(barcode_from_json(json::parse(R"({"bars":[]})")), std::invalid_argument);
  EXPECT_THROW(barcode_from_json(json::parse(R"({"degree":0,"bars":[[1]]})")), std::invalid_argument);
  EXPECT_THROW(barcode_from_json(json::parse(R"({"degree":0,"bars":[[2,1]]})")), std::invalid_argument);
  EXPECT_THROW(barcode_from_json(json::parse(R"({"degree":0,"bars":[[null,1]]})")), std::invalid_argument);
  EXPECT_THROW(barcode_from_json(json::parse(R"({"degree":0,"bars":[[0,"x"]]})")), std::invalid_argument);
}

TEST(BarcodeJson, ReadFromFile) {
  const std::string path = ::testing::TempDir() + "mpdist_bars.json";
  std::ofstream(path) << R"({"degree": 0, "bars": [[0, 1.5], [0, null]]})";
  EXPECT_EQ(read_barcode(path), (Barcode{0, {{0, 1.5}, {0, kInfinity}}}));
  EXPECT_THROW(read_barcode(path + ".missing"), std::runtime_error);
}

TEST(MatchJson, CarriesArgmaxLine) {
  MatchResult m;
  m.distance = 0.25;
  m.argmax_line = Line(45.0, 0.5);
  m.argmax_bottleneck = 0.25 * std::sqrt(2.0);
  m.lines = 400;
  const auto j = to_json(m);
  EXPECT_EQ(j["matching_distance"], 0.25);
  EXPECT_EQ(j["argmax_line"]["angle_deg"], 45.0);
  EXPECT_EQ(j["argmax_line"]["offset"], 0.5);
  EXPECT_EQ(j["lines"], 400);
}
