#include <fstream>

#include "doctest.h"
#include "primsynth/config.hpp"
#include "primsynth/errors.hpp"
#include "test_support.hpp"

using namespace primsynth;
using nlohmann::json;

TEST_CASE("defaults describe the full configuration") {
  const GenConfig c;
  CHECK(c.grid == Dims{96, 96, 96});
  CHECK(c.m_objects == 15);
  CHECK(c.overlap_threshold == 0.25);
  CHECK(c.max_iter == 100);
  CHECK(c.intensity == 128);
  CHECK(c.allowed_classes().size() == 32);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown keys are rejected by name") {
  GenConfig c;
  CHECK_THROWS_WITH_AS(apply_config_json(c, json{{"intencity", 128}}), doctest::Contains("intencity"), ConfigError);
}

TEST_CASE("ill-typed and out-of-range values are rejected") {
  GenConfig c;
  CHECK_THROWS_AS(apply_config_json(c, json{{"m_objects", "many"}}), ConfigError);
  CHECK_THROWS_AS(apply_config_json(c, json{{"label_mode", "rainbow"}}), ConfigError);
  CHECK_THROWS_AS(apply_config_json(c, json{{"allowed_xy", {"10-poly"}}}), ConfigError);

  auto invalid = [](auto mutate) {
    GenConfig g;
    mutate(g);
    return g;
  };
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.intensity = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.intensity = 256; }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.overlap_threshold = -0.1; }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.overlap_threshold = 1.5; }).validate(), ConfigError);
  CHECK_NOTHROW(invalid([](GenConfig& g) { g.overlap_threshold = 0.0; }).validate());
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.m_objects = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.max_iter = 0; }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.allowed_xy.clear(); }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.n_samples = -1; }).validate(), ConfigError);
  CHECK_THROWS_AS(invalid([](GenConfig& g) { g.grid = Dims{8, 96, 96}; }).validate(), ConfigError);
}

TEST_CASE("json round trip preserves every field") {
  GenConfig c;
  c.grid = Dims{64, 48, 32};
  c.m_objects = 5;
  c.m_objects_max = 9;
  c.overlap_threshold = 0.4;
  c.max_iter = 7;
  c.intensity = 200;
  c.label_mode = LabelMode::Instance;
  c.ia_enabled = false;
  c.overlap_enabled = false;
  c.planar_mode = true;
  c.allowed_xy = {XyRule::polygon(5), XyRule::ellipse()};
  c.allowed_z = {ZRule::Cone};
  c.n_samples = 12;
  c.master_seed = 0xFFFFFFFFFFFFFFFFull;
  c.output_format = VolumeFormat::Raw;
  const auto j = config_to_json(c);
  CHECK(config_from_json(json::parse(j.dump())) == c);
  CHECK(j.begin().key() == "grid");
}

TEST_CASE("config files accept comments") {
  testing::TempDir dir;
  std::ofstream(dir / "c.json") << "{\n  // fewer objects\n  \"m_objects\": 3, /* and a seed */ \"seed\": 9\n}\n";
  GenConfig c;
  apply_config_json(c, read_config_file(dir / "c.json"));
  CHECK(c.m_objects == 3);
  CHECK(c.master_seed == 9);
  CHECK_THROWS_AS((void)read_config_file(dir / "missing.json"), IoError);
  std::ofstream(dir / "bad.json") << "{ \"m_objects\": ";
  CHECK_THROWS_AS((void)read_config_file(dir / "bad.json"), ConfigError);
}

TEST_CASE("shipped profiles load and validate") {
  const auto names = available_profiles();
  CHECK(names.size() >= 12);
  for (const auto& n : names) {
    GenConfig c;
    CAPTURE(n);
    CHECK_NOTHROW(apply_config_json(c, load_profile(n)));
    CHECK_NOTHROW(c.validate());
  }
  GenConfig planar;
  apply_config_json(planar, load_profile("planar"));
  CHECK(planar.planar_mode);
  CHECK_FALSE(planar.overlap_enabled);
  GenConfig one;
  apply_config_json(one, load_profile("classes-1x1"));
  CHECK(one.allowed_classes().size() == 1);
  GenConfig eight;
  apply_config_json(eight, load_profile("classes-8x1"));
  CHECK(eight.allowed_classes().size() == 8);
  CHECK_THROWS((void)load_profile("no-such-profile"));
}

TEST_CASE("the annotated example config matches the defaults") {
  const std::filesystem::path example = std::filesystem::path(PRIMSYNTH_TEST_DATA) / ".." / ".." / "tools" / "example_config.json";
  GenConfig c;
  apply_config_json(c, read_config_file(example));
  CHECK(c == GenConfig{});
}
