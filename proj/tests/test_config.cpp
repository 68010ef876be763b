#include <doctest.h>

#include "fixtures.hpp"
#include "jscity/config_file.hpp"

using namespace jscity;

TEST_CASE("config file sets every key") {
  ScanConfig scan;
  LayoutConfig layout;
  apply_config_text(R"(# project settings
include_extensions = [".js", ".jsx"]
exclude_globs = ["dist/**", "*.min.js",]
max_file_bytes = 1_000_000
max_line_chars = 800
count_params = true

[layout]
gutter = 2
plate_height = 0.75   # thicker plates
height_scale = 0.1
min_building_side = 0.5
max_building_side = 10
width_mapping = "linear"
)",
                    scan, layout);
  CHECK(scan.include_extensions == std::vector<std::string>{".js", ".jsx"});
  CHECK(scan.exclude_globs == std::vector<std::string>{"dist/**", "*.min.js"});
  CHECK(scan.max_file_bytes == 1000000);
  CHECK(scan.max_line_chars == 800);
  CHECK(scan.count_params);
  CHECK(layout.gutter == 2);
  CHECK(layout.plate_height == 0.75);
  CHECK(layout.height_scale == 0.1);
  CHECK(layout.min_building_side == 0.5);
  CHECK(layout.max_building_side == 10);
  CHECK(layout.width_mapping == WidthMapping::linear);
}

TEST_CASE("config file errors name the line") {
  ScanConfig scan;
  LayoutConfig layout;
  CHECK_THROWS_WITH_AS(apply_config_text("gutter = 1\nbogus = 2\n", scan, layout),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("gutter = wide", scan, layout), ConfigError);
  CHECK_THROWS_AS(apply_config_text("[scan]\ngutter = 1", scan, layout), ConfigError);
  CHECK_THROWS_AS(apply_config_text("[colors]", scan, layout), ConfigError);
  CHECK_THROWS_AS(apply_config_text("exclude_globs = [\"a\"", scan, layout), ConfigError);
  CHECK_THROWS_AS(apply_config_text("count_params = yes", scan, layout), ConfigError);
  CHECK_THROWS_AS(apply_config_text("max_file_bytes = -4", scan, layout), ConfigError);
  CHECK_THROWS_AS(apply_config_text("width_mapping = \"log\"", scan, layout), ConfigError);
}

TEST_CASE("missing config file leaves defaults alone") {
  test::TempDir dir;
  ScanConfig scan;
  LayoutConfig layout;
  CHECK_FALSE(apply_config_file(dir.path(), scan, layout));
  CHECK(scan == ScanConfig{});
  CHECK(layout == LayoutConfig{});
  test::write_file(dir / "jscity.toml", "gutter = 3\n");
  CHECK(apply_config_file(dir.path(), scan, layout));
  CHECK(layout.gutter == 3);
}
