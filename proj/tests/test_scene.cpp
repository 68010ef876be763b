#include <doctest.h>

#include <nlohmann/json.hpp>

#include <random>

#include "fixtures.hpp"
#include "random_tree.hpp"
#include "jscity/pipeline.hpp"
#include "jscity/scene.hpp"

using namespace jscity;
using nlohmann::json;

namespace {

CodeTree tree_from_sources(const std::vector<std::pair<std::string, std::string>>& sources) {
  std::vector<SourceUnit> units;
  for (const auto& [path, text] : sources) units.push_back({path, text, text.size()});
  return build_code_tree(analyze_units(units, ScanConfig{}), "t");
}

CityScene scene_of(const CodeTree& tree, const std::string& stamp = "2024-01-01T00:00:00Z") {
  return build_city(tree, compute_metrics(tree), {"demo", stamp, LayoutConfig{}, ScanConfig{}});
}

const Box3D& box(const CityScene& s, const std::string& id) {
  for (const auto& b : s.boxes) {
    if (b.id == id) return b;
  }
  throw std::runtime_error("no box " + id);
}

bool has_kind(const std::vector<Violation>& vs, const std::string& kind) {
  for (const auto& v : vs) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("empty tree gives an empty scene") {
  const CityScene s = scene_of(build_code_tree({}, "e"));
  CHECK(s.boxes.empty());
  CHECK(s.stats == ProjectStats{});
  CHECK(validate(serialize(s)).empty());
}

TEST_CASE("empty scene matches the golden bytes") {
  CityScene s = scene_of(build_code_tree({}, "e"));
  s.project = "empty";
  std::string golden = test::read_file(test::fixtures_dir() / "golden/empty_scene.json");
  while (!golden.empty() && golden.back() == '\n') golden.pop_back();
  CHECK(serialize(s, true) == golden);
}

TEST_CASE("nested functions become stacked buildings") {
  const CityScene s = scene_of(
      tree_from_sources({{"a.js", "function a(){\n  var x;\n  function b(){\n    let y, z;\n  }\n}\n"}}));
  REQUIRE(s.boxes.size() == 3);
  CHECK(s.boxes[0].kind == BoxKind::subdistrict);
  CHECK(s.boxes[0].color_role == ColorRole::subdistrict);
  const Box3D& a = box(s, "a.js#0");
  const Box3D& b = box(s, "a.js#1");
  CHECK(b.min[1] == a.min[1] + a.size[1]);
  CHECK(b.parent == "a.js#0");
  CHECK(a.parent == "file:a.js");
  CHECK(a.metrics_ref == MetricsRef{3, 6, 1, 3});
  CHECK(a.source_ref == SourceRef{"a.js", 1, 6});
}

TEST_CASE("named and anonymous roles") {
  const CityScene s = scene_of(tree_from_sources({{"a.js", "function named(){}\nconst f = () => 1;\n"}}));
  int named = 0, anonymous = 0;
  for (const auto& b : s.boxes) {
    named += b.color_role == ColorRole::named_function;
    anonymous += b.color_role == ColorRole::anonymous_function;
  }
  CHECK(named == 1);
  CHECK(anonymous == 1);
  CHECK(s.palette == Palette{"#F0C419", "#C0392B", "#2D6FB8", "#2FA05A"});
}

TEST_CASE("box count identity") {
  const CodeTree tree = tree_from_sources({{"a.js", "function a(){ function b(){} }"},
                                          {"x/y/c.js", "const c = () => () => 1;"},
                                          {"x/d.js", ""},
                                          {"z/broken.js", "function ("}});
  const CityScene s = scene_of(tree);
  // 4 functions + 3 parsed files + 2 directories (x, x/y); z holds no parsed file.
  CHECK(s.boxes.size() == 9);
  CHECK(s.stats.directory_count == 2);
  CHECK(validate(serialize(s)).empty());
}

TEST_CASE("build_city names a function without metrics") {
  const CodeTree tree = tree_from_sources({{"a.js", "function a(){}"}});
  CHECK_THROWS_WITH_AS(build_city(tree, MetricsIndex{}, {"p", "t", LayoutConfig{}, ScanConfig{}}),
                       doctest::Contains("a.js#0"), std::exception);
}

TEST_CASE("canonical number formatting") {
  CHECK(canonical_dump(json(0.1 + 0.2)) == "0.3");
  CHECK(canonical_dump(json(1.0)) == "1");
  CHECK(canonical_dump(json(-0.0)) == "0");
  CHECK(canonical_dump(json(-1e-9)) == "0");
  CHECK(canonical_dump(json(2.5)) == "2.5");
  CHECK(canonical_dump(json(1234567.1234567)) == "1234567.123457");
  CHECK(canonical_dump(json(42)) == "42");
  CHECK(canonical_dump(json::parse(R"({"b":[1,2.50],"a":"é\n"})")) == "{\"a\":\"\xC3\xA9\\n\",\"b\":[1,2.5]}");
}

TEST_CASE("serialize, parse, serialize is stable") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const CodeTree tree = test::random_code_tree(rng);
    const std::string once = serialize(scene_of(tree));
    const std::string twice = serialize(parse_scene(once));
    CHECK(once == twice);
  }
}

TEST_CASE("normalization hides generated_at") {
  const CodeTree tree = tree_from_sources({{"a.js", "function a(){}"}});
  const CityScene s1 = scene_of(tree, "2024-01-01T00:00:00Z");
  const CityScene s2 = scene_of(tree, "2025-06-30T12:34:56Z");
  CHECK(serialize(s1) != serialize(s2));
  CHECK(serialize(s1, true) == serialize(s2, true));
  CHECK(json::parse(serialize(s1, true))["generated_at"] == "1970-01-01T00:00:00Z");
}

TEST_CASE("validate examples") {
  const std::vector<Violation> empty_doc = validate("{}");
  REQUIRE_FALSE(empty_doc.empty());
  CHECK(empty_doc[0].kind == "schema");
  CHECK(empty_doc[0].message == "missing format_version");

  const std::vector<Violation> bad = validate("{not json");
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].message.find("malformed JSON") == 0);
}

TEST_CASE("validate finds overlapping siblings by id") {
  const CityScene s = scene_of(tree_from_sources({{"a.js", "function a(){}\nfunction b(){}\n"}}));
  json doc = json::parse(serialize(s));
  json& boxes = doc["boxes"];
  json* first = nullptr;
  json* second = nullptr;
  for (auto& b : boxes) {
    if (b["id"] == "a.js#0") first = &b;
    if (b["id"] == "a.js#1") second = &b;
  }
  REQUIRE(first);
  REQUIRE(second);
  (*second)["min"] = (*first)["min"];
  const auto vs = validate(canonical_dump(doc));
  REQUIRE(has_kind(vs, "overlap"));
  for (const auto& v : vs) {
    if (v.kind != "overlap") continue;
    CHECK(std::find(v.box_ids.begin(), v.box_ids.end(), "a.js#0") != v.box_ids.end());
    CHECK(std::find(v.box_ids.begin(), v.box_ids.end(), "a.js#1") != v.box_ids.end());
  }
}

TEST_CASE("validate catches each corrupted golden scene") {
  const auto dir = test::fixtures_dir() / "golden";
  CHECK(validate(test::read_file(dir / "corpus_scene.json")).empty());
  const std::pair<const char*, const char*> cases[] = {
      {"corrupt_overlap.json", "overlap"},
      {"corrupt_containment.json", "containment"},
      {"corrupt_color_role.json", "color_role"},
      {"corrupt_missing_metrics.json", "schema"},
      {"corrupt_schema.json", "schema"},
  };
  for (const auto& [file, kind] : cases) {
    CAPTURE(file);
    const auto vs = validate(test::read_file(dir / file));
    CHECK(has_kind(vs, kind));
  }
}

TEST_CASE("validate is clean on random scenes") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const CodeTree tree = test::random_code_tree(rng);
    LayoutConfig config;
    config.height_scale = i % 2 ? 0.1 : 0.25;
    config.gutter = i % 3 ? 1.0 : 0.7;
    const CityScene s = build_city(tree, compute_metrics(tree), {"r", "t", config, ScanConfig{}});
    const auto vs = validate(serialize(s));
    CAPTURE(i);
    CHECK(vs.empty());
    if (!vs.empty()) MESSAGE(format_violation(vs.front()));
  }
}

TEST_CASE("validate checks the stats against the boxes") {
  const CityScene s = scene_of(tree_from_sources({{"a.js", "function a(){}"}}));
  json doc = json::parse(serialize(s));
  doc["stats"]["named_function_count"] = 5;
  CHECK(has_kind(validate(canonical_dump(doc)), "count"));
}

TEST_CASE("validate checks metrics and heights") {
  const CityScene s = scene_of(
      tree_from_sources({{"a.js", "function a(){\n  var x;\n  function b(){\n    let y, z;\n  }\n}\n"}}));
  json doc = json::parse(serialize(s));
  for (auto& b : doc["boxes"]) {
    if (b["id"] == "a.js#0") b["metrics_ref"]["nov_agg"] = 1;
  }
  CHECK(has_kind(validate(canonical_dump(doc)), "metrics"));

  doc = json::parse(serialize(s));
  for (auto& b : doc["boxes"]) {
    if (b["id"] == "a.js#1") b["size"][1] = 2.0;
  }
  CHECK(has_kind(validate(canonical_dump(doc)), "stack_height"));
}
