#include <doctest.h>

#include <nlohmann/json.hpp>

#include <thread>

#include "fixtures.hpp"
#include "jscity/pipeline.hpp"
#include "jscity/store.hpp"

using namespace jscity;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

CityScene make_scene(const std::string& source, LayoutConfig layout = {}) {
  std::vector<SourceUnit> units{{"a.js", source, source.size()}};
  const CodeTree tree = build_code_tree(analyze_units(units, ScanConfig{}), "p");
  return build_city(tree, compute_metrics(tree), {"p", "2024-01-01T00:00:00Z", layout, ScanConfig{}});
}

std::size_t index_length(const fs::path& root, const std::string& project) {
  const json doc = json::parse(test::read_file(root / project / "index.json"));
  return doc["records"].size();
}

}  // namespace

TEST_CASE("sha256 matches the published test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("saving the same scene twice is a no-op") {
  test::TempDir store;
  const CityScene s = make_scene("function a(){}");
  const AnalysisRecord r1 = save("p", s, store.path());
  const AnalysisRecord r2 = save("p", s, store.path());
  CHECK(r1 == r2);
  CHECK(index_length(store.path(), "p") == 1);
  CHECK(r1.analysis_id.size() == 16);
  CHECK(r1.analysis_id == sha256_hex(serialize(s, true)).substr(0, 16));
  CHECK(fs::exists(store / ("p/" + r1.analysis_id + ".json")));
}

TEST_CASE("analysis id ignores generated_at but not configuration") {
  test::TempDir store;
  CityScene s1 = make_scene("function a(){}");
  CityScene s2 = s1;
  s2.generated_at = "2030-01-01T00:00:00Z";
  CHECK(analysis_id_for(s1) == analysis_id_for(s2));
  LayoutConfig taller;
  taller.height_scale = 0.5;
  const CityScene s3 = make_scene("function a(){}", taller);
  const AnalysisRecord r1 = save("p", s1, store.path());
  const AnalysisRecord r3 = save("p", s3, store.path());
  CHECK(r1.analysis_id != r3.analysis_id);
  CHECK(index_length(store.path(), "p") == 2);
}

TEST_CASE("load returns what was saved") {
  test::TempDir store;
  const CityScene s = make_scene("function a(){ var x; }");
  const AnalysisRecord r = save("p", s, store.path());
  CHECK(serialize(load("p", r.analysis_id, store.path()), true) == serialize(s, true));
  // Coordinates are rounded on disk, so compare through the canonical form.
  CHECK(serialize(load("p", std::nullopt, store.path()), true) == serialize(s, true));
  CHECK(read_scene_bytes(r, store.path()) == serialize(s));
}

TEST_CASE("load without an id picks the newest record") {
  test::TempDir store;
  const CityScene older = make_scene("function a(){}");
  const CityScene newer = make_scene("function b(){}\nfunction c(){}");
  SaveOptions o1, o2;
  o1.created_at = "2024-01-02T00:00:00.000Z";
  o2.created_at = "2024-01-01T00:00:00.000Z";
  save("p", newer, store.path(), o1);
  save("p", older, store.path(), o2);
  CHECK(load("p", std::nullopt, store.path()) == newer);
}

TEST_CASE("equal timestamps fall back to the id") {
  test::TempDir store;
  SaveOptions same;
  same.created_at = "2024-01-01T00:00:00.000Z";
  const AnalysisRecord r1 = save("p", make_scene("function a(){}"), store.path(), same);
  const AnalysisRecord r2 = save("p", make_scene("function b(){}"), store.path(), same);
  const std::string smaller = std::min(r1.analysis_id, r2.analysis_id);
  CHECK(find_record("p", std::nullopt, store.path()).analysis_id == smaller);
}

TEST_CASE("load of an unknown id lists the available ones") {
  test::TempDir store;
  const AnalysisRecord r = save("p", make_scene("function a(){}"), store.path());
  try {
    load("p", std::string("0123456789abcdef"), store.path());
    FAIL("expected NotFoundError");
  } catch (const NotFoundError& e) {
    CHECK(std::string(e.what()).find(r.analysis_id) != std::string::npos);
  }
  CHECK_THROWS_AS(load("nobody", std::nullopt, store.path()), NotFoundError);
}

TEST_CASE("list is newest first and carries stats") {
  test::TempDir store;
  CHECK(list("p", store.path()).empty());
  const char* sources[] = {"function a(){}", "function a(){}\nfunction b(){}", "x(() => 1)"};
  const char* stamps[] = {"2024-01-01T00:00:00.000Z", "2024-03-01T00:00:00.000Z", "2024-02-01T00:00:00.000Z"};
  std::vector<CityScene> scenes;
  for (int i = 0; i < 3; ++i) {
    SaveOptions o;
    o.created_at = stamps[i];
    scenes.push_back(make_scene(sources[i]));
    save("p", scenes.back(), store.path(), o);
  }
  const auto records = list("p", store.path());
  REQUIRE(records.size() == 3);
  CHECK(records[0].created_at == stamps[1]);
  CHECK(records[1].created_at == stamps[2]);
  CHECK(records[2].created_at == stamps[0]);
  CHECK(records[0].stats == scenes[1].stats);
  CHECK(records[1].stats == scenes[2].stats);
}

TEST_CASE("a crash before the index rename leaves the index intact") {
  test::TempDir store;
  save("p", make_scene("function a(){}"), store.path());
  const std::string before = test::read_file(store / "p/index.json");
  SaveOptions crash;
  crash.before_index_rename = [] { throw std::runtime_error("simulated crash"); };
  CHECK_THROWS_AS(save("p", make_scene("function b(){}"), store.path(), crash), std::runtime_error);
  CHECK(test::read_file(store / "p/index.json") == before);
  CHECK(list("p", store.path()).size() == 1);
  for (const auto& e : fs::directory_iterator(store / "p")) {
    CHECK(e.path().string().find(".tmp.") == std::string::npos);
  }
  // The orphaned scene file does not block a later save.
  save("p", make_scene("function b(){}"), store.path());
  CHECK(list("p", store.path()).size() == 2);
}

TEST_CASE("corrupt index gives a recovery hint and can be rebuilt") {
  test::TempDir store;
  const AnalysisRecord r = save("p", make_scene("function a(){}"), store.path());
  test::write_file(store / "p/index.json", "{ truncated");
  try {
    list("p", store.path());
    FAIL("expected StoreError");
  } catch (const StoreError& e) {
    CHECK(std::string(e.what()).find("rebuild") != std::string::npos);
  }
  const auto rebuilt = rebuild_index("p", store.path());
  REQUIRE(rebuilt.size() == 1);
  CHECK(rebuilt[0].analysis_id == r.analysis_id);
  CHECK(list("p", store.path()).size() == 1);
}

TEST_CASE("concurrent writers are serialized") {
  test::TempDir store;
  std::vector<CityScene> scenes;
  for (int i = 0; i < 8; ++i) scenes.push_back(make_scene("function f" + std::to_string(i) + "(){}"));
  std::vector<std::thread> writers;
  for (int i = 0; i < 8; ++i) writers.emplace_back([&, i] { save("p", scenes[i], store.path()); });
  for (auto& w : writers) w.join();
  CHECK(list("p", store.path()).size() == 8);
}

TEST_CASE("project names cannot escape the store") {
  test::TempDir store;
  const CityScene s = make_scene("");
  CHECK_THROWS_AS(save("../x", s, store.path()), StoreError);
  CHECK_THROWS_AS(save("", s, store.path()), StoreError);
  CHECK_THROWS_AS(save("..", s, store.path()), StoreError);
}

TEST_CASE("JSCITY_STORE sets the default root") {
  ::setenv("JSCITY_STORE", "/tmp/somewhere", 1);
  CHECK(default_store_root() == fs::path("/tmp/somewhere"));
  ::unsetenv("JSCITY_STORE");
  CHECK(default_store_root() == fs::path(".jscity-store"));
}
