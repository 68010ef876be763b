#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "jscity/code_model.hpp"
#include "jscity/estree.hpp"
#include "jscity/js_parser.hpp"

using namespace jscity;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> scanned_paths(const fs::path& root, const ScanConfig& config = {}) {
  std::vector<std::string> out;
  for (const auto& u : scan_sources(root, config).units) out.push_back(u.path);
  return out;
}

FileNode analyze_text(const std::string& text, const std::string& path = "t.js") {
  return analyze_unit(SourceUnit{path, text, text.size()}, ScanConfig{});
}

std::vector<fs::path> corpus_sources() {
  std::vector<fs::path> out;
  for (const char* dir : {"parser", "corpus"}) {
    for (const auto& e : fs::recursive_directory_iterator(test::fixtures_dir() / dir)) {
      if (e.path().extension() == ".js") out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("scan_sources on an empty directory") {
  test::TempDir dir;
  CHECK(scanned_paths(dir.path()).empty());
}

TEST_CASE("scan_sources applies the default excludes") {
  test::TempDir dir;
  test::write_file(dir / "a.js", "1");
  test::write_file(dir / "lib/b.js", "2");
  test::write_file(dir / "node_modules/c.js", "3");
  test::write_file(dir / "lib/node_modules/d.js", "4");
  test::write_file(dir / ".git/hooks/e.js", "5");
  test::write_file(dir / "notes.txt", "6");
  test::write_file(dir / "x.mjs", "7");
  test::write_file(dir / "y.cjs", "8");
  CHECK(scanned_paths(dir.path()) == std::vector<std::string>{"a.js", "lib/b.js", "x.mjs", "y.cjs"});
}

TEST_CASE("scan_sources skips minified-named files by default") {
  test::TempDir dir;
  test::write_file(dir / "x.min.js", "1");
  CHECK(scanned_paths(dir.path()).empty());
}

TEST_CASE("scan_sources is sorted and repeatable") {
  test::TempDir dir;
  for (const char* p : {"z.js", "a/b.js", "a.js", "A.js", "a/a/a.js"}) test::write_file(dir / p, "");
  const auto first = scanned_paths(dir.path());
  CHECK(std::is_sorted(first.begin(), first.end()));
  CHECK(first == scanned_paths(dir.path()));
}

TEST_CASE("scan_sources reports bad input as warnings") {
  test::TempDir dir;
  test::write_file(dir / "ok.js", "x");
  test::write_file(dir / "latin1.js", "var s = '\xE9';");
  const ScanResult r = scan_sources(dir.path(), ScanConfig{});
  REQUIRE(r.units.size() == 1);
  CHECK(r.units[0].path == "ok.js");
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].path == "latin1.js");
  CHECK_THROWS_AS(scan_sources(dir / "missing", ScanConfig{}), ScanError);
  CHECK_THROWS_AS(scan_sources(dir / "ok.js", ScanConfig{}), ScanError);
}

TEST_CASE("glob matching") {
  CHECK(glob_match("*.min.js", "x.min.js"));
  CHECK(glob_match("*.min.js", "deep/dir/x.min.js"));
  CHECK_FALSE(glob_match("*.min.js", "x.js"));
  CHECK(glob_match("node_modules/**", "node_modules/a/b.js"));
  CHECK(glob_match("node_modules/**", "pkg/node_modules/a.js"));
  CHECK_FALSE(glob_match("/node_modules/**", "pkg/node_modules/a.js"));
  CHECK(glob_match("/node_modules/**", "node_modules/a.js"));
  CHECK(glob_match("src/**/test?.js", "src/a/b/test1.js"));
  CHECK(glob_match("src/**/test?.js", "src/test1.js"));
  CHECK_FALSE(glob_match("src/*.js", "src/a/b.js"));
  CHECK(is_excluded("vendor/x.js", {"vendor/**"}));
  CHECK_FALSE(is_excluded("src/vendorx.js", {"vendor/**"}));
}

TEST_CASE("parse_unit examples") {
  ScanConfig config;
  CHECK(analyze_text("").functions.empty());
  const FileNode one = analyze_text("function a(){}");
  REQUIRE(one.functions.size() == 1);
  CHECK(one.functions[0].start_line == 1);
  CHECK(one.functions[0].end_line == 1);
  const FileNode bad = analyze_text("function a( {");
  CHECK(bad.parse_status == ParseStatus::parse_error);
  CHECK(bad.error_message.has_value());
}

TEST_CASE("minified heuristics") {
  ScanConfig config;
  config.max_line_chars = 20;
  const std::string long_line = "var x = [" + std::string(30, '1') + "];\n";
  ParsedUnit p = parse_unit(SourceUnit{"m.js", long_line, long_line.size()}, config);
  CHECK(p.status == ParseStatus::skipped_minified);

  config = ScanConfig{};
  config.max_file_bytes = 10;
  const std::string text = "var a = 1;\nvar b = 2;\n";
  p = parse_unit(SourceUnit{"big.js", text, text.size()}, config);
  CHECK(p.status == ParseStatus::skipped_minified);

  // Exactly at the limit is still fine.
  config = ScanConfig{};
  config.max_line_chars = 10;
  p = parse_unit(SourceUnit{"edge.js", "var a = 1;", 10}, config);
  CHECK(p.status == ParseStatus::ok);
}

TEST_CASE("load_estree_json examples") {
  const json empty = {{"type", "Program"},
                      {"body", json::array()},
                      {"loc", {{"start", {{"line", 1}, {"column", 0}}}, {"end", {{"line", 1}, {"column", 0}}}}}};
  CHECK(extract_functions(*load_estree_json(empty).program, "e.js").functions.empty());

  const json no_loc = json::parse(R"({"type":"Program","body":[{"type":"FunctionDeclaration"}]})");
  try {
    load_estree_json(no_loc);
    FAIL("expected EstreeError");
  } catch (const EstreeError& e) {
    CHECK(e.path() == "body[0]");
    CHECK(std::string(e.what()).find("body[0]") != std::string::npos);
  }
  CHECK_THROWS_AS(load_estree_json(json::array()), EstreeError);
  CHECK_THROWS_AS(load_estree_json(json::parse(R"({"body":[]})")), EstreeError);
  CHECK_THROWS_AS(load_estree_json(json::parse(R"({"type":"Program","body":[{"loc":null}]})")), EstreeError);
}

TEST_CASE("ESTree of function a(){} matches the parser route") {
  const json doc = json::parse(R"({"type":"Program","sourceType":"module",
    "loc":{"start":{"line":1,"column":0},"end":{"line":1,"column":14}},
    "body":[{"type":"FunctionDeclaration","async":false,"generator":false,"expression":false,"params":[],
      "loc":{"start":{"line":1,"column":0},"end":{"line":1,"column":14}},
      "id":{"type":"Identifier","name":"a","loc":{"start":{"line":1,"column":9},"end":{"line":1,"column":10}}},
      "body":{"type":"BlockStatement","body":[],"loc":{"start":{"line":1,"column":12},"end":{"line":1,"column":14}}}}]})");
  CHECK(analyze_estree(doc, "t.js") == analyze_text("function a(){}"));
}

TEST_CASE("extract_functions examples") {
  const FileNode f = analyze_text("function a(){ var x; function b(){ let y, z; } }");
  REQUIRE(f.functions.size() == 1);
  const FunctionNode& a = f.functions[0];
  CHECK(a.name == "a");
  CHECK(a.naming == Naming::named);
  CHECK(a.own_var_count == 1);
  REQUIRE(a.children.size() == 1);
  CHECK(a.children[0].name == "b");
  CHECK(a.children[0].own_var_count == 2);

  const FileNode g = analyze_text("var f = function(){};");
  REQUIRE(g.functions.size() == 1);
  CHECK(g.functions[0].naming == Naming::anonymous);
  CHECK(g.functions[0].kind == FunctionKind::expression);
  CHECK(g.functions[0].own_var_count == 0);

  const FileNode h = analyze_text("const g = () => 1;");
  REQUIRE(h.functions.size() == 1);
  CHECK(h.functions[0].kind == FunctionKind::arrow);
  CHECK(h.functions[0].naming == Naming::anonymous);
}

TEST_CASE("function ids are pre-order and unique") {
  const FileNode f = analyze_text("function a(){ function b(){} }\nconst c = () => { return () => 1; };", "x/y.js");
  std::vector<std::string> ids;
  for_each_function(f.functions, [&](const FunctionNode& fn) { ids.push_back(fn.id); });
  CHECK(ids == std::vector<std::string>{"x/y.js#0", "x/y.js#1", "x/y.js#2", "x/y.js#3"});
}

TEST_CASE("count_params folds parameters in only when asked") {
  const FileNode f = analyze_text("function a(p, {q, r}, ...s){ var x; }");
  CHECK(f.functions[0].param_count == 3);
  CHECK(f.functions[0].own_var_count == 1);
}

TEST_CASE("build_code_tree examples") {
  CHECK(build_code_tree({}, "p").root.files.empty());
  CHECK(build_code_tree({}, "p").root.directories.empty());

  std::vector<FileNode> files(3);
  files[0].path = "lib/sub/c.js";
  files[1].path = "a.js";
  files[2].path = "lib/b.js";
  const CodeTree t = build_code_tree(files, "p");
  REQUIRE(t.root.files.size() == 1);
  CHECK(t.root.files[0].path == "a.js");
  REQUIRE(t.root.directories.size() == 1);
  const DirectoryNode& lib = t.root.directories[0];
  CHECK(lib.name == "lib");
  REQUIRE(lib.files.size() == 1);
  CHECK(lib.files[0].path == "lib/b.js");
  REQUIRE(lib.directories.size() == 1);
  CHECK(lib.directories[0].path == "lib/sub");
  CHECK(lib.directories[0].files[0].path == "lib/sub/c.js");

  std::vector<FileNode> single(1);
  single[0].path = "x/y.js";
  const CodeTree s = build_code_tree(single, "p");
  REQUIRE(s.root.directories.size() == 1);
  CHECK(s.root.directories[0].files[0].path == "x/y.js");
  CHECK(s.root.files.empty());

  std::vector<FileNode> dup(2);
  dup[0].path = dup[1].path = "a.js";
  CHECK_THROWS_AS(build_code_tree(dup, "p"), CodeTreeError);
  std::vector<FileNode> bad(1);
  bad[0].path = "../a.js";
  CHECK_THROWS_AS(build_code_tree(bad, "p"), CodeTreeError);
}

TEST_CASE("build_code_tree does not depend on input order") {
  std::vector<FileNode> files(4);
  const char* paths[] = {"b/x.js", "a.js", "b/c/d.js", "b/a.js"};
  for (int i = 0; i < 4; ++i) files[i].path = paths[i];
  const CodeTree t1 = build_code_tree(files, "p");
  std::reverse(files.begin(), files.end());
  const CodeTree t2 = build_code_tree(files, "p");
  std::vector<std::string> o1, o2;
  for_each_file(t1.root, [&](const FileNode& f) { o1.push_back(f.path); });
  for_each_file(t2.root, [&](const FileNode& f) { o2.push_back(f.path); });
  CHECK(o1 == o2);
}

TEST_CASE("ingestion equivalence on every fixture") {
  for (const auto& js : corpus_sources()) {
    fs::path ref = js;
    ref.replace_extension(".estree.json");
    CAPTURE(js.string());
    const std::string rel = fs::relative(js, test::fixtures_dir()).generic_string();
    const FileNode from_source = analyze_text(test::read_file(js), rel);
    const FileNode from_json = analyze_estree(json::parse(test::read_file(ref)), rel);
    REQUIRE(from_source.parse_status == ParseStatus::ok);
    CHECK(from_source == from_json);
  }
}

TEST_CASE("nesting soundness and scope attribution on every fixture") {
  for (const auto& js : corpus_sources()) {
    fs::path ref = js;
    ref.replace_extension(".estree.json");
    CAPTURE(js.string());
    const FileNode file = analyze_text(test::read_file(js), js.filename().string());
    CHECK(check_file_invariants(file).empty());

    const test::DeclaratorCensus census = test::count_declarators(json::parse(test::read_file(ref)));
    std::uint64_t own_sum = 0;
    for_each_function(file.functions, [&](const FunctionNode& fn) { own_sum += fn.own_var_count; });
    CHECK(own_sum == census.total - census.top_level);
  }
}

TEST_CASE("check_file_invariants flags broken structure") {
  FileNode f = analyze_text("function a(){\n function b(){}\n}\n");
  REQUIRE(check_file_invariants(f).empty());
  f.functions[0].children[0].end_line = 9;
  CHECK_FALSE(check_file_invariants(f).empty());
  f = analyze_text("function a(){}\nfunction b(){}\n");
  f.functions[1].id = f.functions[0].id;
  CHECK_FALSE(check_file_invariants(f).empty());
}
