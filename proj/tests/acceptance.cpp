// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "process.hpp"
#include "random_tree.hpp"
#include "jscity/estree.hpp"
#include "jscity/metrics.hpp"
#include "jscity/pipeline.hpp"
#include "jscity/scene.hpp"

using namespace jscity;
using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

fs::path corpus_dir() { return test::fixtures_dir() / "corpus"; }

std::string field(const std::string& output, const std::string& key) {
  const auto pos = output.find(key);
  if (pos == std::string::npos) return "";
  const auto start = output.find_first_not_of(' ', pos + key.size());
  return output.substr(start, output.find('\n', start) - start);
}

Outcome metrics_oracle() {
  const auto start = Clock::now();
  const json expected = json::parse(test::read_file(corpus_dir() / "expected.json"));
  const ScanResult scan = scan_sources(corpus_dir(), ScanConfig{});
  const CodeTree tree = build_code_tree(analyze_units(scan.units, ScanConfig{}), "corpus");
  const MetricsIndex index = compute_metrics(tree);

  std::size_t rows = 0;
  std::size_t mismatches = 0;
  std::string first;
  for (const auto& [path, file] : expected["files"].items()) {
    for (const auto& row : file["functions"]) {
      ++rows;
      const auto it = index.find(row[0].get<std::string>());
      const bool ok = it != index.end() && it->second.loc_total == row[7].get<std::uint64_t>() &&
                      it->second.loc_own == row[8].get<std::uint64_t>() &&
                      it->second.nov_own == row[9].get<std::uint64_t>() &&
                      it->second.nov_agg == row[10].get<std::uint64_t>();
      if (!ok) {
        ++mismatches;
        if (first.empty()) first = row[0].get<std::string>();
      }
    }
  }
  const bool counts_ok = index.size() == rows && summarize(tree, index) == expected["stats"].get<ProjectStats>();
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = mismatches == 0 && counts_ok && rows > 0 && elapsed < 1.0;
  out.detail = std::to_string(rows) + " functions, " + std::to_string(mismatches) + " mismatches" +
               (first.empty() ? "" : " (first " + first + ")") + (counts_ok ? "" : ", stats differ") + ", " +
               fmt_seconds(elapsed);
  return out;
}

Outcome ingestion_equivalence() {
  std::size_t files = 0;
  std::size_t differing = 0;
  std::string first;
  for (const char* dir : {"corpus", "parser"}) {
    for (const auto& entry : fs::recursive_directory_iterator(test::fixtures_dir() / dir)) {
      if (entry.path().extension() != ".js") continue;
      fs::path ref = entry.path();
      ref.replace_extension(".estree.json");
      const std::string rel = fs::relative(entry.path(), test::fixtures_dir()).generic_string();
      const std::string text = test::read_file(entry.path());
      const FileNode from_source = analyze_unit({rel, text, text.size()}, ScanConfig{});
      const FileNode from_json = analyze_estree(json::parse(test::read_file(ref)), rel);
      ++files;
      if (from_source.parse_status != ParseStatus::ok || !(from_source == from_json)) {
        ++differing;
        if (first.empty()) first = rel;
      }
    }
  }
  return {files > 0 && differing == 0, std::to_string(files) + " files, " + std::to_string(differing) +
                                           " differing" + (first.empty() ? "" : " (first " + first + ")")};
}

Outcome geometry_suite() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t problems = 0;
  std::size_t pairs = 0;
  std::size_t identities = 0;
  std::string first;
  for (int i = 0; i < 200; ++i) {
    const CodeTree tree = test::random_code_tree(rng);
    LayoutConfig config;
    if (i % 3 == 1) config.width_mapping = WidthMapping::linear;
    if (i % 5 == 2) config.gutter = 0.25;
    const CityScene scene = build_city(tree, compute_metrics(tree), {"random", "t", config, ScanConfig{}});
    const test::GeometryReport report = test::audit_geometry(scene, tree);
    problems += report.problems.size();
    pairs += report.overlap_pairs_checked;
    identities += report.exact_identities_checked;
    if (first.empty() && !report.problems.empty()) first = report.problems.front();
  }
  const double elapsed = seconds_since(start);
  return {problems == 0 && identities > 0 && elapsed < 10.0,
          "200 trees, " + std::to_string(pairs) + " sibling pairs, " + std::to_string(identities) +
              " exact stack identities, " + std::to_string(problems) + " problems" +
              (first.empty() ? "" : " (first: " + first + ")") + ", " + fmt_seconds(elapsed)};
}

Outcome determinism() {
  test::TempDir store_a;
  test::TempDir store_b;
  const auto a = test::run_cli({"analyze", corpus_dir().string(), "--project", "det", "--store", store_a.path().string()});
  const auto b = test::run_cli({"analyze", corpus_dir().string(), "--project", "det", "--threads", "1", "--store",
                                store_b.path().string()});
  if (a.exit_code != 0 || b.exit_code != 0) return {false, "analyze failed"};
  const std::string na = serialize(parse_scene(test::read_file(field(a.output, "scene:"))), true);
  const std::string nb = serialize(parse_scene(test::read_file(field(b.output, "scene:"))), true);
  const std::string id_a = field(a.output, "analysis_id:");
  const std::string id_b = field(b.output, "analysis_id:");
  return {na == nb && id_a == id_b && !id_a.empty(),
          "analysis_id " + id_a + (id_a == id_b ? " == " : " != ") + id_b + ", normalized bytes " +
              (na == nb ? "identical" : "differ")};
}

std::string synthetic_file(int index) {
  // Five functions per group: declaration, arrow, expression, method, class method.
  std::ostringstream out;
  for (int g = 0; g < 4; ++g) {
    out << "function f" << index << "_" << g << "(a, b) {\n"
        << "  var x = a + b;\n"
        << "  const h = () => {\n"
        << "    let y = x;\n"
        << "    return [y].map(function (v) { return v * 2; });\n"
        << "  };\n"
        << "  const o = { m() { return x; } };\n"
        << "  class C { k(z) { return z; } }\n"
        << "  return h() + o.m() + new C().k(1);\n"
        << "}\n";
  }
  return out.str();
}

Outcome scale_smoke() {
  test::TempDir src;
  test::TempDir store;
  for (int i = 0; i < 500; ++i) {
    const std::string dir = "pkg" + std::to_string(i / 50) + "/mod" + std::to_string(i / 10 % 5);
    test::write_file(src / (dir + "/file" + std::to_string(i) + ".js"), synthetic_file(i));
  }
  const auto start = Clock::now();
  const auto r = test::run_cli({"analyze", src.path().string(), "--project", "scale", "--store", store.path().string()});
  const double elapsed = seconds_since(start);
  if (r.exit_code != 0) return {false, "analyze exited " + std::to_string(r.exit_code)};
  const std::string scene_path = field(r.output, "scene:");
  const CityScene scene = parse_scene(test::read_file(scene_path));
  const std::uint64_t functions = scene.stats.named_function_count + scene.stats.anonymous_function_count;
  const auto v = test::run_cli({"validate", scene_path});
  return {functions == 10000 && scene.stats.file_count == 500 && elapsed < 30.0 && v.exit_code == 0,
          std::to_string(functions) + " functions in " + std::to_string(scene.stats.file_count) + " files, " +
              std::to_string(scene.boxes.size()) + " boxes, analyze " + fmt_seconds(elapsed) + ", validate exit " +
              std::to_string(v.exit_code)};
}

Outcome corrupted_goldens() {
  const fs::path golden = test::fixtures_dir() / "golden";
  std::string detail;
  bool pass = test::run_cli({"validate", (golden / "corpus_scene.json").string()}).exit_code == 0;
  detail += "pristine " + std::string(pass ? "valid" : "INVALID");
  for (const char* name : {"corrupt_overlap", "corrupt_containment", "corrupt_color_role", "corrupt_missing_metrics",
                           "corrupt_schema"}) {
    const int code = test::run_cli({"validate", (golden / (std::string(name) + ".json")).string()}).exit_code;
    pass = pass && code == 3;
    detail += std::string(", ") + name + "=" + std::to_string(code);
  }
  return {pass, detail};
}

Outcome server_contract() {
  test::TempDir store;
  const auto a = test::run_cli({"analyze", corpus_dir().string(), "--project", "srv", "--store", store.path().string()});
  if (a.exit_code != 0) return {false, "analyze failed"};
  const std::string id = field(a.output, "analysis_id:");
  const std::string stored = test::read_file(field(a.output, "scene:"));

  // No --assets and no JSCITY_VIEWER_DIR: the viewer bundle is absent.
  ::unsetenv("JSCITY_VIEWER_DIR");
  test::BackgroundCli server({"serve", "srv", "--port", "0", "--store", store.path().string()});
  const std::string banner = server.read_line();
  const auto colon = banner.rfind(':');
  if (banner.rfind("serving ", 0) != 0 || colon == std::string::npos) return {false, "no banner: " + banner};
  const int port = std::stoi(banner.substr(colon + 1));

  httplib::Client client("127.0.0.1", port);
  const auto city = client.Get("/api/city");
  const bool bytes_equal = city && city->status == 200 && city->body == stored;
  const std::string etag = city ? city->get_header_value("ETag") : "";
  const auto cached = client.Get("/api/city", {{"If-None-Match", etag}});
  const bool not_modified = cached && cached->status == 304 && etag == "\"" + id + "\"";
  const auto health = client.Get("/healthz");
  const bool healthy = health && health->status == 200;
  const auto index = client.Get("/");
  const bool placeholder = index && index->status == 200;
  const int exit_code = server.terminate();

  return {bytes_equal && not_modified && healthy && placeholder && exit_code == 0,
          std::string("byte-equal=") + (bytes_equal ? "yes" : "no") + ", 304=" + (not_modified ? "yes" : "no") +
              ", healthz=" + (healthy ? "200" : "fail") + ", placeholder=" + (placeholder ? "yes" : "no") +
              ", shutdown exit " + std::to_string(exit_code)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"metrics oracle on the hand-counted corpus", metrics_oracle},
      {"ingestion equivalence (source vs ESTree JSON)", ingestion_equivalence},
      {"geometry invariants over 200 random trees", geometry_suite},
      {"determinism of two analyze runs", determinism},
      {"scale smoke test (10,000 functions, 500 files)", scale_smoke},
      {"validate rejects 5 corrupted golden scenes", corrupted_goldens},
      {"server contract without the viewer", server_contract},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::printf("%s  %s: %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
