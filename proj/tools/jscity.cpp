// jscity command-line entry point: analyze, stats, serve, validate, list.

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "jscity/config_file.hpp"
#include "jscity/pipeline.hpp"
#include "jscity/scene.hpp"
#include "jscity/server.hpp"
#include "jscity/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitNothingParsed = 2;
constexpr int kExitInvalidScene = 3;

struct Fatal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigFlags {
  std::optional<std::vector<std::string>> include_extensions;
  std::optional<std::vector<std::string>> exclude_globs;
  std::optional<std::uint64_t> max_file_bytes;
  std::optional<std::uint32_t> max_line_chars;
  bool count_params = false;
  std::optional<double> gutter, plate_height, height_scale, min_building_side, max_building_side;
  std::optional<std::string> width_mapping;
  bool no_config = false;
  unsigned threads = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--include-ext", include_extensions, "File extensions to analyze (e.g. .js)");
    cmd->add_option("--exclude", exclude_globs, "Exclude globs (replace the defaults)");
    cmd->add_option("--max-file-bytes", max_file_bytes, "Skip files larger than this");
    cmd->add_option("--max-line-chars", max_line_chars, "Skip files with a longer line");
    cmd->add_flag("--count-params", count_params, "Count parameters as variables");
    cmd->add_option("--gutter", gutter, "Spacing between packed footprints");
    cmd->add_option("--plate-height", plate_height, "Height of each district level");
    cmd->add_option("--height-scale", height_scale, "World units per line of code");
    cmd->add_option("--min-building-side", min_building_side, "Smallest building side");
    cmd->add_option("--max-building-side", max_building_side, "Largest mapped building side");
    cmd->add_option("--width-mapping", width_mapping, "sqrt or linear")
        ->check(CLI::IsMember({"sqrt", "linear"}));
    cmd->add_flag("--no-config", no_config, "Ignore <root>/jscity.toml");
    cmd->add_option("--threads", threads, "Parser threads (0 = all cores)");
  }

  void apply(const fs::path& root, jscity::AnalysisOptions& options) const {
    if (!no_config) jscity::apply_config_file(root, options.scan, options.layout);
    if (include_extensions) options.scan.include_extensions = *include_extensions;
    if (exclude_globs) options.scan.exclude_globs = *exclude_globs;
    if (max_file_bytes) options.scan.max_file_bytes = *max_file_bytes;
    if (max_line_chars) options.scan.max_line_chars = *max_line_chars;
    if (count_params) options.scan.count_params = true;
    if (gutter) options.layout.gutter = *gutter;
    if (plate_height) options.layout.plate_height = *plate_height;
    if (height_scale) options.layout.height_scale = *height_scale;
    if (min_building_side) options.layout.min_building_side = *min_building_side;
    if (max_building_side) options.layout.max_building_side = *max_building_side;
    if (width_mapping) options.layout.width_mapping = *jscity::parse_width_mapping(*width_mapping);
    options.threads = threads;
  }
};

struct Ref {
  std::string project;
  std::optional<std::string> analysis_id;
};

Ref parse_ref(const std::string& text) {
  Ref ref;
  const auto colon = text.find(':');
  ref.project = text.substr(0, colon);
  if (colon != std::string::npos) ref.analysis_id = text.substr(colon + 1);
  return ref;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Fatal("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string project_name_for(const fs::path& root) {
  fs::path abs = fs::weakly_canonical(fs::absolute(root));
  std::string name = abs.filename().string();
  return name.empty() ? "root" : name;
}

jscity::Analysis run_analysis(const fs::path& root, const std::string& project, const ConfigFlags& flags) {
  jscity::AnalysisOptions options;
  options.project = project;
  flags.apply(root, options);
  jscity::Analysis analysis = jscity::analyze_directory(root, options);
  for (const auto& w : analysis.warnings) std::cerr << "warning: " << w.path << ": " << w.message << "\n";
  return analysis;
}

void print_skipped(const jscity::Analysis& analysis) {
  if (analysis.skipped.empty()) return;
  std::cout << "skipped files (" << analysis.skipped.size() << "):\n";
  for (const auto* f : analysis.skipped) {
    std::cout << "  " << f->path << ": " << jscity::to_string(f->parse_status);
    if (f->error_message) std::cout << " (" << *f->error_message << ")";
    std::cout << "\n";
  }
}

json record_to_json(const jscity::AnalysisRecord& r) {
  return json{{"project", r.project},
              {"analysis_id", r.analysis_id},
              {"created_at", r.created_at},
              {"scene_path", r.scene_path},
              {"stats", r.stats}};
}

void print_stats(const jscity::ProjectStats& s, bool as_json) {
  if (as_json) {
    std::cout << json(s).dump(2) << "\n";
    return;
  }
  const std::pair<const char*, std::uint64_t> rows[] = {
      {"total_loc", s.total_loc},
      {"directory_count", s.directory_count},
      {"file_count", s.file_count},
      {"named_function_count", s.named_function_count},
      {"anonymous_function_count", s.anonymous_function_count},
      {"skipped_file_count", s.skipped_file_count},
  };
  for (const auto& [name, value] : rows) {
    std::printf("%-26s %llu\n", name, static_cast<unsigned long long>(value));
  }
  std::fflush(stdout);
}

int cmd_analyze(const fs::path& root, std::optional<std::string> project, const fs::path& store,
                const ConfigFlags& flags) {
  const std::string name = project.value_or(project_name_for(root));
  jscity::Analysis analysis = run_analysis(root, name, flags);
  print_skipped(analysis);
  if (analysis.nothing_parsed()) {
    std::cerr << "error: none of the " << analysis.scanned_file_count << " scanned files could be parsed\n";
    return kExitNothingParsed;
  }
  const jscity::AnalysisRecord record = jscity::save(name, analysis.scene, store);
  std::cout << "project:     " << record.project << "\n"
            << "analysis_id: " << record.analysis_id << "\n"
            << "created_at:  " << record.created_at << "\n"
            << "scene:       " << (store / record.scene_path).string() << "\n"
            << "boxes:       " << analysis.scene.boxes.size() << "\n";
  print_stats(record.stats, false);
  return kExitOk;
}

int cmd_stats(const std::string& target, bool as_json, const fs::path& store, const ConfigFlags& flags) {
  if (fs::is_directory(target)) {
    jscity::Analysis analysis = run_analysis(target, project_name_for(target), flags);
    if (!as_json) print_skipped(analysis);
    print_stats(analysis.scene.stats, as_json);
    return kExitOk;
  }
  const Ref ref = parse_ref(target);
  const jscity::AnalysisRecord record = jscity::find_record(ref.project, ref.analysis_id, store);
  print_stats(record.stats, as_json);
  return kExitOk;
}

int cmd_serve(const std::string& target, const std::string& host, int port, const fs::path& store,
              std::optional<fs::path> assets) {
  jscity::ServeContent content;
  std::string label;
  if (fs::is_regular_file(target)) {
    content.scene_bytes = read_text_file(target);
    const jscity::CityScene scene = jscity::parse_scene(content.scene_bytes);
    content.analysis_id = jscity::analysis_id_for(scene);
    content.stats_json = json(scene.stats).dump();
    label = target;
  } else {
    const Ref ref = parse_ref(target);
    const jscity::AnalysisRecord record = jscity::find_record(ref.project, ref.analysis_id, store);
    content.scene_bytes = jscity::read_scene_bytes(record, store);
    content.analysis_id = record.analysis_id;
    content.stats_json = json(record.stats).dump();
    label = record.project + ":" + record.analysis_id;
  }
  if (!assets) {
    if (const char* env = std::getenv("JSCITY_VIEWER_DIR"); env != nullptr && *env != '\0') assets = env;
  }
  content.assets_dir = assets;

  // Handle SIGINT/SIGTERM on a dedicated thread so the server can stop cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  jscity::CityServer server(std::move(content));
  const int bound = server.bind(host, port);
  std::cout << "serving " << label << " on http://" << host << ":" << bound << "/" << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  waiter.join();
  return kExitOk;
}

int cmd_validate(const fs::path& file) {
  const std::string text = read_text_file(file);
  const auto violations = jscity::validate(text);
  if (violations.empty()) {
    std::cout << file.string() << ": valid\n";
    return kExitOk;
  }
  for (const auto& v : violations) std::cout << jscity::format_violation(v) << "\n";
  std::cout << violations.size() << " violation(s)\n";
  return kExitInvalidScene;
}

int cmd_list(const std::string& project, bool as_json, bool rebuild, const fs::path& store) {
  const auto records = rebuild ? jscity::rebuild_index(project, store) : jscity::list(project, store);
  if (as_json) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_to_json(r));
    std::cout << arr.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& r : records) {
    std::cout << r.analysis_id << "  " << r.created_at << "  files=" << r.stats.file_count
              << " functions=" << (r.stats.named_function_count + r.stats.anonymous_function_count) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turn a JavaScript codebase into a 3D code city."};
  app.require_subcommand(1);
  fs::path store = jscity::default_store_root();
  app.add_option("--store", store, "Store directory (default $JSCITY_STORE or .jscity-store)");

  ConfigFlags flags;
  std::string root_arg, target, file_arg, project_arg, host = "127.0.0.1";
  std::optional<std::string> project;
  std::optional<fs::path> assets;
  bool as_json = false, rebuild = false;
  int port = 8080;

  auto* analyze = app.add_subcommand("analyze", "Analyze a source tree and store the scene");
  analyze->add_option("root", root_arg, "Source root")->required();
  analyze->add_option("--project", project, "Project name (default: root directory name)");
  flags.add_to(analyze);

  auto* stats = app.add_subcommand("stats", "Print project statistics");
  stats->add_option("target", target, "Source root or <project>[:<analysis_id>]")->required();
  stats->add_flag("--json", as_json, "Machine-readable output");
  flags.add_to(stats);

  auto* serve = app.add_subcommand("serve", "Serve a stored scene to the viewer");
  serve->add_option("target", target, "<project>[:<analysis_id>] or scene file")->required();
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--assets", assets, "Viewer bundle directory");

  auto* validate = app.add_subcommand("validate", "Check a scene document");
  validate->add_option("file", file_arg, "Scene JSON file")->required();

  auto* list = app.add_subcommand("list", "List stored analyses of a project");
  list->add_option("project", project_arg, "Project name")->required();
  list->add_flag("--json", as_json, "Machine-readable output");
  list->add_flag("--rebuild-index", rebuild, "Recreate index.json from the scene files first");

  for (auto* sub : {analyze, stats, serve, validate, list}) {
    sub->add_option("--store", store, "Store directory (default $JSCITY_STORE or .jscity-store)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (*analyze) return cmd_analyze(root_arg, project, store, flags);
    if (*stats) return cmd_stats(target, as_json, store, flags);
    if (*serve) return cmd_serve(target, host, port, store, assets);
    if (*validate) return cmd_validate(file_arg);
    if (*list) return cmd_list(project_arg, as_json, rebuild, store);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
