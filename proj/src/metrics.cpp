#include "jscity/metrics.hpp"

#include <nlohmann/json.hpp>

namespace jscity {

namespace {

FunctionMetrics visit(const FunctionNode& fn, const MetricsOptions& options, MetricsIndex& out) {
  FunctionMetrics m;
  m.loc_total = fn.end_line - fn.start_line + 1;
  m.nov_own = fn.own_var_count + (options.count_params ? fn.param_count : 0);
  m.nov_agg = m.nov_own;
  std::uint64_t children_loc = 0;
  for (const auto& child : fn.children) {
    const FunctionMetrics cm = visit(child, options, out);
    children_loc += cm.loc_total;
    m.nov_agg += cm.nov_agg;
  }
  if (children_loc > m.loc_total) {
    m.loc_own = 0;
    m.loc_clamped = true;
  } else {
    m.loc_own = m.loc_total - static_cast<std::uint32_t>(children_loc);
  }
  out[fn.id] = m;
  return m;
}

// Returns true when the directory holds at least one parsed file.
bool count_directory(const DirectoryNode& dir, const MetricsIndex& index, ProjectStats& stats) {
  bool has_ok = false;
  for (const auto& sub : dir.directories) {
    if (count_directory(sub, index, stats)) {
      ++stats.directory_count;
      has_ok = true;
    }
  }
  for (const auto& file : dir.files) {
    if (file.parse_status != ParseStatus::ok) {
      ++stats.skipped_file_count;
      continue;
    }
    has_ok = true;
    ++stats.file_count;
    stats.total_loc += file.line_count;
    for_each_function(file.functions, [&](const FunctionNode& fn) {
      if (!index.contains(fn.id)) throw MetricsError("no metrics for function " + fn.id);
      if (fn.naming == Naming::named) {
        ++stats.named_function_count;
      } else {
        ++stats.anonymous_function_count;
      }
    });
  }
  return has_ok;
}

}  // namespace

void compute_file_metrics(const FileNode& file, const MetricsOptions& options, MetricsIndex& out) {
  for (const auto& fn : file.functions) visit(fn, options, out);
}

MetricsIndex compute_metrics(const CodeTree& tree, const MetricsOptions& options) {
  MetricsIndex index;
  for_each_file(tree.root, [&](const FileNode& file) { compute_file_metrics(file, options, index); });
  return index;
}

ProjectStats summarize(const CodeTree& tree, const MetricsIndex& index) {
  ProjectStats stats;
  count_directory(tree.root, index, stats);
  return stats;
}

void to_json(nlohmann::json& j, const ProjectStats& s) {
  j = nlohmann::json{{"total_loc", s.total_loc},
                     {"directory_count", s.directory_count},
                     {"file_count", s.file_count},
                     {"named_function_count", s.named_function_count},
                     {"anonymous_function_count", s.anonymous_function_count},
                     {"skipped_file_count", s.skipped_file_count}};
}

void from_json(const nlohmann::json& j, ProjectStats& s) {
  j.at("total_loc").get_to(s.total_loc);
  j.at("directory_count").get_to(s.directory_count);
  j.at("file_count").get_to(s.file_count);
  j.at("named_function_count").get_to(s.named_function_count);
  j.at("anonymous_function_count").get_to(s.anonymous_function_count);
  j.at("skipped_file_count").get_to(s.skipped_file_count);
}

}  // namespace jscity
