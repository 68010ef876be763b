#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "jscity/code_model.hpp"

namespace jscity {

struct FunctionMetrics {
  std::uint32_t loc_total = 1;
  std::uint32_t loc_own = 0;
  std::uint32_t nov_own = 0;
  std::uint32_t nov_agg = 0;
  // Set when children's spans exceeded this span (same-line nesting) and
  // loc_own was clamped to 0.
  bool loc_clamped = false;

  friend bool operator==(const FunctionMetrics&, const FunctionMetrics&) = default;
};

using MetricsIndex = std::map<std::string, FunctionMetrics>;

struct MetricsOptions {
  bool count_params = false;
};

struct ProjectStats {
  std::uint64_t total_loc = 0;
  std::uint64_t directory_count = 0;
  std::uint64_t file_count = 0;
  std::uint64_t named_function_count = 0;
  std::uint64_t anonymous_function_count = 0;
  std::uint64_t skipped_file_count = 0;

  friend bool operator==(const ProjectStats&, const ProjectStats&) = default;
};

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Post-order metrics for one function forest; entries are added to `out`.
void compute_file_metrics(const FileNode& file, const MetricsOptions& options, MetricsIndex& out);

MetricsIndex compute_metrics(const CodeTree& tree, const MetricsOptions& options = {});

/// Throws MetricsError when a function has no index entry.
ProjectStats summarize(const CodeTree& tree, const MetricsIndex& index);

void to_json(nlohmann::json& j, const ProjectStats& stats);
void from_json(const nlohmann::json& j, ProjectStats& stats);

}  // namespace jscity
