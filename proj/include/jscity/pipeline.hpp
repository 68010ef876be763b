#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jscity/code_model.hpp"
#include "jscity/layout.hpp"
#include "jscity/metrics.hpp"
#include "jscity/scene.hpp"

namespace jscity {

struct AnalysisOptions {
  std::string project;
  std::string generated_at;  // empty: current time
  ScanConfig scan;
  LayoutConfig layout;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct Analysis {
  CodeTree tree;
  MetricsIndex metrics;
  CityScene scene;
  std::vector<ScanWarning> warnings;  // unreadable or non-UTF-8 files
  std::vector<const FileNode*> skipped;  // minified or unparsable files, in path order
  std::size_t scanned_file_count = 0;

  bool nothing_parsed() const { return scanned_file_count > 0 && scene.stats.file_count == 0; }
};

/// Per-file parsing runs on `threads` workers; everything after it is a
/// single-threaded fold, so results do not depend on the thread count.
std::vector<FileNode> analyze_units(const std::vector<SourceUnit>& units, const ScanConfig& config,
                                    unsigned threads = 0);

/// scan -> parse -> extract -> metrics -> layout -> scene.
Analysis analyze_directory(const std::filesystem::path& root, const AnalysisOptions& options);

}  // namespace jscity
