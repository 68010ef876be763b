#include "jscity/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace jscity {

std::vector<FileNode> analyze_units(const std::vector<SourceUnit>& units, const ScanConfig& config,
                                    unsigned threads) {
  std::vector<FileNode> files(units.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, units.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      try {
        files[i] = analyze_unit(units[i], config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return files;
}

Analysis analyze_directory(const std::filesystem::path& root, const AnalysisOptions& options) {
  check_layout_config(options.layout);
  ScanResult scan = scan_sources(root, options.scan);

  Analysis out;
  out.warnings = std::move(scan.warnings);
  out.scanned_file_count = scan.units.size() + out.warnings.size();
  std::vector<FileNode> files = analyze_units(scan.units, options.scan, options.threads);
  scan.units.clear();

  out.tree = build_code_tree(std::move(files), options.project);
  out.metrics = compute_metrics(out.tree, MetricsOptions{options.scan.count_params});
  for_each_file(out.tree.root, [&](const FileNode& f) {
    if (f.parse_status != ParseStatus::ok) out.skipped.push_back(&f);
  });
  std::sort(out.skipped.begin(), out.skipped.end(),
            [](const FileNode* a, const FileNode* b) { return a->path < b->path; });

  SceneInputs inputs{options.project,
                     options.generated_at.empty() ? utc_timestamp_now() : options.generated_at,
                     options.layout, options.scan};
  out.scene = build_city(out.tree, out.metrics, inputs);
  return out;
}

}  // namespace jscity
