#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jscity/metrics.hpp"
#include "jscity/scene.hpp"

namespace jscity {

struct AnalysisRecord {
  std::string project;
  std::string analysis_id;
  std::string created_at;  // RFC 3339, UTC, millisecond precision
  std::string scene_path;  // relative to the store root
  ProjectStats stats;

  friend bool operator==(const AnalysisRecord&, const AnalysisRecord&) = default;
};

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public StoreError {
 public:
  using StoreError::StoreError;
};

struct SaveOptions {
  // Overrides the record timestamp (tests use this to order saves).
  std::optional<std::string> created_at;
  // Called after the new index is written to its temp file and before the
  // rename; throwing from here simulates a crash at that point.
  std::function<void()> before_index_rename;
};

std::string sha256_hex(std::string_view data);

/// First 16 hex digits of SHA-256 over the normalized serialization.
std::string analysis_id_for(const CityScene& scene);

/// Store root from JSCITY_STORE, else ".jscity-store".
std::filesystem::path default_store_root();

/// Writes `<root>/<project>/<analysis_id>.json` and appends to index.json.
/// Saving content that is already stored returns the existing record.
AnalysisRecord save(const std::string& project, const CityScene& scene,
                    const std::filesystem::path& store_root, const SaveOptions& options = {});

/// Newest first (created_at descending, then analysis_id ascending).
/// Unknown projects yield an empty list.
std::vector<AnalysisRecord> list(const std::string& project, const std::filesystem::path& store_root);

/// Resolves a record; without an id the newest one. Throws NotFoundError
/// naming the available ids.
AnalysisRecord find_record(const std::string& project, const std::optional<std::string>& analysis_id,
                           const std::filesystem::path& store_root);

/// Stored scene bytes exactly as written.
std::string read_scene_bytes(const AnalysisRecord& record, const std::filesystem::path& store_root);

CityScene load(const std::string& project, const std::optional<std::string>& analysis_id,
               const std::filesystem::path& store_root);

/// Recreates index.json from the scene files in the project directory.
std::vector<AnalysisRecord> rebuild_index(const std::string& project,
                                          const std::filesystem::path& store_root);

std::string utc_timestamp_millis_now();

}  // namespace jscity
