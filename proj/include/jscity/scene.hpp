#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "jscity/code_model.hpp"
#include "jscity/layout.hpp"
#include "jscity/metrics.hpp"

namespace jscity {

inline constexpr int kSceneFormatVersion = 1;

enum class ColorRole { district, subdistrict, named_function, anonymous_function };

std::string_view to_string(ColorRole role);
std::optional<ColorRole> parse_color_role(std::string_view text);

/// Role colors as "#RRGGBB", indexed by ColorRole.
using Palette = std::array<std::string, 4>;
const Palette& default_palette();

std::optional<BoxKind> parse_box_kind(std::string_view text);
std::optional<Naming> parse_naming(std::string_view text);

struct SourceRef {
  std::string path;
  std::uint32_t start_line = 1;
  std::uint32_t end_line = 1;

  friend bool operator==(const SourceRef&, const SourceRef&) = default;
};

struct MetricsRef {
  std::uint32_t loc_own = 0;
  std::uint32_t loc_total = 1;
  std::uint32_t nov_own = 0;
  std::uint32_t nov_agg = 0;

  friend bool operator==(const MetricsRef&, const MetricsRef&) = default;
};

struct Box3D {
  std::string id;
  BoxKind kind = BoxKind::building;
  std::array<double, 3> min{};   // x, y, z
  std::array<double, 3> size{};  // width, height, depth
  ColorRole color_role = ColorRole::district;
  std::string label;
  std::optional<std::string> parent;
  std::optional<Naming> naming;  // buildings only
  std::optional<SourceRef> source_ref;
  std::optional<MetricsRef> metrics_ref;

  friend bool operator==(const Box3D&, const Box3D&) = default;
};

struct CityScene {
  int format_version = kSceneFormatVersion;
  std::string project;
  std::string generated_at;
  LayoutConfig layout_config;
  ScanConfig scan_config;
  ProjectStats stats;
  Palette palette = default_palette();
  std::vector<Box3D> boxes;

  friend bool operator==(const CityScene&, const CityScene&) = default;
};

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SceneInputs {
  std::string project;
  std::string generated_at;
  LayoutConfig layout_config;
  ScanConfig scan_config;
};

/// Boxes are emitted in pre-order: each container is followed by its
/// contents (directories, then files, then functions in source order).
CityScene build_city(const CodeTree& tree, const MetricsIndex& index, const SceneInputs& inputs);

inline constexpr std::string_view kNormalizedTimestamp = "1970-01-01T00:00:00Z";

nlohmann::json scene_to_json(const CityScene& scene);
/// Throws SceneError (or nlohmann::json exceptions) on shape errors.
CityScene scene_from_json(const nlohmann::json& doc);

/// Canonical text: sorted keys, no whitespace, floats with at most six
/// decimals and no trailing zeros.
std::string canonical_dump(const nlohmann::json& value);
std::string serialize(const CityScene& scene, bool normalize = false);
CityScene parse_scene(std::string_view text);

struct Violation {
  std::string kind;  // schema, overlap, gutter, containment, elevation, color_role, metrics, stack_height, count
  std::vector<std::string> box_ids;
  std::string message;
};

std::vector<Violation> validate(std::string_view text);
std::vector<Violation> validate_document(const nlohmann::json& doc);

std::string format_violation(const Violation& v);

/// Current UTC time as RFC 3339 with second precision.
std::string utc_timestamp_now();

}  // namespace jscity
