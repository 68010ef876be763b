#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jscity/code_model.hpp"
#include "jscity/metrics.hpp"

namespace jscity {

enum class WidthMapping { sqrt, linear };

std::string_view to_string(WidthMapping mapping);
std::optional<WidthMapping> parse_width_mapping(std::string_view text);

struct LayoutConfig {
  double gutter = 1.0;
  double plate_height = 0.5;
  double height_scale = 0.25;
  double min_building_side = 1.0;
  double max_building_side = 40.0;
  WidthMapping width_mapping = WidthMapping::sqrt;

  friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws LayoutError unless every value is positive and finite and
/// min_building_side <= max_building_side.
void check_layout_config(const LayoutConfig& config);

struct Rect {
  double x = 0;
  double z = 0;
  double width = 0;
  double depth = 0;

  double max_x() const { return x + width; }
  double max_z() const { return z + depth; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct PackRequest {
  std::string id;
  double width = 0;
  double depth = 0;
};

struct PlacedItem {
  std::string id;
  Rect rect;
};

struct Placement {
  std::vector<PlacedItem> items;  // in packing order
  Rect container;

  const Rect* find(std::string_view id) const;
};

double footprint_side(std::uint64_t nov_agg, const LayoutConfig& config);
double building_height(std::uint64_t loc_own, const LayoutConfig& config);

/// Growing kd-tree packer. Requests are sorted by max(width, depth)
/// descending, then id ascending; each is padded by `gutter`, and the
/// container has a `gutter` border on every side.
Placement pack(std::vector<PackRequest> requests, double gutter);

enum class BoxKind { district, subdistrict, building };

std::string_view to_string(BoxKind kind);

/// A positioned box. Plans and elevations are absolute once layout_city has
/// run; stack_nested returns them relative to the stack's base corner.
struct LayoutNode {
  BoxKind kind = BoxKind::building;
  std::string id;
  std::string label;
  Rect plan;
  double base = 0;
  double height = 0;
  const FileNode* file = nullptr;          // subdistricts and buildings
  const FunctionNode* function = nullptr;  // buildings
  std::vector<LayoutNode> children;

  double top() const { return base + height; }
};

/// Building stack for `fn` and its nested functions, with the root plan at
/// (0, 0) and base 0.
LayoutNode stack_nested(const FunctionNode& fn, const FileNode& file, const MetricsIndex& metrics,
                        const LayoutConfig& config);

struct CityLayout {
  Rect extent;                     // ground footprint of the whole city
  std::vector<LayoutNode> roots;  // top-level districts and subdistricts
};

/// Lays out parsed files and the directories that contain them. Skipped
/// files and directories without parsed files are left out.
CityLayout layout_city(const CodeTree& tree, const MetricsIndex& metrics, const LayoutConfig& config);

/// Single-directory variant: the returned node is positioned at the origin
/// at nesting level `level` (1 for children of the root).
LayoutNode layout_district(const DirectoryNode& dir, const MetricsIndex& metrics,
                           const LayoutConfig& config, int level = 1);
LayoutNode layout_file(const FileNode& file, const MetricsIndex& metrics, const LayoutConfig& config,
                       int level = 1);

std::string directory_box_id(std::string_view path);
std::string file_box_id(std::string_view path);

}  // namespace jscity
