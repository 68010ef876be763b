#include "jscity/layout.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace jscity {

std::string_view to_string(WidthMapping mapping) {
  return mapping == WidthMapping::sqrt ? "sqrt" : "linear";
}

std::optional<WidthMapping> parse_width_mapping(std::string_view text) {
  if (text == "sqrt") return WidthMapping::sqrt;
  if (text == "linear") return WidthMapping::linear;
  return std::nullopt;
}

std::string_view to_string(BoxKind kind) {
  switch (kind) {
    case BoxKind::district: return "district";
    case BoxKind::subdistrict: return "subdistrict";
    case BoxKind::building: return "building";
  }
  return "building";
}

void check_layout_config(const LayoutConfig& c) {
  const std::pair<const char*, double> values[] = {
      {"gutter", c.gutter},
      {"plate_height", c.plate_height},
      {"height_scale", c.height_scale},
      {"min_building_side", c.min_building_side},
      {"max_building_side", c.max_building_side},
  };
  for (const auto& [name, v] : values) {
    if (!std::isfinite(v) || v <= 0) {
      throw LayoutError(std::string(name) + " must be a positive number");
    }
  }
  if (c.min_building_side > c.max_building_side) {
    throw LayoutError("min_building_side exceeds max_building_side");
  }
}

const Rect* Placement::find(std::string_view id) const {
  for (const auto& item : items) {
    if (item.id == id) return &item.rect;
  }
  return nullptr;
}

double footprint_side(std::uint64_t nov_agg, const LayoutConfig& config) {
  const double n = static_cast<double>(nov_agg) + 1.0;
  const double raw = config.min_building_side *
                     (config.width_mapping == WidthMapping::sqrt ? std::sqrt(n) : n);
  return std::clamp(raw, config.min_building_side, config.max_building_side);
}

double building_height(std::uint64_t loc_own, const LayoutConfig& config) {
  return std::max(config.height_scale, config.height_scale * static_cast<double>(loc_own));
}

namespace {

// Binary tree node of the growing packer. `used` nodes have been split into
// `right` and `down` remainders.
struct PackNode {
  double x = 0, y = 0, w = 0, h = 0;
  bool used = false;
  std::unique_ptr<PackNode> right, down;
};

class GrowingPacker {
 public:
  GrowingPacker(double w, double h) : root_(std::make_unique<PackNode>()) {
    root_->w = w;
    root_->h = h;
  }

  // Returns the top-left corner for a w x h block.
  std::pair<double, double> insert(double w, double h) {
    if (PackNode* node = find(root_.get(), w, h)) return split(node, w, h);
    return grow(w, h);
  }

  double width() const { return root_->w; }
  double height() const { return root_->h; }

 private:
  static PackNode* find(PackNode* node, double w, double h) {
    if (node == nullptr) return nullptr;
    if (node->used) {
      if (PackNode* r = find(node->right.get(), w, h)) return r;
      return find(node->down.get(), w, h);
    }
    if (w <= node->w && h <= node->h) return node;
    return nullptr;
  }

  static std::pair<double, double> split(PackNode* node, double w, double h) {
    node->used = true;
    node->down = std::make_unique<PackNode>();
    *node->down = PackNode{node->x, node->y + h, node->w, node->h - h, false, nullptr, nullptr};
    node->right = std::make_unique<PackNode>();
    *node->right = PackNode{node->x + w, node->y, node->w - w, h, false, nullptr, nullptr};
    return {node->x, node->y};
  }

  std::pair<double, double> grow(double w, double h) {
    const bool can_down = w <= root_->w;
    const bool can_right = h <= root_->h;
    // Prefer the direction that keeps the container closer to square.
    const bool should_right = can_right && root_->h >= root_->w + w;
    const bool should_down = can_down && root_->w >= root_->h + h;
    if (should_right) return grow_right(w, h);
    if (should_down) return grow_down(w, h);
    if (can_right) return grow_right(w, h);
    if (can_down) return grow_down(w, h);
    // Unreachable with largest-first ordering.
    throw LayoutError("packer could not grow");
  }

  std::pair<double, double> grow_right(double w, double h) {
    auto old = std::move(root_);
    root_ = std::make_unique<PackNode>();
    root_->used = true;
    root_->w = old->w + w;
    root_->h = old->h;
    root_->right = std::make_unique<PackNode>();
    *root_->right = PackNode{old->w, 0, w, old->h, false, nullptr, nullptr};
    root_->down = std::move(old);
    return split(find(root_.get(), w, h), w, h);
  }

  std::pair<double, double> grow_down(double w, double h) {
    auto old = std::move(root_);
    root_ = std::make_unique<PackNode>();
    root_->used = true;
    root_->w = old->w;
    root_->h = old->h + h;
    root_->down = std::make_unique<PackNode>();
    *root_->down = PackNode{0, old->h, old->w, h, false, nullptr, nullptr};
    root_->right = std::move(old);
    return split(find(root_.get(), w, h), w, h);
  }

  std::unique_ptr<PackNode> root_;
};

void translate(LayoutNode& node, double dx, double dy, double dz) {
  node.plan.x += dx;
  node.plan.z += dz;
  node.base += dy;
  for (auto& child : node.children) translate(child, dx, dy, dz);
}

const FunctionMetrics& metrics_of(const MetricsIndex& metrics, const std::string& id) {
  auto it = metrics.find(id);
  if (it == metrics.end()) throw LayoutError("no metrics for function " + id);
  return it->second;
}

bool has_parsed_file(const DirectoryNode& dir) {
  for (const auto& file : dir.files) {
    if (file.parse_status == ParseStatus::ok) return true;
  }
  for (const auto& sub : dir.directories) {
    if (has_parsed_file(sub)) return true;
  }
  return false;
}

// Packs `children` (each positioned at the origin) and moves them into place
// at height `y`. Returns the container.
Rect arrange(std::vector<LayoutNode>& children, double gutter, double y) {
  std::vector<PackRequest> requests;
  requests.reserve(children.size());
  for (const auto& c : children) requests.push_back({c.id, c.plan.width, c.plan.depth});
  const Placement placement = pack(std::move(requests), gutter);
  for (auto& c : children) {
    const Rect* r = placement.find(c.id);
    translate(c, r->x - c.plan.x, y, r->z - c.plan.z);
  }
  return placement.container;
}

std::string base_name(std::string_view path) {
  auto slash = path.rfind('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

}  // namespace

Placement pack(std::vector<PackRequest> requests, double gutter) {
  Placement out;
  if (requests.empty()) {
    out.container = {0, 0, 2 * gutter, 2 * gutter};
    return out;
  }
  std::sort(requests.begin(), requests.end(), [](const PackRequest& a, const PackRequest& b) {
    const double ma = std::max(a.width, a.depth);
    const double mb = std::max(b.width, b.depth);
    if (ma != mb) return ma > mb;
    return a.id < b.id;
  });
  GrowingPacker packer(requests.front().width + gutter, requests.front().depth + gutter);
  out.items.reserve(requests.size());
  for (const auto& r : requests) {
    auto [x, z] = packer.insert(r.width + gutter, r.depth + gutter);
    out.items.push_back({r.id, {x + gutter, z + gutter, r.width, r.depth}});
  }
  out.container = {0, 0, packer.width() + gutter, packer.height() + gutter};
  return out;
}

LayoutNode stack_nested(const FunctionNode& fn, const FileNode& file, const MetricsIndex& metrics,
                        const LayoutConfig& config) {
  const FunctionMetrics& m = metrics_of(metrics, fn.id);
  LayoutNode node;
  node.kind = BoxKind::building;
  node.id = fn.id;
  node.label = fn.name.value_or("(anonymous)");
  node.file = &file;
  node.function = &fn;
  node.height = building_height(m.loc_own, config);

  double side = footprint_side(m.nov_agg, config);
  if (!fn.children.empty()) {
    node.children.reserve(fn.children.size());
    for (const auto& child : fn.children) {
      node.children.push_back(stack_nested(child, file, metrics, config));
    }
    const Rect roof = arrange(node.children, config.gutter / 2, node.height);
    side = std::max({side, roof.width, roof.depth});
    // Centre the roof packing on the parent.
    const double dx = (side - roof.width) / 2;
    const double dz = (side - roof.depth) / 2;
    for (auto& c : node.children) translate(c, dx, 0, dz);
  }
  node.plan = {0, 0, side, side};
  return node;
}

LayoutNode layout_file(const FileNode& file, const MetricsIndex& metrics, const LayoutConfig& config,
                       int level) {
  LayoutNode node;
  node.kind = BoxKind::subdistrict;
  node.id = file_box_id(file.path);
  node.label = base_name(file.path);
  node.file = &file;
  node.base = (level - 1) * config.plate_height;
  node.height = config.plate_height;
  node.children.reserve(file.functions.size());
  for (const auto& fn : file.functions) {
    node.children.push_back(stack_nested(fn, file, metrics, config));
  }
  node.plan = arrange(node.children, config.gutter, node.top());
  return node;
}

LayoutNode layout_district(const DirectoryNode& dir, const MetricsIndex& metrics,
                           const LayoutConfig& config, int level) {
  LayoutNode node;
  node.kind = BoxKind::district;
  node.id = directory_box_id(dir.path);
  node.label = dir.name;
  node.base = (level - 1) * config.plate_height;
  node.height = config.plate_height;
  for (const auto& sub : dir.directories) {
    if (has_parsed_file(sub)) node.children.push_back(layout_district(sub, metrics, config, level + 1));
  }
  for (const auto& file : dir.files) {
    if (file.parse_status == ParseStatus::ok) {
      node.children.push_back(layout_file(file, metrics, config, level + 1));
    }
  }
  node.plan = arrange(node.children, config.gutter, 0);
  return node;
}

CityLayout layout_city(const CodeTree& tree, const MetricsIndex& metrics, const LayoutConfig& config) {
  check_layout_config(config);
  CityLayout city;
  for (const auto& sub : tree.root.directories) {
    if (has_parsed_file(sub)) city.roots.push_back(layout_district(sub, metrics, config, 1));
  }
  for (const auto& file : tree.root.files) {
    if (file.parse_status == ParseStatus::ok) city.roots.push_back(layout_file(file, metrics, config, 1));
  }
  city.extent = arrange(city.roots, config.gutter, 0);
  return city;
}

std::string directory_box_id(std::string_view path) { return "dir:" + std::string(path); }
std::string file_box_id(std::string_view path) { return "file:" + std::string(path); }

}  // namespace jscity
