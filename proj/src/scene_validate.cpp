#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <set>

#include "jscity/scene.hpp"

namespace jscity {

using nlohmann::json;

namespace {

// Documents carry six decimals, so geometry is compared with some slack.
constexpr double kEps = 1e-5;

struct BoxView {
  std::string id;
  BoxKind kind = BoxKind::building;
  double x = 0, y = 0, z = 0, w = 0, h = 0, d = 0;
  ColorRole role = ColorRole::district;
  std::optional<Naming> naming;
  int parent = -1;
  std::vector<int> children;
  bool has_metrics = false;
  MetricsRef metrics;
  bool has_source = false;
  SourceRef source;

  double top() const { return y + h; }
};

class Validator {
 public:
  std::vector<Violation> run(const json& doc) {
    if (!check_schema(doc)) return std::move(out_);
    check_palette(doc.at("color_roles"));
    check_structure();
    check_geometry();
    check_metrics();
    check_counts(doc.at("stats"));
    return std::move(out_);
  }

 private:
  void add(std::string kind, std::vector<std::string> ids, std::string message) {
    out_.push_back({std::move(kind), std::move(ids), std::move(message)});
  }

  void schema(std::string message, std::vector<std::string> ids = {}) {
    add("schema", std::move(ids), std::move(message));
  }

  bool require(const json& obj, const char* key, bool (json::*pred)() const noexcept,
               const std::string& where, const char* what) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      schema("missing " + std::string(key) + where);
      return false;
    }
    if (!((*it).*pred)()) {
      schema(std::string(key) + " must be " + what + where);
      return false;
    }
    return true;
  }

  static bool finite_number(const json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

  bool check_schema(const json& doc) {
    if (!doc.is_object()) {
      schema("document is not a JSON object");
      return false;
    }
    const std::size_t before = out_.size();
    if (require(doc, "format_version", &json::is_number_integer, "", "an integer") &&
        doc["format_version"].get<long long>() != kSceneFormatVersion) {
      schema("unsupported format_version");
    }
    require(doc, "project", &json::is_string, "", "a string");
    require(doc, "generated_at", &json::is_string, "", "a string");
    if (require(doc, "config_echo", &json::is_object, "", "an object")) check_config(doc["config_echo"]);
    if (require(doc, "stats", &json::is_object, "", "an object")) {
      for (const char* key : {"total_loc", "directory_count", "file_count", "named_function_count",
                              "anonymous_function_count", "skipped_file_count"}) {
        require(doc["stats"], key, &json::is_number_unsigned, " in stats", "a non-negative integer");
      }
    }
    require(doc, "color_roles", &json::is_object, "", "an object");
    if (require(doc, "boxes", &json::is_array, "", "an array")) read_boxes(doc["boxes"]);
    return out_.size() == before;
  }

  void check_config(const json& echo) {
    if (require(echo, "layout", &json::is_object, " in config_echo", "an object")) {
      const json& l = echo["layout"];
      double* targets[] = {&config_.gutter, &config_.plate_height, &config_.height_scale,
                           &config_.min_building_side, &config_.max_building_side};
      const char* keys[] = {"gutter", "plate_height", "height_scale", "min_building_side",
                            "max_building_side"};
      for (int i = 0; i < 5; ++i) {
        if (!require(l, keys[i], &json::is_number, " in config_echo.layout", "a number")) continue;
        *targets[i] = l[keys[i]].get<double>();
        if (!(*targets[i] > 0) || !std::isfinite(*targets[i])) {
          schema(std::string(keys[i]) + " must be positive in config_echo.layout");
        }
      }
      if (require(l, "width_mapping", &json::is_string, " in config_echo.layout", "a string")) {
        auto m = parse_width_mapping(l["width_mapping"].get<std::string>());
        if (m) {
          config_.width_mapping = *m;
        } else {
          schema("unknown width_mapping in config_echo.layout");
        }
      }
    }
    if (require(echo, "scan", &json::is_object, " in config_echo", "an object")) {
      const json& s = echo["scan"];
      require(s, "include_extensions", &json::is_array, " in config_echo.scan", "an array");
      require(s, "exclude_globs", &json::is_array, " in config_echo.scan", "an array");
      require(s, "max_file_bytes", &json::is_number_unsigned, " in config_echo.scan", "an integer");
      require(s, "max_line_chars", &json::is_number_unsigned, " in config_echo.scan", "an integer");
      require(s, "count_params", &json::is_boolean, " in config_echo.scan", "a boolean");
    }
  }

  void read_boxes(const json& boxes) {
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const json& b = boxes[i];
      const std::string where = " in boxes[" + std::to_string(i) + "]";
      if (!b.is_object()) {
        schema("box is not an object" + where);
        continue;
      }
      BoxView v;
      if (!require(b, "id", &json::is_string, where, "a string")) continue;
      v.id = b["id"].get<std::string>();
      const std::vector<std::string> ids{v.id};
      bool ok = true;
      if (seen.contains(v.id)) {
        schema("duplicate box id", ids);
        ok = false;
      }
      if (require(b, "kind", &json::is_string, where, "a string")) {
        auto k = parse_box_kind(b["kind"].get<std::string>());
        if (k) {
          v.kind = *k;
        } else {
          schema("unknown kind", ids);
          ok = false;
        }
      } else {
        ok = false;
      }
      for (const char* key : {"min", "size"}) {
        auto it = b.find(key);
        if (it == b.end() || !it->is_array() || it->size() != 3 ||
            !std::all_of(it->begin(), it->end(), finite_number)) {
          schema(std::string(key) + " must be an array of 3 numbers", ids);
          ok = false;
        }
      }
      if (ok) {
        v.x = b["min"][0].get<double>();
        v.y = b["min"][1].get<double>();
        v.z = b["min"][2].get<double>();
        v.w = b["size"][0].get<double>();
        v.h = b["size"][1].get<double>();
        v.d = b["size"][2].get<double>();
        if (!(v.w > 0 && v.h > 0 && v.d > 0)) {
          schema("size components must be positive", ids);
          ok = false;
        }
      }
      if (require(b, "color_role", &json::is_string, where, "a string")) {
        auto r = parse_color_role(b["color_role"].get<std::string>());
        if (r) {
          v.role = *r;
        } else {
          add("color_role", ids, "unknown color_role \"" + b["color_role"].get<std::string>() + "\"");
        }
      } else {
        ok = false;
      }
      if (!require(b, "label", &json::is_string, where, "a string")) ok = false;
      auto parent = b.find("parent");
      if (parent == b.end()) {
        schema("missing parent", ids);
        ok = false;
      } else if (parent->is_string()) {
        auto p = seen.find(parent->get<std::string>());
        if (p == seen.end()) {
          schema("parent must precede the box", ids);
          ok = false;
        } else {
          v.parent = p->second;
        }
      } else if (!parent->is_null()) {
        schema("parent must be a string or null", ids);
        ok = false;
      }
      if (auto it = b.find("naming"); it != b.end()) {
        v.naming = it->is_string() ? parse_naming(it->get<std::string>()) : std::nullopt;
        if (!v.naming) {
          schema("naming must be \"named\" or \"anonymous\"", ids);
          ok = false;
        }
      }
      const bool building = v.kind == BoxKind::building;
      if (auto it = b.find("metrics_ref"); it != b.end()) {
        if (!building) {
          schema("metrics_ref on a " + std::string(to_string(v.kind)) + " box", ids);
          ok = false;
        } else if (read_metrics(*it, v.metrics)) {
          v.has_metrics = true;
        } else {
          schema("malformed metrics_ref", ids);
          ok = false;
        }
      } else if (building) {
        schema("building without metrics_ref", ids);
        ok = false;
      }
      if (auto it = b.find("source_ref"); it != b.end()) {
        if (!building) {
          schema("source_ref on a " + std::string(to_string(v.kind)) + " box", ids);
          ok = false;
        } else if (read_source(*it, v.source)) {
          v.has_source = true;
        } else {
          schema("malformed source_ref", ids);
          ok = false;
        }
      } else if (building) {
        schema("building without source_ref", ids);
        ok = false;
      }
      if (building && !v.naming) {
        schema("building without naming", ids);
        ok = false;
      }
      if (!ok) continue;
      seen.emplace(v.id, static_cast<int>(boxes_.size()));
      if (v.parent >= 0) boxes_[v.parent].children.push_back(static_cast<int>(boxes_.size()));
      boxes_.push_back(std::move(v));
    }
  }

  static bool read_metrics(const json& m, MetricsRef& out) {
    if (!m.is_object()) return false;
    for (const char* key : {"loc_own", "loc_total", "nov_own", "nov_agg"}) {
      if (!m.contains(key) || !m[key].is_number_unsigned()) return false;
    }
    out = {m["loc_own"].get<std::uint32_t>(), m["loc_total"].get<std::uint32_t>(),
           m["nov_own"].get<std::uint32_t>(), m["nov_agg"].get<std::uint32_t>()};
    return true;
  }

  static bool read_source(const json& s, SourceRef& out) {
    if (!s.is_object() || !s.contains("path") || !s["path"].is_string()) return false;
    for (const char* key : {"start_line", "end_line"}) {
      if (!s.contains(key) || !s[key].is_number_unsigned()) return false;
    }
    out = {s["path"].get<std::string>(), s["start_line"].get<std::uint32_t>(),
           s["end_line"].get<std::uint32_t>()};
    return true;
  }

  void check_palette(const json& roles) {
    static const std::regex hex("#[0-9A-Fa-f]{6}");
    std::set<std::string> colors;
    for (ColorRole r : {ColorRole::district, ColorRole::subdistrict, ColorRole::named_function,
                        ColorRole::anonymous_function}) {
      const std::string key(to_string(r));
      auto it = roles.find(key);
      if (it == roles.end() || !it->is_string()) {
        add("color_role", {}, "color_roles lacks a color for " + key);
        continue;
      }
      std::string c = it->get<std::string>();
      if (!std::regex_match(c, hex)) add("color_role", {}, "color for " + key + " is not #RRGGBB");
      std::transform(c.begin(), c.end(), c.begin(), ::toupper);
      colors.insert(c);
    }
    if (roles.size() != 4) add("color_role", {}, "color_roles must have exactly four entries");
    if (colors.size() != 4 && roles.size() == 4) add("color_role", {}, "role colors are not distinct");
  }

  void check_structure() {
    for (const auto& b : boxes_) {
      const BoxView* p = b.parent >= 0 ? &boxes_[b.parent] : nullptr;
      const std::vector<std::string> ids =
          p ? std::vector<std::string>{b.id, p->id} : std::vector<std::string>{b.id};
      bool parent_ok = true;
      switch (b.kind) {
        case BoxKind::district:
        case BoxKind::subdistrict:
          parent_ok = p == nullptr || p->kind == BoxKind::district;
          break;
        case BoxKind::building:
          parent_ok = p != nullptr && p->kind != BoxKind::district;
          break;
      }
      if (!parent_ok) add("containment", ids, std::string(to_string(b.kind)) + " has an invalid parent");

      ColorRole expected = ColorRole::district;
      if (b.kind == BoxKind::subdistrict) expected = ColorRole::subdistrict;
      if (b.kind == BoxKind::building) {
        expected = b.naming == Naming::named ? ColorRole::named_function : ColorRole::anonymous_function;
      }
      if (b.role != expected) {
        add("color_role", {b.id},
            "color_role " + std::string(to_string(b.role)) + " should be " + std::string(to_string(expected)));
      }
    }
  }

  double inset_for(const BoxView* parent) const {
    if (parent != nullptr && parent->kind == BoxKind::building) return config_.gutter / 2;
    return config_.gutter;
  }

  void check_geometry() {
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
      const BoxView& b = boxes_[i];
      groups[b.parent].push_back(static_cast<int>(i));
      if (b.kind != BoxKind::building && std::abs(b.h - config_.plate_height) > kEps) {
        add("elevation", {b.id}, "plate height differs from plate_height");
      }
      if (b.parent < 0) {
        if (std::abs(b.y) > kEps) add("elevation", {b.id}, "top-level plate does not sit at y = 0");
        continue;
      }
      const BoxView& p = boxes_[b.parent];
      const double inset = inset_for(&p);
      if (b.x < p.x + inset - kEps || b.z < p.z + inset - kEps ||
          b.x + b.w > p.x + p.w - inset + kEps || b.z + b.d > p.z + p.d - inset + kEps) {
        add("containment", {b.id, p.id}, "plan is not inside its parent inset by the gutter");
      }
      if (std::abs(b.y - p.top()) > kEps) {
        add("elevation", {b.id, p.id}, "base does not rest on the parent's top");
      }
    }
    for (const auto& [parent, members] : groups) {
      check_siblings(parent >= 0 ? &boxes_[parent] : nullptr, members);
    }
  }

  void check_siblings(const BoxView* parent, std::vector<int> members) {
    const double gap = inset_for(parent);
    std::sort(members.begin(), members.end(), [&](int a, int b) { return boxes_[a].x < boxes_[b].x; });
    for (std::size_t i = 0; i < members.size(); ++i) {
      const BoxView& a = boxes_[members[i]];
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const BoxView& b = boxes_[members[j]];
        if (b.x >= a.x + a.w + gap - kEps) break;
        const double gx = std::max(b.x - (a.x + a.w), a.x - (b.x + b.w));
        const double gz = std::max(b.z - (a.z + a.d), a.z - (b.z + b.d));
        if (gx < -kEps && gz < -kEps) {
          add("overlap", {a.id, b.id}, "sibling plans overlap");
        } else if (gx < gap - kEps && gz < gap - kEps) {
          add("gutter", {a.id, b.id}, "sibling plans are closer than the gutter");
        }
      }
    }
  }

  // Returns the highest top within the subtree of `i`.
  double subtree_top(int i) const {
    double top = boxes_[i].top();
    for (int c : boxes_[i].children) top = std::max(top, subtree_top(c));
    return top;
  }

  void check_metrics() {
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
      const BoxView& b = boxes_[i];
      if (b.kind != BoxKind::building) continue;
      const MetricsRef& m = b.metrics;
      if (b.has_source) {
        if (b.source.end_line < b.source.start_line ||
            m.loc_total != b.source.end_line - b.source.start_line + 1) {
          add("metrics", {b.id}, "loc_total does not match source_ref line span");
        }
      }
      std::uint64_t child_loc = 0, child_nov = 0;
      for (int c : b.children) {
        child_loc += boxes_[c].metrics.loc_total;
        child_nov += boxes_[c].metrics.nov_agg;
      }
      const std::uint64_t expected_own = child_loc > m.loc_total ? 0 : m.loc_total - child_loc;
      if (m.loc_own != expected_own) add("metrics", {b.id}, "loc_own is not loc_total minus nested spans");
      if (m.nov_agg != m.nov_own + child_nov) add("metrics", {b.id}, "nov_agg is not nov_own plus nested nov_agg");

      if (std::abs(b.w - b.d) > kEps) add("metrics", {b.id}, "building plan is not square");
      if (b.w < footprint_side(m.nov_agg, config_) - kEps) {
        add("metrics", {b.id}, "building plan is narrower than its footprint_side");
      }
      if (std::abs(b.h - building_height(m.loc_own, config_)) > kEps) {
        add("stack_height", {b.id}, "height does not match building_height(loc_own)");
      }
      // Stack-height identity along nesting chains.
      const double expected = expected_stack(static_cast<int>(i));
      if (std::abs(subtree_top(static_cast<int>(i)) - b.y - expected) > kEps) {
        add("stack_height", {b.id}, "stack height differs from the sum of building heights along its tallest chain");
      }
      if (unclamped_chain(static_cast<int>(i)) &&
          std::abs(expected - config_.height_scale * m.loc_total) > kEps) {
        add("stack_height", {b.id}, "chain stack height differs from height_scale * loc_total");
      }
    }
  }

  double expected_stack(int i) const {
    double tallest = 0;
    for (int c : boxes_[i].children) tallest = std::max(tallest, expected_stack(c));
    return building_height(boxes_[i].metrics.loc_own, config_) + tallest;
  }

  // True when the subtree is a single chain where every building has a
  // non-zero loc_own and no span clamp.
  bool unclamped_chain(int i) const {
    const BoxView& b = boxes_[i];
    if (b.metrics.loc_own == 0 || b.children.size() > 1) return false;
    if (b.children.empty()) return b.metrics.loc_own == b.metrics.loc_total;
    const BoxView& c = boxes_[b.children.front()];
    return b.metrics.loc_own + c.metrics.loc_total == b.metrics.loc_total && unclamped_chain(b.children.front());
  }

  void check_counts(const json& stats) {
    std::uint64_t districts = 0, files = 0, named = 0, anonymous = 0;
    for (const auto& b : boxes_) {
      if (b.kind == BoxKind::district) ++districts;
      if (b.kind == BoxKind::subdistrict) ++files;
      if (b.kind == BoxKind::building) ++(b.naming == Naming::named ? named : anonymous);
    }
    const std::pair<const char*, std::uint64_t> expected[] = {{"directory_count", districts},
                                                              {"file_count", files},
                                                              {"named_function_count", named},
                                                              {"anonymous_function_count", anonymous}};
    for (const auto& [key, count] : expected) {
      if (stats[key].get<std::uint64_t>() != count) {
        add("count", {}, std::string("stats.") + key + " is " + stats[key].dump() + " but boxes give " +
                             std::to_string(count));
      }
    }
  }

  std::vector<Violation> out_;
  std::vector<BoxView> boxes_;
  LayoutConfig config_;
};

}  // namespace

std::vector<Violation> validate_document(const json& doc) { return Validator().run(doc); }

std::vector<Violation> validate(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return {{"schema", {}, std::string("malformed JSON: ") + e.what()}};
  }
  return validate_document(doc);
}

}  // namespace jscity
