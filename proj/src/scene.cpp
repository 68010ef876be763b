#include "jscity/scene.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>

namespace jscity {

using nlohmann::json;

std::string_view to_string(ColorRole role) {
  switch (role) {
    case ColorRole::district: return "district";
    case ColorRole::subdistrict: return "subdistrict";
    case ColorRole::named_function: return "named_function";
    case ColorRole::anonymous_function: return "anonymous_function";
  }
  return "district";
}

std::optional<ColorRole> parse_color_role(std::string_view text) {
  for (ColorRole r : {ColorRole::district, ColorRole::subdistrict, ColorRole::named_function,
                      ColorRole::anonymous_function}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

const Palette& default_palette() {
  static const Palette palette{"#F0C419", "#C0392B", "#2D6FB8", "#2FA05A"};
  return palette;
}

std::optional<BoxKind> parse_box_kind(std::string_view text) {
  for (BoxKind k : {BoxKind::district, BoxKind::subdistrict, BoxKind::building}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<Naming> parse_naming(std::string_view text) {
  if (text == "named") return Naming::named;
  if (text == "anonymous") return Naming::anonymous;
  return std::nullopt;
}

namespace {

constexpr ColorRole kRoles[] = {ColorRole::district, ColorRole::subdistrict,
                                ColorRole::named_function, ColorRole::anonymous_function};

void emit(const LayoutNode& node, const std::optional<std::string>& parent, const MetricsIndex& index,
          std::vector<Box3D>& out) {
  Box3D box;
  box.id = node.id;
  box.kind = node.kind;
  box.min = {node.plan.x, node.base, node.plan.z};
  box.size = {node.plan.width, node.height, node.plan.depth};
  box.label = node.label;
  box.parent = parent;
  switch (node.kind) {
    case BoxKind::district: box.color_role = ColorRole::district; break;
    case BoxKind::subdistrict: box.color_role = ColorRole::subdistrict; break;
    case BoxKind::building: {
      const FunctionNode& fn = *node.function;
      auto it = index.find(fn.id);
      if (it == index.end()) throw SceneError("no metrics for function " + fn.id);
      const FunctionMetrics& m = it->second;
      box.color_role =
          fn.naming == Naming::named ? ColorRole::named_function : ColorRole::anonymous_function;
      box.naming = fn.naming;
      box.source_ref = SourceRef{node.file->path, fn.start_line, fn.end_line};
      box.metrics_ref = MetricsRef{m.loc_own, m.loc_total, m.nov_own, m.nov_agg};
      break;
    }
  }
  out.push_back(std::move(box));
  for (const auto& child : node.children) emit(child, node.id, index, out);
}

json layout_config_json(const LayoutConfig& c) {
  return json{{"gutter", c.gutter},
              {"plate_height", c.plate_height},
              {"height_scale", c.height_scale},
              {"min_building_side", c.min_building_side},
              {"max_building_side", c.max_building_side},
              {"width_mapping", to_string(c.width_mapping)}};
}

json scan_config_json(const ScanConfig& c) {
  return json{{"include_extensions", c.include_extensions},
              {"exclude_globs", c.exclude_globs},
              {"max_file_bytes", c.max_file_bytes},
              {"max_line_chars", c.max_line_chars},
              {"count_params", c.count_params}};
}

void format_number(double v, std::string& out) {
  if (!std::isfinite(v)) throw SceneError("non-finite number in scene");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  out += s;
}

void dump_into(const json& v, std::string& out) {
  switch (v.type()) {
    case json::value_t::object: {
      // json objects are std::map-backed, so iteration is already sorted.
      out += '{';
      bool first = true;
      for (const auto& [key, value] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump(-1, ' ', false, json::error_handler_t::replace);
        out += ':';
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& value : v) {
        if (!first) out += ',';
        first = false;
        dump_into(value, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      format_number(v.get<double>(), out);
      break;
    default:
      out += v.dump(-1, ' ', false, json::error_handler_t::replace);
  }
}

}  // namespace

CityScene build_city(const CodeTree& tree, const MetricsIndex& index, const SceneInputs& inputs) {
  CityScene scene;
  scene.project = inputs.project;
  scene.generated_at = inputs.generated_at;
  scene.layout_config = inputs.layout_config;
  scene.scan_config = inputs.scan_config;
  scene.stats = summarize(tree, index);
  const CityLayout city = layout_city(tree, index, inputs.layout_config);
  for (const auto& root : city.roots) emit(root, std::nullopt, index, scene.boxes);
  return scene;
}

json scene_to_json(const CityScene& scene) {
  json roles = json::object();
  for (ColorRole r : kRoles) roles[std::string(to_string(r))] = scene.palette[static_cast<int>(r)];

  json boxes = json::array();
  for (const auto& b : scene.boxes) {
    json box{{"id", b.id},
             {"kind", to_string(b.kind)},
             {"min", b.min},
             {"size", b.size},
             {"color_role", to_string(b.color_role)},
             {"label", b.label},
             {"parent", b.parent ? json(*b.parent) : json(nullptr)}};
    if (b.naming) box["naming"] = to_string(*b.naming);
    if (b.source_ref) {
      box["source_ref"] = {{"path", b.source_ref->path},
                           {"start_line", b.source_ref->start_line},
                           {"end_line", b.source_ref->end_line}};
    }
    if (b.metrics_ref) {
      box["metrics_ref"] = {{"loc_own", b.metrics_ref->loc_own},
                            {"loc_total", b.metrics_ref->loc_total},
                            {"nov_own", b.metrics_ref->nov_own},
                            {"nov_agg", b.metrics_ref->nov_agg}};
    }
    boxes.push_back(std::move(box));
  }

  return json{{"format_version", scene.format_version},
              {"project", scene.project},
              {"generated_at", scene.generated_at},
              {"config_echo",
               {{"layout", layout_config_json(scene.layout_config)},
                {"scan", scan_config_json(scene.scan_config)}}},
              {"stats", scene.stats},
              {"color_roles", std::move(roles)},
              {"boxes", std::move(boxes)}};
}

CityScene scene_from_json(const json& doc) {
  CityScene scene;
  scene.format_version = doc.at("format_version").get<int>();
  if (scene.format_version != kSceneFormatVersion) {
    throw SceneError("unsupported format_version " + std::to_string(scene.format_version));
  }
  scene.project = doc.at("project").get<std::string>();
  scene.generated_at = doc.at("generated_at").get<std::string>();

  const json& layout = doc.at("config_echo").at("layout");
  LayoutConfig& lc = scene.layout_config;
  lc.gutter = layout.at("gutter").get<double>();
  lc.plate_height = layout.at("plate_height").get<double>();
  lc.height_scale = layout.at("height_scale").get<double>();
  lc.min_building_side = layout.at("min_building_side").get<double>();
  lc.max_building_side = layout.at("max_building_side").get<double>();
  auto mapping = parse_width_mapping(layout.at("width_mapping").get<std::string>());
  if (!mapping) throw SceneError("unknown width_mapping");
  lc.width_mapping = *mapping;

  const json& scan = doc.at("config_echo").at("scan");
  ScanConfig& sc = scene.scan_config;
  sc.include_extensions = scan.at("include_extensions").get<std::vector<std::string>>();
  sc.exclude_globs = scan.at("exclude_globs").get<std::vector<std::string>>();
  sc.max_file_bytes = scan.at("max_file_bytes").get<std::uint64_t>();
  sc.max_line_chars = scan.at("max_line_chars").get<std::uint32_t>();
  sc.count_params = scan.at("count_params").get<bool>();

  scene.stats = doc.at("stats").get<ProjectStats>();
  const json& roles = doc.at("color_roles");
  for (ColorRole r : kRoles) {
    scene.palette[static_cast<int>(r)] = roles.at(std::string(to_string(r))).get<std::string>();
  }

  for (const json& b : doc.at("boxes")) {
    Box3D box;
    box.id = b.at("id").get<std::string>();
    auto kind = parse_box_kind(b.at("kind").get<std::string>());
    if (!kind) throw SceneError("unknown box kind in " + box.id);
    box.kind = *kind;
    box.min = b.at("min").get<std::array<double, 3>>();
    box.size = b.at("size").get<std::array<double, 3>>();
    auto role = parse_color_role(b.at("color_role").get<std::string>());
    if (!role) throw SceneError("unknown color_role in " + box.id);
    box.color_role = *role;
    box.label = b.at("label").get<std::string>();
    if (auto it = b.find("parent"); it != b.end() && !it->is_null()) box.parent = it->get<std::string>();
    if (auto it = b.find("naming"); it != b.end()) {
      box.naming = parse_naming(it->get<std::string>());
      if (!box.naming) throw SceneError("unknown naming in " + box.id);
    }
    if (auto it = b.find("source_ref"); it != b.end()) {
      box.source_ref = SourceRef{it->at("path").get<std::string>(),
                                 it->at("start_line").get<std::uint32_t>(),
                                 it->at("end_line").get<std::uint32_t>()};
    }
    if (auto it = b.find("metrics_ref"); it != b.end()) {
      box.metrics_ref = MetricsRef{it->at("loc_own").get<std::uint32_t>(),
                                   it->at("loc_total").get<std::uint32_t>(),
                                   it->at("nov_own").get<std::uint32_t>(),
                                   it->at("nov_agg").get<std::uint32_t>()};
    }
    scene.boxes.push_back(std::move(box));
  }
  return scene;
}

std::string canonical_dump(const json& value) {
  std::string out;
  dump_into(value, out);
  return out;
}

std::string serialize(const CityScene& scene, bool normalize) {
  json doc = scene_to_json(scene);
  if (normalize) doc["generated_at"] = kNormalizedTimestamp;
  return canonical_dump(doc);
}

CityScene parse_scene(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SceneError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return scene_from_json(doc);
  } catch (const json::exception& e) {
    throw SceneError(std::string("bad scene document: ") + e.what());
  }
}

std::string format_violation(const Violation& v) {
  std::string out = v.kind + ": " + v.message;
  if (!v.box_ids.empty()) {
    out += " [";
    for (std::size_t i = 0; i < v.box_ids.size(); ++i) {
      if (i) out += ", ";
      out += v.box_ids[i];
    }
    out += "]";
  }
  return out;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace jscity
