#include "jscity/estree.hpp"

#include <string_view>
#include <utility>

namespace jscity {

EstreeError::EstreeError(const std::string& message, std::string path)
    : std::runtime_error(message + " at " + path), path_(std::move(path)) {}

namespace {

using nlohmann::json;

bool is_function_type(std::string_view type) {
  return type == "FunctionDeclaration" || type == "FunctionExpression" ||
         type == "ArrowFunctionExpression";
}

bool is_position(const json& p) {
  return p.is_object() && p.contains("line") && p.contains("column") &&
         p["line"].is_number_integer() && p["column"].is_number_integer() &&
         p["line"].get<long long>() >= 1 && p["column"].get<long long>() >= 0;
}

Position read_position(const json& p) {
  return {static_cast<std::uint32_t>(p["line"].get<long long>()),
          static_cast<std::uint32_t>(p["column"].get<long long>())};
}

std::string child_path(const std::string& parent, std::string_view key) {
  if (parent == "(root)") return std::string(key);
  return parent + "." + std::string(key);
}

constexpr std::string_view kSkippedKeys[] = {"type", "loc", "start", "end", "range"};

bool skipped_key(std::string_view key) {
  for (auto k : kSkippedKeys) {
    if (k == key) return true;
  }
  return false;
}

NodePtr convert(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw EstreeError("expected a node object", path);
  auto type_it = obj.find("type");
  if (type_it == obj.end() || !type_it->is_string()) throw EstreeError("missing `type`", path);
  auto node = std::make_unique<SyntaxNode>(type_it->get<std::string>());

  auto loc_it = obj.find("loc");
  if (loc_it != obj.end() && !loc_it->is_null()) {
    const json& loc = *loc_it;
    if (!loc.is_object() || !loc.contains("start") || !loc.contains("end") ||
        !is_position(loc["start"]) || !is_position(loc["end"])) {
      throw EstreeError("malformed `loc`", path);
    }
    node->span = {read_position(loc["start"]), read_position(loc["end"])};
    node->has_loc = true;
  } else if (is_function_type(node->type)) {
    throw EstreeError("function node missing `loc`", path);
  }

  for (const auto& [key, value] : obj.items()) {
    if (skipped_key(key)) continue;
    if (value.is_object()) {
      if (value.contains("type")) node->set(key, convert(value, child_path(path, key)));
      continue;  // auxiliary objects such as `regex`
    }
    if (value.is_array()) {
      NodeList list;
      list.reserve(value.size());
      bool node_array = true;
      for (std::size_t i = 0; i < value.size(); ++i) {
        const json& element = value[i];
        if (element.is_null()) {
          list.push_back(nullptr);
        } else if (element.is_object()) {
          list.push_back(convert(element, child_path(path, key) + "[" + std::to_string(i) + "]"));
        } else {
          node_array = false;
          break;
        }
      }
      if (node_array) node->set(key, std::move(list));
      continue;
    }
    if (value.is_string()) {
      node->set(key, value.get<std::string>());
    } else if (value.is_boolean()) {
      node->set(key, value.get<bool>());
    } else if (value.is_number()) {
      node->set(key, value.get<double>());
    } else if (value.is_null()) {
      node->set(key, std::monostate{});
    }
  }
  return node;
}

json position_json(Position p) { return json{{"line", p.line}, {"column", p.column}}; }

}  // namespace

SyntaxTree load_estree_json(const json& doc) {
  if (!doc.is_object()) throw EstreeError("document is not a JSON object", "(root)");
  SyntaxTree tree;
  tree.program = convert(doc, "(root)");
  if (tree.program->type != "Program") {
    throw EstreeError("root node must be a Program", "(root)");
  }
  // The Program span ends at the end of input; a final empty line (after a
  // trailing terminator) is not a physical line.
  if (tree.program->has_loc) {
    const Position end = tree.program->span.end;
    tree.line_count = (end.column == 0) ? end.line - 1 : end.line;
  }
  return tree;
}

FileNode analyze_estree(const json& doc, const std::string& path) {
  const SyntaxTree tree = load_estree_json(doc);
  FileNode file = extract_functions(*tree.program, path);
  file.line_count = tree.line_count;
  return file;
}

json to_estree_json(const SyntaxNode& node) {
  json out = json::object();
  out["type"] = node.type;
  if (node.has_loc) {
    out["loc"] = {{"start", position_json(node.span.start)}, {"end", position_json(node.span.end)}};
  }
  for (const auto& [key, value] : node.fields) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            out[key] = nullptr;
          } else if constexpr (std::is_same_v<T, NodePtr>) {
            out[key] = v ? to_estree_json(*v) : json(nullptr);
          } else if constexpr (std::is_same_v<T, NodeList>) {
            json arr = json::array();
            for (const auto& n : v) arr.push_back(n ? to_estree_json(*n) : json(nullptr));
            out[key] = std::move(arr);
          } else {
            out[key] = v;
          }
        },
        value);
  }
  return out;
}

}  // namespace jscity
