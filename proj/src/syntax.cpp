#include "jscity/syntax.hpp"

#include <algorithm>
#include <type_traits>

namespace jscity {

const FieldValue* SyntaxNode::field(std::string_view name) const {
  for (const auto& [key, value] : fields) {
    if (key == name) return &value;
  }
  return nullptr;
}

FieldValue* SyntaxNode::field(std::string_view name) {
  for (auto& [key, value] : fields) {
    if (key == name) return &value;
  }
  return nullptr;
}

const SyntaxNode* SyntaxNode::child(std::string_view name) const {
  const FieldValue* value = field(name);
  if (value == nullptr) return nullptr;
  if (const auto* node = std::get_if<NodePtr>(value)) return node->get();
  return nullptr;
}

const NodeList* SyntaxNode::list(std::string_view name) const {
  const FieldValue* value = field(name);
  if (value == nullptr) return nullptr;
  return std::get_if<NodeList>(value);
}

std::optional<std::string_view> SyntaxNode::text(std::string_view name) const {
  const FieldValue* value = field(name);
  if (value == nullptr) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(value)) return std::string_view(*s);
  return std::nullopt;
}

bool SyntaxNode::flag(std::string_view name) const {
  const FieldValue* value = field(name);
  if (value == nullptr) return false;
  if (const auto* b = std::get_if<bool>(value)) return *b;
  return false;
}

void SyntaxNode::set(std::string name, FieldValue value) {
  if (FieldValue* existing = field(name)) {
    *existing = std::move(value);
    return;
  }
  fields.emplace_back(std::move(name), std::move(value));
}

FieldValue SyntaxNode::take(std::string_view name) {
  auto it = std::find_if(fields.begin(), fields.end(),
                         [&](const auto& f) { return f.first == name; });
  if (it == fields.end()) return std::monostate{};
  FieldValue value = std::move(it->second);
  fields.erase(it);
  return value;
}

namespace {

FieldValue clone_value(const FieldValue& value) {
  return std::visit(
      [](const auto& v) -> FieldValue {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NodePtr>) {
          return v ? clone_node(*v) : NodePtr{};
        } else if constexpr (std::is_same_v<T, NodeList>) {
          NodeList out;
          out.reserve(v.size());
          for (const auto& n : v) out.push_back(n ? clone_node(*n) : NodePtr{});
          return out;
        } else {
          return v;
        }
      },
      value);
}

}  // namespace

NodePtr clone_node(const SyntaxNode& node) {
  auto copy = std::make_unique<SyntaxNode>(node.type);
  copy->span = node.span;
  copy->has_loc = node.has_loc;
  copy->offset_begin = node.offset_begin;
  copy->offset_end = node.offset_end;
  copy->fields.reserve(node.fields.size());
  for (const auto& [name, value] : node.fields) copy->fields.emplace_back(name, clone_value(value));
  return copy;
}

}  // namespace jscity
