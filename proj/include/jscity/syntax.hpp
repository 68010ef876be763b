#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace jscity {

/// A point in source text. Lines are 1-based, columns are 0-based UTF-16
/// code units from the start of the line (the ESTree `loc` convention).
struct Position {
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

struct SourceSpan {
  Position start;
  Position end;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct SyntaxNode;
using NodePtr = std::unique_ptr<SyntaxNode>;
/// Array-valued field. Entries may be null (array holes such as `[, a]`).
using NodeList = std::vector<NodePtr>;

/// Field payload. monostate stands for JSON null.
using FieldValue =
    std::variant<std::monostate, bool, double, std::string, NodePtr, NodeList>;

/// Generic ESTree-shaped node. Both the built-in parser and the ESTree JSON
/// loader produce this representation, using ESTree field names.
struct SyntaxNode {
  std::string type;
  SourceSpan span;
  bool has_loc = false;
  // Byte offsets into the parsed text; only meaningful for parser output.
  std::size_t offset_begin = 0;
  std::size_t offset_end = 0;
  std::vector<std::pair<std::string, FieldValue>> fields;

  SyntaxNode() = default;
  explicit SyntaxNode(std::string t) : type(std::move(t)) {}

  const FieldValue* field(std::string_view name) const;
  FieldValue* field(std::string_view name);

  /// Single-node field, or nullptr when absent or null.
  const SyntaxNode* child(std::string_view name) const;
  /// Array field, or nullptr when absent.
  const NodeList* list(std::string_view name) const;
  std::optional<std::string_view> text(std::string_view name) const;
  bool flag(std::string_view name) const;

  void set(std::string name, FieldValue value);
  /// Removes and returns a field's value (monostate when absent).
  FieldValue take(std::string_view name);
};

/// Deep copy of a node and its subtree.
NodePtr clone_node(const SyntaxNode& node);

/// Parsed program plus facts about the source text it came from.
struct SyntaxTree {
  NodePtr program;
  /// Physical line count of the source (0 for empty text).
  std::uint32_t line_count = 0;
};

}  // namespace jscity
