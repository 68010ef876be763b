#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "jscity/code_model.hpp"
#include "jscity/syntax.hpp"

namespace jscity {

/// Rejection of an ESTree document. path() names the offending node,
/// e.g. "body[0].declarations[0].init"; "(root)" for the document itself.
class EstreeError : public std::runtime_error {
 public:
  EstreeError(const std::string& message, std::string path);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Converts an ESTree JSON document (as produced by acorn/esprima with
/// location tracking) into the internal syntax tree. Function nodes must
/// carry `type` and `loc`; other nodes may omit `loc`.
SyntaxTree load_estree_json(const nlohmann::json& doc);

/// load_estree_json + extract_functions; the ESTree counterpart of
/// analyze_unit.
FileNode analyze_estree(const nlohmann::json& doc, const std::string& path);

/// Inverse view: serializes a syntax tree back to ESTree JSON (type, loc and
/// the scalar/node fields the tree holds).
nlohmann::json to_estree_json(const SyntaxNode& node);

}  // namespace jscity
