#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jscity/syntax.hpp"

namespace jscity {

struct ScanConfig {
  std::vector<std::string> include_extensions{".js", ".mjs", ".cjs"};
  std::vector<std::string> exclude_globs{"node_modules/**", ".git/**", "*.min.js"};
  std::uint64_t max_file_bytes = 5ull * 1024 * 1024;
  std::uint32_t max_line_chars = 5000;
  bool count_params = false;

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

/// One source file read from disk. `path` is relative and '/'-separated.
struct SourceUnit {
  std::string path;
  std::string text;
  std::uint64_t byte_len = 0;
};

struct ScanWarning {
  std::string path;
  std::string message;
};

struct ScanResult {
  std::vector<SourceUnit> units;
  std::vector<ScanWarning> warnings;
};

class ScanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects matching source files under `root`, sorted by relative path.
/// Throws ScanError when root does not exist or is not a directory;
/// unreadable or non-UTF-8 files become warnings.
ScanResult scan_sources(const std::filesystem::path& root, const ScanConfig& config);

/// Glob matching on '/'-separated relative paths. `*` and `?` stay within a
/// segment, `**` spans segments. Patterns without a leading '/' may match at
/// any directory depth; a leading '/' anchors at the scan root.
bool glob_match(std::string_view pattern, std::string_view path);
bool is_excluded(std::string_view relative_path, const std::vector<std::string>& globs);

bool is_valid_utf8(std::string_view text);

enum class FunctionKind { declaration, expression, arrow, method };
enum class Naming { named, anonymous };
enum class ParseStatus { ok, skipped_minified, parse_error };

std::string_view to_string(FunctionKind kind);
std::string_view to_string(Naming naming);
std::string_view to_string(ParseStatus status);

struct FunctionNode {
  std::string id;  // "<file path>#<pre-order index>"
  std::optional<std::string> name;
  FunctionKind kind = FunctionKind::declaration;
  Naming naming = Naming::anonymous;
  std::uint32_t start_line = 1;
  std::uint32_t end_line = 1;
  // Columns (0-based UTF-16 units) used for same-line containment.
  std::uint32_t start_column = 0;
  std::uint32_t end_column = 0;
  std::vector<FunctionNode> children;
  std::uint32_t own_var_count = 0;
  std::uint32_t param_count = 0;

  Position start() const { return {start_line, start_column}; }
  Position end() const { return {end_line, end_column}; }

  friend bool operator==(const FunctionNode&, const FunctionNode&) = default;
};

struct FileNode {
  std::string path;
  std::vector<FunctionNode> functions;
  ParseStatus parse_status = ParseStatus::ok;
  std::optional<std::string> error_message;
  // Physical lines in the source text; contributes to project LOC.
  std::uint32_t line_count = 0;

  friend bool operator==(const FileNode&, const FileNode&) = default;
};

struct DirectoryNode {
  std::string name;
  std::string path;  // relative, "" for the root
  std::vector<DirectoryNode> directories;
  std::vector<FileNode> files;
};

struct CodeTree {
  std::string root_name;
  DirectoryNode root;
};

/// Parse result for one unit: a syntax tree when status is ok.
struct ParsedUnit {
  ParseStatus status = ParseStatus::ok;
  std::optional<SyntaxTree> tree;
  std::optional<std::string> error_message;
  std::uint32_t line_count = 0;
};

/// Parses a unit, applying the minified-file heuristics from `config`.
ParsedUnit parse_unit(const SourceUnit& unit, const ScanConfig& config);

/// Builds the function forest of one file from a Program syntax tree.
FileNode extract_functions(const SyntaxNode& program, const std::string& path);

/// parse_unit + extract_functions; failed parses yield an empty FileNode
/// carrying the status and message.
FileNode analyze_unit(const SourceUnit& unit, const ScanConfig& config);

class CodeTreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reconstructs the directory hierarchy from file paths. Directories and
/// files are sorted by name. Throws CodeTreeError on duplicate paths.
CodeTree build_code_tree(std::vector<FileNode> files, std::string root_name);

/// Visits every file of the tree in order.
template <typename Fn>
void for_each_file(const DirectoryNode& dir, Fn&& fn) {
  for (const auto& sub : dir.directories) for_each_file(sub, fn);
  for (const auto& file : dir.files) fn(file);
}

/// Visits every function (pre-order) of a forest.
template <typename Fn>
void for_each_function(const std::vector<FunctionNode>& forest, Fn&& fn) {
  for (const auto& f : forest) {
    fn(f);
    for_each_function(f.children, fn);
  }
}

/// Structural checks: interval containment, sibling ordering, naming and id
/// uniqueness. Returns human-readable problems (empty when sound).
std::vector<std::string> check_file_invariants(const FileNode& file);

}  // namespace jscity
