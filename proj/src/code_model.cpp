#include "jscity/code_model.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <system_error>
#include <utility>

#include "jscity/js_parser.hpp"

namespace jscity {

namespace fs = std::filesystem;

std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::declaration: return "declaration";
    case FunctionKind::expression: return "expression";
    case FunctionKind::arrow: return "arrow";
    case FunctionKind::method: return "method";
  }
  return "declaration";
}

std::string_view to_string(Naming naming) {
  return naming == Naming::named ? "named" : "anonymous";
}

std::string_view to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::skipped_minified: return "skipped_minified";
    case ParseStatus::parse_error: return "parse_error";
  }
  return "ok";
}

// ---- globbing and scanning ------------------------------------------------

namespace {

bool match_from(std::string_view p, std::string_view s) {
  while (!p.empty()) {
    if (p.substr(0, 2) == "**") {
      std::string_view rest = p.substr(2);
      if (!rest.empty() && rest.front() == '/') {
        // "**/" can also match zero directories.
        if (match_from(rest.substr(1), s)) return true;
      }
      for (std::size_t i = 0; i <= s.size(); ++i) {
        if (match_from(rest, s.substr(i))) return true;
      }
      return false;
    }
    if (p.front() == '*') {
      std::string_view rest = p.substr(1);
      for (std::size_t i = 0; i <= s.size(); ++i) {
        if (match_from(rest, s.substr(i))) return true;
        if (i < s.size() && s[i] == '/') break;
      }
      return false;
    }
    if (s.empty()) return false;
    if (p.front() == '?') {
      if (s.front() == '/') return false;
    } else if (p.front() != s.front()) {
      return false;
    }
    p.remove_prefix(1);
    s.remove_prefix(1);
  }
  return s.empty();
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
  if (!pattern.empty() && pattern.front() == '/') return match_from(pattern.substr(1), path);
  if (match_from(pattern, path)) return true;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] == '/' && match_from(pattern, path.substr(i + 1))) return true;
  }
  return false;
}

bool is_excluded(std::string_view relative_path, const std::vector<std::string>& globs) {
  return std::any_of(globs.begin(), globs.end(),
                     [&](const std::string& g) { return glob_match(g, relative_path); });
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > text.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range values.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

namespace {

bool has_included_extension(std::string_view path, const std::vector<std::string>& exts) {
  return std::any_of(exts.begin(), exts.end(),
                     [&](const std::string& e) { return path.ends_with(e); });
}

}  // namespace

ScanResult scan_sources(const fs::path& root, const ScanConfig& config) {
  std::error_code ec;
  if (!fs::exists(root, ec) || !fs::is_directory(root, ec)) {
    throw ScanError("source root not found: " + root.string());
  }
  ScanResult result;
  auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw ScanError("cannot read source root " + root.string() + ": " + ec.message());
  for (auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
    if (ec) {
      result.warnings.push_back({"", "directory walk error: " + ec.message()});
      ec.clear();
      continue;
    }
    const fs::directory_entry& entry = *it;
    const std::string rel = entry.path().lexically_relative(root).generic_string();
    if (entry.is_symlink(ec)) {
      continue;
    }
    if (entry.is_directory(ec)) {
      if (is_excluded(rel + "/", config.exclude_globs)) it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(ec)) continue;
    if (!has_included_extension(rel, config.include_extensions)) continue;
    if (is_excluded(rel, config.exclude_globs)) continue;

    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) {
      result.warnings.push_back({rel, "unreadable file skipped"});
      continue;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
      result.warnings.push_back({rel, "read error, file skipped"});
      continue;
    }
    if (!is_valid_utf8(text)) {
      result.warnings.push_back({rel, "not valid UTF-8, file skipped"});
      continue;
    }
    SourceUnit unit;
    unit.path = rel;
    unit.byte_len = text.size();
    unit.text = std::move(text);
    result.units.push_back(std::move(unit));
  }
  std::sort(result.units.begin(), result.units.end(),
            [](const SourceUnit& a, const SourceUnit& b) { return a.path < b.path; });
  std::sort(result.warnings.begin(), result.warnings.end(),
            [](const ScanWarning& a, const ScanWarning& b) { return a.path < b.path; });
  return result;
}

// ---- parsing --------------------------------------------------------------

namespace {

// Longest line measured in code points.
std::pair<std::uint32_t, std::uint32_t> longest_line(std::string_view text) {
  std::uint32_t longest = 0;
  std::uint32_t longest_line_no = 0;
  std::uint32_t current = 0;
  std::uint32_t line_no = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (current > longest) {
        longest = current;
        longest_line_no = line_no;
      }
      current = 0;
      ++line_no;
      continue;
    }
    if ((c & 0xC0) != 0x80) ++current;
  }
  if (current > longest) {
    longest = current;
    longest_line_no = line_no;
  }
  return {longest, longest_line_no};
}

}  // namespace

ParsedUnit parse_unit(const SourceUnit& unit, const ScanConfig& config) {
  ParsedUnit out;
  out.line_count = count_physical_lines(unit.text);
  if (unit.text.size() > config.max_file_bytes) {
    out.status = ParseStatus::skipped_minified;
    out.error_message = "file has " + std::to_string(unit.text.size()) + " bytes (limit " +
                        std::to_string(config.max_file_bytes) + ")";
    return out;
  }
  const auto [longest, line_no] = longest_line(unit.text);
  if (longest > config.max_line_chars) {
    out.status = ParseStatus::skipped_minified;
    out.error_message = "line " + std::to_string(line_no) + " has " + std::to_string(longest) +
                        " characters (limit " + std::to_string(config.max_line_chars) + ")";
    return out;
  }
  try {
    out.tree = parse_javascript(unit.text);
    out.status = ParseStatus::ok;
  } catch (const ParseError& e) {
    out.status = ParseStatus::parse_error;
    out.error_message = e.what();
  }
  return out;
}

// ---- extraction -----------------------------------------------------------

namespace {

bool is_function_node(const SyntaxNode& n) {
  return n.type == "FunctionDeclaration" || n.type == "FunctionExpression" ||
         n.type == "ArrowFunctionExpression";
}

std::uint32_t count_bound_names(const SyntaxNode* pattern) {
  if (pattern == nullptr) return 0;
  const std::string& t = pattern->type;
  if (t == "Identifier") return 1;
  if (t == "AssignmentPattern") return count_bound_names(pattern->child("left"));
  if (t == "RestElement") return count_bound_names(pattern->child("argument"));
  std::uint32_t total = 0;
  if (t == "ObjectPattern") {
    if (const NodeList* props = pattern->list("properties")) {
      for (const auto& p : *props) {
        if (!p) continue;
        if (p->type == "RestElement") {
          total += count_bound_names(p.get());
        } else {
          total += count_bound_names(p->child("value"));
        }
      }
    }
  } else if (t == "ArrayPattern") {
    if (const NodeList* elements = pattern->list("elements")) {
      for (const auto& e : *elements) total += count_bound_names(e.get());
    }
  }
  return total;
}

std::optional<std::string> key_name(const SyntaxNode* key) {
  if (key == nullptr) return std::nullopt;
  if (key->type == "Identifier") {
    if (auto n = key->text("name")) return std::string(*n);
  } else if (key->type == "PrivateIdentifier") {
    if (auto n = key->text("name")) return "#" + std::string(*n);
  } else if (key->type == "Literal") {
    if (auto v = key->text("value")) return std::string(*v);
    if (auto raw = key->text("raw")) return std::string(*raw);
  }
  return std::nullopt;
}

struct MethodInfo {
  std::optional<std::string> name;
};

class Extractor {
 public:
  std::vector<FunctionNode> run(const SyntaxNode& program) {
    std::vector<FunctionNode> top;
    walk_children(program, nullptr, top);
    return top;
  }

 private:
  void walk_children(const SyntaxNode& n, FunctionNode* owner, std::vector<FunctionNode>& sink) {
    for (const auto& [key, value] : n.fields) {
      if (const auto* child = std::get_if<NodePtr>(&value)) {
        if (*child) walk(**child, owner, sink);
      } else if (const auto* list = std::get_if<NodeList>(&value)) {
        for (const auto& c : *list) {
          if (c) walk(*c, owner, sink);
        }
      }
    }
  }

  void walk(const SyntaxNode& n, FunctionNode* owner, std::vector<FunctionNode>& sink) {
    if (is_function_node(n)) {
      add_function(n, sink, std::nullopt);
      return;
    }
    if (n.type == "VariableDeclaration") {
      if (owner != nullptr) {
        if (const NodeList* decls = n.list("declarations")) {
          for (const auto& d : *decls) {
            if (d) owner->own_var_count += count_bound_names(d->child("id"));
          }
        }
      }
      walk_children(n, owner, sink);
      return;
    }
    const bool method_like =
        n.type == "MethodDefinition" ||
        (n.type == "Property" &&
         (n.flag("method") || n.text("kind") == "get" || n.text("kind") == "set"));
    if (method_like) {
      const SyntaxNode* value = n.child("value");
      if (value != nullptr && value->type == "FunctionExpression") {
        const bool computed = n.flag("computed");
        const SyntaxNode* key = n.child("key");
        if (computed && key != nullptr) walk(*key, owner, sink);
        MethodInfo info;
        if (!computed) {
          info.name = key_name(key);
          if (n.text("kind") == "constructor" && !class_names_.empty() && class_names_.back()) {
            info.name = class_names_.back();
          }
        }
        add_function(*value, sink, info);
        return;
      }
    }
    if (n.type == "ClassDeclaration" || n.type == "ClassExpression") {
      std::optional<std::string> name;
      if (const SyntaxNode* id = n.child("id")) {
        if (auto s = id->text("name")) name = std::string(*s);
      }
      class_names_.push_back(std::move(name));
      walk_children(n, owner, sink);
      class_names_.pop_back();
      return;
    }
    walk_children(n, owner, sink);
  }

  void add_function(const SyntaxNode& n, std::vector<FunctionNode>& sink,
                    const std::optional<MethodInfo>& method) {
    FunctionNode f;
    if (method) {
      f.kind = FunctionKind::method;
      f.name = method->name;
    } else if (n.type == "FunctionDeclaration") {
      f.kind = FunctionKind::declaration;
    } else if (n.type == "ArrowFunctionExpression") {
      f.kind = FunctionKind::arrow;
    } else {
      f.kind = FunctionKind::expression;
    }
    if (!method && f.kind != FunctionKind::arrow) {
      if (const SyntaxNode* id = n.child("id")) {
        if (auto s = id->text("name")) f.name = std::string(*s);
      }
    }
    if (f.name && f.name->empty()) f.name.reset();
    f.naming = f.name ? Naming::named : Naming::anonymous;
    f.start_line = n.span.start.line;
    f.start_column = n.span.start.column;
    f.end_line = n.span.end.line;
    f.end_column = n.span.end.column;
    if (const NodeList* params = n.list("params")) f.param_count = static_cast<std::uint32_t>(params->size());
    walk_children(n, &f, f.children);
    sink.push_back(std::move(f));
  }

  std::vector<std::optional<std::string>> class_names_;
};

void sort_and_number(std::vector<FunctionNode>& forest, const std::string& path,
                     std::size_t& counter) {
  std::stable_sort(forest.begin(), forest.end(), [](const FunctionNode& a, const FunctionNode& b) {
    return a.start() < b.start();
  });
  for (auto& f : forest) {
    f.id = path + "#" + std::to_string(counter++);
    sort_and_number(f.children, path, counter);
  }
}

}  // namespace

FileNode extract_functions(const SyntaxNode& program, const std::string& path) {
  FileNode file;
  file.path = path;
  file.functions = Extractor().run(program);
  std::size_t counter = 0;
  sort_and_number(file.functions, path, counter);
  return file;
}

FileNode analyze_unit(const SourceUnit& unit, const ScanConfig& config) {
  ParsedUnit parsed = parse_unit(unit, config);
  FileNode file;
  if (parsed.status == ParseStatus::ok && parsed.tree) {
    file = extract_functions(*parsed.tree->program, unit.path);
  } else {
    file.path = unit.path;
    file.parse_status = parsed.status;
    file.error_message = parsed.error_message;
  }
  file.line_count = parsed.line_count;
  return file;
}

// ---- tree -----------------------------------------------------------------

namespace {

void validate_relative_path(const std::string& path) {
  if (path.empty()) throw CodeTreeError("empty file path");
  if (path.front() == '/') throw CodeTreeError("absolute file path: " + path);
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t slash = path.find('/', start);
    const std::string_view seg =
        std::string_view(path).substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (seg.empty() || seg == "..") throw CodeTreeError("invalid path segment in " + path);
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
}

void sort_directory(DirectoryNode& dir) {
  std::sort(dir.directories.begin(), dir.directories.end(),
            [](const DirectoryNode& a, const DirectoryNode& b) { return a.name < b.name; });
  std::sort(dir.files.begin(), dir.files.end(),
            [](const FileNode& a, const FileNode& b) { return a.path < b.path; });
  for (auto& sub : dir.directories) sort_directory(sub);
}

}  // namespace

CodeTree build_code_tree(std::vector<FileNode> files, std::string root_name) {
  std::sort(files.begin(), files.end(),
            [](const FileNode& a, const FileNode& b) { return a.path < b.path; });
  for (std::size_t i = 0; i < files.size(); ++i) {
    validate_relative_path(files[i].path);
    if (i > 0 && files[i].path == files[i - 1].path) {
      throw CodeTreeError("duplicate file path: " + files[i].path);
    }
  }
  CodeTree tree;
  tree.root_name = std::move(root_name);
  for (auto& file : files) {
    DirectoryNode* dir = &tree.root;
    std::size_t start = 0;
    for (std::size_t slash = file.path.find('/'); slash != std::string::npos;
         slash = file.path.find('/', start)) {
      const std::string name = file.path.substr(start, slash - start);
      auto it = std::find_if(dir->directories.begin(), dir->directories.end(),
                             [&](const DirectoryNode& d) { return d.name == name; });
      if (it == dir->directories.end()) {
        DirectoryNode sub;
        sub.name = name;
        sub.path = file.path.substr(0, slash);
        dir->directories.push_back(std::move(sub));
        it = std::prev(dir->directories.end());
      }
      dir = &*it;
      start = slash + 1;
    }
    // Directories and files could share a name only on a broken filesystem;
    // duplicate full paths are rejected above.
    dir->files.push_back(std::move(file));
  }
  sort_directory(tree.root);
  return tree;
}

namespace {

void check_forest(const std::vector<FunctionNode>& forest, const FunctionNode* parent,
                  std::set<std::string>& ids, std::vector<std::string>& problems) {
  const FunctionNode* prev = nullptr;
  for (const auto& f : forest) {
    if (!ids.insert(f.id).second) problems.push_back("duplicate function id " + f.id);
    if (f.end() < f.start()) problems.push_back(f.id + ": end precedes start");
    if ((f.naming == Naming::named) != (f.name.has_value() && !f.name->empty())) {
      problems.push_back(f.id + ": naming does not match name");
    }
    if (parent != nullptr && (f.start() < parent->start() || parent->end() < f.end())) {
      problems.push_back(f.id + ": not contained in parent " + parent->id);
    }
    if (prev != nullptr && f.start() < prev->end()) {
      problems.push_back(f.id + ": overlaps sibling " + prev->id);
    }
    check_forest(f.children, &f, ids, problems);
    prev = &f;
  }
}

}  // namespace

std::vector<std::string> check_file_invariants(const FileNode& file) {
  std::vector<std::string> problems;
  if (file.parse_status == ParseStatus::ok && file.error_message) {
    problems.push_back(file.path + ": ok status carries an error message");
  }
  std::set<std::string> ids;
  check_forest(file.functions, nullptr, ids, problems);
  return problems;
}

}  // namespace jscity
