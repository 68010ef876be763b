#include "jscity/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace jscity {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class LineParser {
 public:
  LineParser(std::string_view value, int line) : v_(value), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError("jscity.toml line " + std::to_string(line_) + ": " + message);
  }

  std::string string_value() {
    skip_ws();
    if (pos_ >= v_.size() || (v_[pos_] != '"' && v_[pos_] != '\'')) fail("expected a quoted string");
    const char quote = v_[pos_++];
    std::string out;
    while (pos_ < v_.size() && v_[pos_] != quote) {
      char c = v_[pos_++];
      if (c == '\\' && quote == '"') {
        if (pos_ >= v_.size()) break;
        char e = v_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '\\': c = '\\'; break;
          case '"': c = '"'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out += c;
    }
    if (pos_ >= v_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::vector<std::string> string_list() {
    skip_ws();
    if (pos_ >= v_.size() || v_[pos_] != '[') fail("expected a list of strings");
    ++pos_;
    std::vector<std::string> out;
    skip_ws();
    if (pos_ < v_.size() && v_[pos_] == ']') {
      ++pos_;
      return out;
    }
    for (;;) {
      out.push_back(string_value());
      skip_ws();
      if (pos_ < v_.size() && v_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < v_.size() && v_[pos_] == ']') {
          ++pos_;
          break;
        }
        continue;
      }
      if (pos_ < v_.size() && v_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']'");
    }
    return out;
  }

  bool boolean() {
    std::string_view word = rest();
    if (word == "true") return true;
    if (word == "false") return false;
    fail("expected true or false");
  }

  std::uint64_t unsigned_integer() {
    std::string digits;
    for (char c : rest()) {
      if (c != '_') digits += c;
    }
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      fail("expected a non-negative integer");
    }
    return out;
  }

  double number() {
    std::string text(rest());
    double out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) fail("expected a number");
    return out;
  }

  void finish() {
    skip_ws();
    if (pos_ < v_.size()) fail("unexpected trailing text");
  }

 private:
  void skip_ws() {
    while (pos_ < v_.size() && (v_[pos_] == ' ' || v_[pos_] == '\t')) ++pos_;
  }

  std::string_view rest() {
    std::string_view r = trim(v_.substr(pos_));
    pos_ = v_.size();
    return r;
  }

  std::string_view v_;
  std::size_t pos_ = 0;
  int line_;
};

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == '\\' && quote == '"') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

void apply_config_text(std::string_view text, ScanConfig& scan, LayoutConfig& layout) {
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(strip_comment(text.substr(start, end - start)));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    LineParser diag("", line_no);
    if (line.front() == '[') {
      if (line.back() != ']') diag.fail("malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "scan" && section != "layout") diag.fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) diag.fail("expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    LineParser p(trim(line.substr(eq + 1)), line_no);

    const bool scan_ok = section.empty() || section == "scan";
    const bool layout_ok = section.empty() || section == "layout";
    if (scan_ok && key == "include_extensions") {
      scan.include_extensions = p.string_list();
    } else if (scan_ok && key == "exclude_globs") {
      scan.exclude_globs = p.string_list();
    } else if (scan_ok && key == "max_file_bytes") {
      scan.max_file_bytes = p.unsigned_integer();
    } else if (scan_ok && key == "max_line_chars") {
      const std::uint64_t v = p.unsigned_integer();
      if (v > UINT32_MAX) p.fail("max_line_chars is too large");
      scan.max_line_chars = static_cast<std::uint32_t>(v);
    } else if (scan_ok && key == "count_params") {
      scan.count_params = p.boolean();
    } else if (layout_ok && key == "gutter") {
      layout.gutter = p.number();
    } else if (layout_ok && key == "plate_height") {
      layout.plate_height = p.number();
    } else if (layout_ok && key == "height_scale") {
      layout.height_scale = p.number();
    } else if (layout_ok && key == "min_building_side") {
      layout.min_building_side = p.number();
    } else if (layout_ok && key == "max_building_side") {
      layout.max_building_side = p.number();
    } else if (layout_ok && key == "width_mapping") {
      auto m = parse_width_mapping(p.string_value());
      if (!m) p.fail("width_mapping must be \"sqrt\" or \"linear\"");
      layout.width_mapping = *m;
    } else {
      p.fail("unknown key \"" + key + "\"");
    }
    p.finish();
  }
}

bool apply_config_file(const std::filesystem::path& root, ScanConfig& scan, LayoutConfig& layout) {
  const auto path = root / "jscity.toml";
  if (!std::filesystem::is_regular_file(path)) return false;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), scan, layout);
  return true;
}

}  // namespace jscity
