#include "js_lexer.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

namespace jscity {

ParseError::ParseError(const std::string& message, Position where)
    : std::runtime_error(message + " (" + std::to_string(where.line) + ":" +
                         std::to_string(where.column) + ")"),
      where_(where) {}

namespace detail {
namespace {

struct CodePoint {
  std::uint32_t value = 0;
  std::size_t length = 1;
};

CodePoint decode_at(std::string_view s, std::size_t p) {
  const auto b0 = static_cast<unsigned char>(s[p]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 1;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (p + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[p + i]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_line_terminator_cp(std::uint32_t cp) {
  return cp == '\n' || cp == '\r' || cp == 0x2028 || cp == 0x2029;
}

bool is_space_cp(std::uint32_t cp) {
  switch (cp) {
    case '\t':
    case 0x0B:
    case 0x0C:
    case ' ':
    case 0xA0:
    case 0x1680:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_ascii_id_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '$' || c == '_';
}

bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr std::array<std::string_view, 54> kPunctuators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=",
    "?\?=",  "=>",  "==",  "!=",  "<=",  ">=",  "&&",  "||",  "??",  "?.",
    "++",   "--",  "+=",  "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",
    "<<",   ">>",  "**",  "{",   "}",   "(",   ")",   "[",   "]",   ";",
    ",",    "<",   ">",   "+",   "-",   "*",   "/",   "%",   "&",   "|",
    "^",    "!",   "~",   "?"};

}  // namespace

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

Lexer::Lexer(std::string_view source) : src_(source) {
  line_starts_.push_back(0);
  bool ascii = true;
  std::size_t i = 0;
  while (i < src_.size()) {
    const auto c = static_cast<unsigned char>(src_[i]);
    std::size_t next_start = 0;
    if (c == '\n') {
      next_start = i + 1;
    } else if (c == '\r') {
      next_start = (i + 1 < src_.size() && src_[i + 1] == '\n') ? i + 2 : i + 1;
    } else if (c == 0xE2 && i + 2 < src_.size() &&
               static_cast<unsigned char>(src_[i + 1]) == 0x80 &&
               (static_cast<unsigned char>(src_[i + 2]) == 0xA8 ||
                static_cast<unsigned char>(src_[i + 2]) == 0xA9)) {
      next_start = i + 3;
    }
    if (next_start != 0) {
      ascii_line_.push_back(ascii);
      ascii = true;
      line_starts_.push_back(next_start);
      i = next_start;
      continue;
    }
    if (c >= 0x80) ascii = false;
    ++i;
  }
  ascii_line_.push_back(ascii);
}

std::uint32_t Lexer::line_count() const noexcept {
  // The last entry is a line start; it is a real line only if non-empty.
  const std::size_t starts = line_starts_.size();
  if (line_starts_.back() >= src_.size()) return static_cast<std::uint32_t>(starts - 1);
  return static_cast<std::uint32_t>(starts);
}

Position Lexer::position(std::size_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  const auto line_index = static_cast<std::size_t>(it - line_starts_.begin()) - 1;
  const std::size_t line_start = line_starts_[line_index];
  std::uint32_t column = 0;
  if (ascii_line_[line_index]) {
    column = static_cast<std::uint32_t>(offset - line_start);
  } else {
    for (std::size_t p = line_start; p < offset; ++p) {
      const auto b = static_cast<unsigned char>(src_[p]);
      if ((b & 0xC0) != 0x80) {
        ++column;
        if (b >= 0xF0) ++column;  // astral code point: surrogate pair
      }
    }
  }
  return {static_cast<std::uint32_t>(line_index + 1), column};
}

void Lexer::fail(const std::string& message, std::size_t offset) const {
  throw ParseError(message, position(std::min(offset, src_.size())));
}

bool Lexer::skip_space() {
  bool newline = false;
  if (pos_ == 0 && src_.size() >= 2 && src_[0] == '#' && src_[1] == '!') {
    while (pos_ < src_.size() && !is_line_terminator_cp(decode_at(src_, pos_).value)) {
      pos_ += decode_at(src_, pos_).length;
    }
  }
  while (pos_ < src_.size()) {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (c == ' ' || c == '\t' || c == 0x0B || c == 0x0C) {
      ++pos_;
    } else if (c == '\n' || c == '\r') {
      newline = true;
      ++pos_;
    } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
      pos_ += 2;
      while (pos_ < src_.size()) {
        const CodePoint cp = decode_at(src_, pos_);
        if (is_line_terminator_cp(cp.value)) break;
        pos_ += cp.length;
      }
    } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
      const std::size_t open = pos_;
      const std::size_t close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) fail("Unterminated comment", open);
      for (std::size_t p = pos_ + 2; p < close; ++p) {
        const auto b = static_cast<unsigned char>(src_[p]);
        if (b == '\n' || b == '\r' ||
            (b == 0xE2 && p + 2 < close + 2 && static_cast<unsigned char>(src_[p + 1]) == 0x80 &&
             (static_cast<unsigned char>(src_[p + 2]) == 0xA8 ||
              static_cast<unsigned char>(src_[p + 2]) == 0xA9))) {
          newline = true;
          break;
        }
      }
      pos_ = close + 2;
    } else if (c >= 0x80) {
      const CodePoint cp = decode_at(src_, pos_);
      if (cp.value == 0x2028 || cp.value == 0x2029) {
        newline = true;
        pos_ += cp.length;
      } else if (is_space_cp(cp.value)) {
        pos_ += cp.length;
      } else {
        break;
      }
    } else {
      break;
    }
  }
  return newline;
}

bool Lexer::at_identifier_start(std::size_t p) const {
  if (p >= src_.size()) return false;
  const auto c = static_cast<unsigned char>(src_[p]);
  if (is_ascii_id_start(c)) return true;
  if (c == '\\') return p + 1 < src_.size() && src_[p + 1] == 'u';
  if (c >= 0x80) {
    const CodePoint cp = decode_at(src_, p);
    return !is_space_cp(cp.value) && !is_line_terminator_cp(cp.value);
  }
  return false;
}

bool Lexer::at_identifier_part(std::size_t p) const {
  if (p >= src_.size()) return false;
  const auto c = static_cast<unsigned char>(src_[p]);
  if (is_ascii_digit(c)) return true;
  if (c >= 0x80) {
    const CodePoint cp = decode_at(src_, p);
    // ZWNJ / ZWJ are identifier parts.
    if (cp.value == 0x200C || cp.value == 0x200D) return true;
  }
  return at_identifier_start(p);
}

std::uint32_t Lexer::read_escape_code_point(std::size_t& p, bool in_template, bool& valid) {
  // p points just past "\u".
  auto bad = [&]() -> std::uint32_t {
    if (!in_template) fail("Bad Unicode escape sequence", p);
    valid = false;
    return 0xFFFD;
  };
  if (p < src_.size() && src_[p] == '{') {
    ++p;
    std::uint32_t cp = 0;
    std::size_t digits = 0;
    while (p < src_.size() && src_[p] != '}') {
      const int h = hex_value(src_[p]);
      if (h < 0) return bad();
      cp = cp * 16 + static_cast<std::uint32_t>(h);
      if (cp > 0x10FFFF) return bad();
      ++p;
      ++digits;
    }
    if (p >= src_.size() || digits == 0) return bad();
    ++p;
    return cp;
  }
  std::uint32_t cp = 0;
  for (int i = 0; i < 4; ++i) {
    if (p >= src_.size()) return bad();
    const int h = hex_value(src_[p]);
    if (h < 0) return bad();
    cp = cp * 16 + static_cast<std::uint32_t>(h);
    ++p;
  }
  return cp;
}

void Lexer::scan_identifier_into(Token& tok) {
  tok.kind = TokenKind::name;
  std::string name;
  bool first = true;
  while (first ? at_identifier_start(pos_) : at_identifier_part(pos_)) {
    first = false;
    if (src_[pos_] == '\\') {
      pos_ += 2;
      bool valid = true;
      append_utf8(name, read_escape_code_point(pos_, false, valid));
      tok.escaped = true;
      continue;
    }
    const CodePoint cp = decode_at(src_, pos_);
    name.append(src_.substr(pos_, cp.length));
    pos_ += cp.length;
  }
  tok.value = std::move(name);
}

void Lexer::scan_number_into(Token& tok) {
  tok.kind = TokenKind::number;
  const std::size_t start = pos_;
  auto digits_in_base = [&](int base) {
    double value = 0.0;
    std::size_t count = 0;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '_') {
        ++pos_;
        continue;
      }
      const int d = hex_value(c);
      if (d < 0 || d >= base) break;
      value = value * base + d;
      ++pos_;
      ++count;
    }
    if (count == 0) fail("Expected number in radix " + std::to_string(base), pos_);
    return value;
  };

  if (src_[pos_] == '0' && pos_ + 1 < src_.size()) {
    const char p1 = src_[pos_ + 1];
    int base = 0;
    if (p1 == 'x' || p1 == 'X') base = 16;
    if (p1 == 'o' || p1 == 'O') base = 8;
    if (p1 == 'b' || p1 == 'B') base = 2;
    if (base != 0) {
      pos_ += 2;
      tok.number = digits_in_base(base);
      if (pos_ < src_.size() && src_[pos_] == 'n') ++pos_;
      if (at_identifier_start(pos_)) fail("Identifier directly after number", pos_);
      tok.value = std::string(src_.substr(start, pos_ - start));
      return;
    }
    if (is_ascii_digit(static_cast<unsigned char>(p1))) {
      // Legacy octal (or decimal with a leading zero when an 8/9 appears).
      std::size_t p = pos_ + 1;
      bool octal = true;
      while (p < src_.size() && is_ascii_digit(static_cast<unsigned char>(src_[p]))) {
        if (src_[p] >= '8') octal = false;
        ++p;
      }
      if (octal) {
        ++pos_;
        tok.number = digits_in_base(8);
        tok.value = std::string(src_.substr(start, pos_ - start));
        return;
      }
    }
  }

  std::string cleaned;
  auto take_digits = [&]() {
    while (pos_ < src_.size() &&
           (is_ascii_digit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      if (src_[pos_] != '_') cleaned.push_back(src_[pos_]);
      ++pos_;
    }
  };
  take_digits();
  bool bigint = false;
  if (pos_ < src_.size() && src_[pos_] == 'n') {
    bigint = true;
    ++pos_;
  } else {
    if (pos_ < src_.size() && src_[pos_] == '.') {
      cleaned.push_back('.');
      ++pos_;
      take_digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      cleaned.push_back('e');
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        cleaned.push_back(src_[pos_]);
        ++pos_;
      }
      const std::size_t before = cleaned.size();
      take_digits();
      if (cleaned.size() == before) fail("Invalid number", pos_);
    }
  }
  if (at_identifier_start(pos_)) fail("Identifier directly after number", pos_);
  tok.number = bigint ? 0.0 : std::strtod(cleaned.c_str(), nullptr);
  tok.value = std::string(src_.substr(start, pos_ - start));
}

void Lexer::scan_string_into(Token& tok, char quote) {
  tok.kind = TokenKind::string;
  const std::size_t open = pos_;
  ++pos_;
  std::string out;
  for (;;) {
    if (pos_ >= src_.size()) fail("Unterminated string constant", open);
    const char c = src_[pos_];
    if (c == quote) {
      ++pos_;
      break;
    }
    if (c == '\n' || c == '\r') fail("Unterminated string constant", open);
    if (c == '\\') {
      ++pos_;
      if (pos_ >= src_.size()) fail("Unterminated string constant", open);
      const char e = src_[pos_];
      switch (e) {
        case 'n': out.push_back('\n'); ++pos_; break;
        case 't': out.push_back('\t'); ++pos_; break;
        case 'r': out.push_back('\r'); ++pos_; break;
        case 'b': out.push_back('\b'); ++pos_; break;
        case 'f': out.push_back('\f'); ++pos_; break;
        case 'v': out.push_back('\v'); ++pos_; break;
        case '\r':
          ++pos_;
          if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
          break;
        case '\n': ++pos_; break;
        case 'x': {
          if (pos_ + 2 >= src_.size() || hex_value(src_[pos_ + 1]) < 0 ||
              hex_value(src_[pos_ + 2]) < 0) {
            fail("Bad character escape sequence", pos_);
          }
          append_utf8(out, static_cast<std::uint32_t>(hex_value(src_[pos_ + 1]) * 16 +
                                                      hex_value(src_[pos_ + 2])));
          pos_ += 3;
          break;
        }
        case 'u': {
          ++pos_;
          bool valid = true;
          append_utf8(out, read_escape_code_point(pos_, false, valid));
          break;
        }
        default:
          if (e >= '0' && e <= '7') {
            std::uint32_t v = 0;
            int n = 0;
            while (n < 3 && pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '7' &&
                   v * 8 + static_cast<std::uint32_t>(src_[pos_] - '0') <= 255) {
              v = v * 8 + static_cast<std::uint32_t>(src_[pos_] - '0');
              ++pos_;
              ++n;
            }
            append_utf8(out, v);
          } else {
            const CodePoint cp = decode_at(src_, pos_);
            if (cp.value != 0x2028 && cp.value != 0x2029) {
              out.append(src_.substr(pos_, cp.length));
            }
            pos_ += cp.length;
          }
      }
      continue;
    }
    out.push_back(c);
    ++pos_;
  }
  tok.value = std::move(out);
}

Token Lexer::scan_template_chunk(std::size_t token_start, std::size_t body_start) {
  Token tok;
  tok.kind = TokenKind::template_chunk;
  tok.start = token_start;
  tok.raw_start = body_start;
  pos_ = body_start;
  std::string cooked;
  for (;;) {
    if (pos_ >= src_.size()) fail("Unterminated template", token_start);
    const char c = src_[pos_];
    if (c == '`') {
      tok.raw_end = pos_;
      tok.template_tail = true;
      ++pos_;
      break;
    }
    if (c == '$' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '{') {
      tok.raw_end = pos_;
      pos_ += 2;
      break;
    }
    if (c == '\\') {
      ++pos_;
      if (pos_ >= src_.size()) fail("Unterminated template", token_start);
      const char e = src_[pos_];
      switch (e) {
        case 'n': cooked.push_back('\n'); ++pos_; break;
        case 't': cooked.push_back('\t'); ++pos_; break;
        case 'r': cooked.push_back('\r'); ++pos_; break;
        case 'b': cooked.push_back('\b'); ++pos_; break;
        case 'f': cooked.push_back('\f'); ++pos_; break;
        case 'v': cooked.push_back('\v'); ++pos_; break;
        case 'u': {
          ++pos_;
          append_utf8(cooked, read_escape_code_point(pos_, true, tok.cooked_valid));
          break;
        }
        case 'x':
          if (pos_ + 2 < src_.size() && hex_value(src_[pos_ + 1]) >= 0 &&
              hex_value(src_[pos_ + 2]) >= 0) {
            append_utf8(cooked, static_cast<std::uint32_t>(hex_value(src_[pos_ + 1]) * 16 +
                                                           hex_value(src_[pos_ + 2])));
            pos_ += 3;
          } else {
            tok.cooked_valid = false;
            ++pos_;
          }
          break;
        case '\r':
          ++pos_;
          if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
          break;
        default:
          if (e >= '1' && e <= '9') tok.cooked_valid = false;
          {
            const CodePoint cp = decode_at(src_, pos_);
            if (e == '0') {
              cooked.push_back('\0');
            } else if (cp.value != '\n' && cp.value != 0x2028 && cp.value != 0x2029) {
              cooked.append(src_.substr(pos_, cp.length));
            }
            pos_ += cp.length;
          }
      }
      continue;
    }
    if (c == '\r') {
      // Normalized to \n in the cooked value.
      cooked.push_back('\n');
      ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '\n') ++pos_;
      continue;
    }
    cooked.push_back(c);
    ++pos_;
  }
  tok.end = pos_;
  tok.value = std::move(cooked);
  return tok;
}

Token Lexer::rescan_template(std::size_t start) {
  // start is the offset of the closing '}' of a substitution.
  return scan_template_chunk(start, start + 1);
}

Token Lexer::rescan_regex(std::size_t start) {
  Token tok;
  tok.kind = TokenKind::regex;
  tok.start = start;
  pos_ = start + 1;
  bool in_class = false;
  std::string pattern;
  for (;;) {
    if (pos_ >= src_.size()) fail("Unterminated regular expression", start);
    const CodePoint cp = decode_at(src_, pos_);
    if (is_line_terminator_cp(cp.value)) fail("Unterminated regular expression", start);
    const char c = src_[pos_];
    if (c == '\\') {
      pattern.push_back(c);
      ++pos_;
      if (pos_ >= src_.size()) fail("Unterminated regular expression", start);
      const CodePoint esc = decode_at(src_, pos_);
      if (is_line_terminator_cp(esc.value)) fail("Unterminated regular expression", start);
      pattern.append(src_.substr(pos_, esc.length));
      pos_ += esc.length;
      continue;
    }
    if (c == '[') in_class = true;
    if (c == ']') in_class = false;
    if (c == '/' && !in_class) {
      ++pos_;
      break;
    }
    pattern.append(src_.substr(pos_, cp.length));
    pos_ += cp.length;
  }
  const std::size_t flags_start = pos_;
  while (at_identifier_part(pos_)) pos_ += decode_at(src_, pos_).length;
  tok.regex_flags = std::string(src_.substr(flags_start, pos_ - flags_start));
  tok.value = std::move(pattern);
  tok.end = pos_;
  return tok;
}

Token Lexer::next() {
  const bool newline = skip_space();
  Token tok;
  tok.newline_before = newline;
  tok.start = pos_;
  if (pos_ >= src_.size()) {
    tok.kind = TokenKind::eof;
    tok.end = pos_;
    return tok;
  }
  const auto c = static_cast<unsigned char>(src_[pos_]);
  if (at_identifier_start(pos_)) {
    scan_identifier_into(tok);
  } else if (is_ascii_digit(c) ||
             (c == '.' && pos_ + 1 < src_.size() &&
              is_ascii_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
    scan_number_into(tok);
  } else if (c == '"' || c == '\'') {
    scan_string_into(tok, static_cast<char>(c));
  } else if (c == '`') {
    Token chunk = scan_template_chunk(pos_, pos_ + 1);
    chunk.newline_before = newline;
    return chunk;
  } else if (c == '#') {
    ++pos_;
    if (!at_identifier_start(pos_)) fail("Unexpected character '#'", tok.start);
    scan_identifier_into(tok);
    tok.kind = TokenKind::private_name;
  } else if (c == '.' && src_.substr(pos_, 3) == "...") {
    tok.kind = TokenKind::punct;
    tok.value = "...";
    pos_ += 3;
  } else if (c == '.') {
    tok.kind = TokenKind::punct;
    tok.value = ".";
    ++pos_;
  } else {
    tok.kind = TokenKind::punct;
    bool matched = false;
    for (std::string_view p : kPunctuators) {
      if (src_.substr(pos_, p.size()) == p) {
        // "?." followed by a digit is a conditional, not optional chaining.
        if (p == "?." && pos_ + 2 < src_.size() &&
            is_ascii_digit(static_cast<unsigned char>(src_[pos_ + 2]))) {
          continue;
        }
        tok.value = std::string(p);
        pos_ += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (src_[pos_] == ':' || src_[pos_] == '=' || src_[pos_] == '@') {
        tok.value = std::string(1, src_[pos_]);
        ++pos_;
      } else {
        fail("Unexpected character", pos_);
      }
    }
  }
  tok.end = pos_;
  return tok;
}

}  // namespace detail

std::uint32_t count_physical_lines(std::string_view text) {
  return detail::Lexer(text).line_count();
}

}  // namespace jscity
