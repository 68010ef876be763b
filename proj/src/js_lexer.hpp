#pragma once

// Tokenizer for the ECMAScript parser. Internal to the library.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jscity/js_parser.hpp"

namespace jscity::detail {

enum class TokenKind {
  eof,
  name,          // identifier or keyword
  private_name,  // #name (value excludes '#')
  punct,
  number,
  string,
  template_chunk,
  regex,
};

struct Token {
  TokenKind kind = TokenKind::eof;
  // Identifier name, punctuator text, cooked string value, or regex pattern.
  std::string value;
  std::size_t start = 0;
  std::size_t end = 0;
  bool newline_before = false;
  // Identifier spelled with \u escapes; never treated as a keyword.
  bool escaped = false;
  double number = 0.0;
  // Template chunks: raw text bounds, cooked validity, and whether the chunk
  // closes the literal.
  std::size_t raw_start = 0;
  std::size_t raw_end = 0;
  bool cooked_valid = true;
  bool template_tail = false;
  std::string regex_flags;
};

class Lexer {
 public:
  explicit Lexer(std::string_view source);

  Token next();
  /// Re-reads the token at `start` (a '/' or '/=') as a regular expression.
  Token rescan_regex(std::size_t start);
  /// Re-reads from the '}' at `start` as a template continuation chunk.
  Token rescan_template(std::size_t start);

  std::size_t offset() const noexcept { return pos_; }
  void reset(std::size_t offset) noexcept { pos_ = offset; }

  Position position(std::size_t offset) const;
  std::string_view source() const noexcept { return src_; }
  std::uint32_t line_count() const noexcept;

  [[noreturn]] void fail(const std::string& message, std::size_t offset) const;

 private:
  bool skip_space();
  Token scan_template_chunk(std::size_t token_start, std::size_t body_start);
  void scan_identifier_into(Token& tok);
  void scan_number_into(Token& tok);
  void scan_string_into(Token& tok, char quote);
  bool at_identifier_start(std::size_t p) const;
  bool at_identifier_part(std::size_t p) const;
  std::uint32_t read_escape_code_point(std::size_t& p, bool in_template, bool& valid);

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  std::vector<bool> ascii_line_;
};

void append_utf8(std::string& out, std::uint32_t cp);

}  // namespace jscity::detail
