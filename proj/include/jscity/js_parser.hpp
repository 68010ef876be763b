#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "jscity/syntax.hpp"

namespace jscity {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, Position where);

  Position where() const noexcept { return where_; }

 private:
  Position where_;
};

/// Parses ECMAScript (ES2022 module goal, with sloppy-mode tolerance) into
/// an ESTree-shaped tree whose nodes all carry `loc` spans.
/// Throws ParseError on malformed input.
SyntaxTree parse_javascript(std::string_view source);

/// Number of physical lines. Recognizes \n, \r\n, \r, U+2028 and U+2029;
/// a trailing terminator does not start a new line.
std::uint32_t count_physical_lines(std::string_view text);

}  // namespace jscity
