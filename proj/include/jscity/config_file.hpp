#pragma once

#include <filesystem>
#include <stdexcept>
#include <string_view>

#include "jscity/code_model.hpp"
#include "jscity/layout.hpp"

namespace jscity {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies a `jscity.toml` document to the given configs. Supported: one
/// `key = value` per line, `#` comments, optional [scan] / [layout] headers,
/// quoted strings, string arrays on one line, integers, floats, booleans.
/// Unknown keys are errors.
void apply_config_text(std::string_view text, ScanConfig& scan, LayoutConfig& layout);

/// Reads `<root>/jscity.toml` when present. Returns whether a file was read.
bool apply_config_file(const std::filesystem::path& root, ScanConfig& scan, LayoutConfig& layout);

}  // namespace jscity
