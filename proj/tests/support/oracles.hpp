#pragma once

// Independent reference computations used to check the library. They work
// from raw inputs (acorn JSON, FunctionNode spans) rather than through the
// library's own metrics or validation code.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jscity/code_model.hpp"
#include "jscity/scene.hpp"

namespace jscity::test {

struct DeclaratorCount {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t own = 0;  // bound names whose nearest enclosing function is this one
  std::uint32_t all = 0;  // bound names anywhere inside the function
};

struct DeclaratorCensus {
  std::vector<DeclaratorCount> functions;  // in document order
  std::uint32_t top_level = 0;             // bound names outside every function
  std::uint32_t total = 0;
};

/// Walks an ESTree JSON document directly.
DeclaratorCensus count_declarators(const nlohmann::json& program);

struct GeometryReport {
  std::vector<std::string> problems;
  std::size_t overlap_pairs_checked = 0;
  std::size_t chains_checked = 0;          // root-to-leaf chains compared against summed heights
  std::size_t exact_identities_checked = 0;  // unclamped chain-shaped stacks vs height_scale * loc_total
};

/// Brute-force geometry audit of a scene against the tree it came from:
/// pairwise sibling overlap and gutter, containment, parent-side >= child
/// side, and stack heights recomputed from raw line spans (tolerance 1e-9).
GeometryReport audit_geometry(const CityScene& scene, const CodeTree& tree);

}  // namespace jscity::test
