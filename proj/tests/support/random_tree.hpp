#pragma once

#include <random>

#include "jscity/code_model.hpp"

namespace jscity::test {

struct RandomTreeOptions {
  int max_functions = 50;
  int max_files = 6;
  double one_line_rate = 0.15;  // chance that a function and its subtree sit on one line
  double skipped_rate = 0.1;    // chance that a file is marked as unparsable
};

/// Random but well-formed CodeTree: spans nest properly, ids follow
/// pre-order, and one-line subtrees exercise the loc_own clamp.
CodeTree random_code_tree(std::mt19937_64& rng, const RandomTreeOptions& options = {});

}  // namespace jscity::test
