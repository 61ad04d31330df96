#pragma once

#include <string>
#include <vector>

#include "ifpopt/config.hpp"

namespace ifpopt {

/// Bundled experiments, reproducible by name. "example1" and "example2" are
/// aliases of the canonical case-1 / sigma-0.005 configurations.
std::vector<std::string> builtin_names();

/// Throws ValidationError for unknown names.
ExperimentConfig builtin_config(const std::string& name);

std::string builtin_description(const std::string& name);

}  // namespace ifpopt
