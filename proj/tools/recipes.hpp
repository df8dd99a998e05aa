#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace bowtie::cli {

std::vector<std::string> recipe_ids();

/// Runs a named recipe. The result holds "claims" (each with measured
/// values and "pass") and "mismatches"; OutOfRange for an unknown id.
nlohmann::json run_recipe(const std::string& id);

}  // namespace bowtie::cli
