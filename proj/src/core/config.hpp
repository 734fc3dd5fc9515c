#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace semdiff::config {

// Minimal TOML reader covering what run configs need: [table] and
// [a.b] headers, bare/dotted keys, strings, integers, floats, booleans
// and flat arrays. Errors carry the offending line number.
nlohmann::json parse_toml(std::string_view text);
nlohmann::json load_toml_file(const std::string& path);

// `overrides` wins key-by-key over `base` (deep merge on objects).
nlohmann::json merge(nlohmann::json base, const nlohmann::json& overrides);

}  // namespace semdiff::config
