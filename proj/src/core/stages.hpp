#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace semdiff::stages {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one pipeline stage. Options may carry "config" (path to a TOML run
/// config whose [stage] table supplies defaults); explicit options win.
/// Stages read and write only files, so any stage can be rerun in
/// isolation. Throws Error with a message naming the missing prerequisite
/// stage when an upstream artifact is absent.
void run_stage(const std::string& stage, const nlohmann::json& options);

bool is_known_stage(const std::string& stage);

}  // namespace semdiff::stages
