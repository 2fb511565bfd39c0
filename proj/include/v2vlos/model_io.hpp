#pragma once

#include "v2vlos/scenario_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace v2vlos {

/// Serializes to the JSON parameter-file format. Output is deterministic so
/// the shipped builtin files stay byte-stable.
std::string to_parameter_text(const ScenarioModel& model);

/// Strict parse: unknown keys, missing keys and invalid curves raise ParseError.
ScenarioModel parse_parameter_text(std::string_view text);

ScenarioModel load_parameter_file(const std::filesystem::path& path);
void save_parameter_file(const ScenarioModel& model, const std::filesystem::path& path);

/// "urban_medium.json" etc.
std::string builtin_file_name(Environment env, Density density);

} // namespace v2vlos
