#pragma once

#include <string>

#include <json.hpp>

#include "dynspec/config.hpp"
#include "dynspec/experiments.hpp"

namespace dynspec {

using json = nlohmann::json;

inline constexpr int format_version = 1;

json config_to_json(const Config& cfg);
Config config_from_json(const json& j);

json matrix_to_json(const rmat& M);
rmat matrix_from_json(const json& j);

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);  // throws ValidationError when malformed

json trial_result_to_json(const TrialResult& r);

std::string read_text_file(const std::string& path);               // throws IoError
void write_text_file(const std::string& path, const std::string& text);  // throws IoError

}  // namespace dynspec
