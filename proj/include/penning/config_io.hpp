#pragma once

#include "json.hpp"

#include <string>

#include "penning/trap_model.hpp"

namespace penning {

/// JSON keys are the TrapConfig field names. Missing keys keep the
/// representative value; unknown keys and wrong types raise ConfigError.
TrapConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const TrapConfig& config);

TrapConfig load_config(const std::string& path);
void save_config(const TrapConfig& config, const std::string& path);

}  // namespace penning
