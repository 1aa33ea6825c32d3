#include "penning/config_io.hpp"

#include <fstream>

#include "penning/errors.hpp"

namespace penning {
namespace {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& field) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw ConfigError(std::string("config field '") + key + "' must be an integer");
  } else {
    if (!it->is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
  }
  field = it->get<T>();
}

constexpr const char* kKeys[] = {"b_field",           "omega_z",  "beta2",            "wall_epsilon", "omega_wall",
                                 "axial_temperature", "z0_drive", "delta_over_omega", "fock_cutoff"};

}  // namespace

TrapConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown config field '" + key + "'");
  }
  TrapConfig c = representative_config();
  read_field(j, "b_field", c.b_field);
  read_field(j, "omega_z", c.omega_z);
  read_field(j, "beta2", c.beta2);
  read_field(j, "wall_epsilon", c.wall_epsilon);
  read_field(j, "omega_wall", c.omega_wall);
  read_field(j, "axial_temperature", c.axial_temperature);
  read_field(j, "z0_drive", c.z0_drive);
  read_field(j, "delta_over_omega", c.delta_over_omega);
  read_field(j, "fock_cutoff", c.fock_cutoff);
  return c;
}

nlohmann::ordered_json config_to_json(const TrapConfig& c) {
  nlohmann::ordered_json j;
  j["b_field"] = c.b_field;
  j["omega_z"] = c.omega_z;
  j["beta2"] = c.beta2;
  j["wall_epsilon"] = c.wall_epsilon;
  j["omega_wall"] = c.omega_wall;
  j["axial_temperature"] = c.axial_temperature;
  j["z0_drive"] = c.z0_drive;
  j["delta_over_omega"] = c.delta_over_omega;
  j["fock_cutoff"] = c.fock_cutoff;
  return j;
}

TrapConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const TrapConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << config_to_json(config).dump(2) << "\n";
}

}  // namespace penning
