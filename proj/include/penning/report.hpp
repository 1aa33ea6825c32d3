#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace penning {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

struct Quantity {
  std::string name;
  double value = 0.0;
  std::string unit;
};

using Report = std::vector<Quantity>;

/// "quantity, value, unit" rows.
std::string report_csv(const Report& report);
nlohmann::ordered_json report_json(const Report& report);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Header row joined with ", ", then one line per row.
std::string table_csv(const Table& table);
nlohmann::ordered_json table_json(const Table& table);

struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  nlohmann::ordered_json overrides;  // flags given on the command line
  std::string version;
  std::vector<std::string> outputs;  // file names relative to the output directory
};

nlohmann::ordered_json to_json(const RunManifest& manifest);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace penning
