#include "penning/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace penning {

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string report_csv(const Report& report) {
  std::string out = "quantity, value, unit\n";
  for (const auto& q : report) out += q.name + ", " + format_number(q.value) + ", " + q.unit + "\n";
  return out;
}

nlohmann::ordered_json report_json(const Report& report) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& q : report) j[q.name] = {{"value", q.value}, {"unit", q.unit}};
  return j;
}

std::string table_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? ", " : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("table row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? ", " : "") + format_number(row[c]);
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json table_json(const Table& table) {
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  j["rows"] = table.rows;
  return j;
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["config"] = m.config;
  j["overrides"] = m.overrides.is_null() ? nlohmann::ordered_json::object() : m.overrides;
  j["outputs"] = m.outputs;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace penning
