#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace bgap::cli {

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_structured()) return csv_escape(v.dump());
  return v.dump();
}

}  // namespace

std::string render(const Report& report, Format format) {
  if (format == Format::json) {
    Json doc = Json::object();
    doc["command"] = report.command;
    for (const auto& [key, value] : report.meta.items()) doc[key] = value;
    doc["rows"] = Json::array();
    for (const auto& row : report.rows) doc["rows"].push_back(row);
    return doc.dump(2) + "\n";
  }
  std::vector<std::string> columns;
  for (const auto& row : report.rows) {
    for (const auto& [key, value] : row.items()) {
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      if (row.contains(columns[i])) out << cell(row[columns[i]]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bgap::cli
