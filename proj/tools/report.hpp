#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bgap::cli {

using Json = nlohmann::ordered_json;

enum class Format { json, csv };

/// A double rounded to 12 significant digits so that serialized output is
/// byte-stable; null for NaN and infinities.
Json num(double x);

/// Output of one subcommand: metadata plus a table of rows. Every numeric
/// row carries `method`, `bound_kind` and `tolerance`.
struct Report {
  std::string command;
  Json meta = Json::object();
  std::vector<Json> rows;
};

/// JSON: {"command", meta..., "rows": [...]}. CSV: header from the union of
/// row keys in first-seen order, then one line per row.
std::string render(const Report& report, Format format);

std::string csv_escape(std::string_view field);

}  // namespace bgap::cli
