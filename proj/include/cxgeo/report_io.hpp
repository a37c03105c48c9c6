#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cxgeo::io {

/// A cell of a CSV table.
using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal form with '.' as separator, independent of
/// the locale. Non-finite values print as nan, inf and -inf.
std::string format_double(double x);

std::string to_csv(const Table& table);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace cxgeo::io
