#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fsgl {

/// Shortest-exact decimal form (%.17g); "inf", "-inf" and "nan" otherwise.
std::string format_number(double v);

/// Numbers as JSON, with non-finite values as the strings of format_number.
nlohmann::json json_number(double v);
nlohmann::json json_numbers(const std::vector<double>& v);

/// A CSV table with a versioned comment line ahead of the header row.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> columns);
  CsvTable& row(std::vector<Cell> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

  static constexpr const char* kVersionLine = "# fsgl-csv v1";

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fsgl
