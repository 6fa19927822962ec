#include "fsgl/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fsgl/error.hpp"

namespace fsgl {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

nlohmann::json json_numbers(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

CsvTable& CsvTable::row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) throw Error("CSV row width differs from the header");
  rows_.push_back(std::move(cells));
  return *this;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  os << kVersionLine << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << quote(columns_[i]);
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ",";
      if (const auto* d = std::get_if<double>(&r[i])) os << format_number(*d);
      else if (const auto* n = std::get_if<long long>(&r[i])) os << *n;
      else os << quote(std::get<std::string>(r[i]));
    }
    os << "\n";
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

}  // namespace fsgl
