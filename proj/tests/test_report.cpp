#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsgl/report.hpp"

using namespace fsgl;

TEST_CASE("numbers print exactly") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::strtod(format_number(1.0 / 3).c_str(), nullptr) == 1.0 / 3);
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(NAN) == "nan");
  CHECK(json_number(INFINITY) == "inf");
  CHECK(json_numbers({1.0, NAN}).dump() == "[1.0,\"nan\"]");
}

TEST_CASE("CSV tables") {
  CsvTable t({"a", "b,c", "d"});
  t.row({1.5, 2LL, std::string("x\"y")});
  CHECK(t.rows() == 1);
  CHECK(t.str() == "# fsgl-csv v1\na,\"b,c\",d\n1.5,2,\"x\"\"y\"\n");
  CHECK_THROWS(t.row({1.0}));
}

TEST_CASE("atomic file writes") {
  const auto dir = std::filesystem::temp_directory_path() / "fsgl_report_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "sub" / "out.txt";
  write_file_atomic(path, "hello\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "hello\n");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}
