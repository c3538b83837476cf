#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "neasslab/report.hpp"

using namespace neasslab;

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, -1.0, 1.0 / 3.0, 0.1, 2.5e-300, -7.25e300,
                   3.141592653589793, 1e-17, 123456789.123456789}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(42.0) == "42");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("fnv1a test vectors") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("ab") != fnv1a("ba"));
}

TEST_CASE("hex64 fixed-width encoding") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(1) == "0000000000000001");
  CHECK(hex64(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
  CHECK(hex64(~0ull) == "ffffffffffffffff");
}

TEST_CASE("csv writer layout") {
  CsvWriter csv({"a", "b"});
  csv.add_row({"1", "2"});
  csv.add_row({"x", "0.5"});
  std::string body = csv.str("cafe0123");
  std::string expected = std::string("# neasslab ") + kVersion +
                         " scenario=cafe0123\na,b\n1,2\nx,0.5\n";
  CHECK(body == expected);

  CHECK_THROWS_AS(csv.add_row({"only-one"}), std::invalid_argument);
  CHECK_THROWS_AS(CsvWriter(std::vector<std::string>{}), std::invalid_argument);
}

TEST_CASE("csv writer writes LF bytes to disk") {
  CsvWriter csv({"k", "v"});
  csv.add_row({"gap", format_double(1.25)});
  const char* path = "test_report_tmp.csv";
  csv.write(path, "00ff");

  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  in.close();
  std::remove(path);
  CHECK(ss.str() == csv.str("00ff"));
  CHECK(ss.str().find('\r') == std::string::npos);
}

TEST_CASE("run report serialization") {
  RunReport rep;
  rep.experiment = "lr-cone";
  rep.scenario_hash = "deadbeef";
  rep.pass = true;
  rep.exit_code = 0;
  rep.wall_seconds = 1.5;
  rep.leakage = 2e-7;
  rep.metrics.emplace_back("fitted_velocity", 2.25);

  std::string j = rep.to_json();
  CHECK(j.find("\"experiment\": \"lr-cone\"") != std::string::npos);
  CHECK(j.find("\"scenario\": \"deadbeef\"") != std::string::npos);
  CHECK(j.find("\"pass\": true") != std::string::npos);
  CHECK(j.find("\"fitted_velocity\": 2.25") != std::string::npos);
  CHECK(j.find("\"version\"") != std::string::npos);
  CHECK(j.back() == '\n');
}
