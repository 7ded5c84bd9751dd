#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qbreak/errors.hpp"
#include "qbreak/io.hpp"

using namespace qbreak;

namespace {

std::vector<EhrenfestPoint> sample_points() {
  EhrenfestPoint a;
  a.hbar = 1e-2;
  a.nu_e = 0.098957812345678901;
  a.eps_lo = -0.0053314637;
  a.eps_hi = 0.00088623536;
  EhrenfestPoint b = a;
  b.hbar = 1e-3;
  b.nu_e = 1.0 / 3.0;
  b.method = EhrenfestMethod::RegWkb;
  return {a, b};
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CSV layout") {
    std::ostringstream os;
    io::write_csv(os, io::ehrenfest_table(sample_points()));
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "# schema=v1");
    std::getline(is, line);
    CHECK(line == "hbar,nu_E,nu_E_inv,method,eps_lo,eps_hi");
    std::getline(is, line);
    CHECK(line.find(",numeric,") != std::string::npos);
  }

  TEST_CASE("CSV and JSON round trips are exact") {
    const auto pts = sample_points();
    for (auto fmt : {io::Format::Csv, io::Format::Json}) {
      std::stringstream ss;
      io::write_table(ss, io::ehrenfest_table(pts), fmt);
      const auto back = io::ehrenfest_points(fmt == io::Format::Csv ? io::read_csv(ss) : io::read_json(ss));
      REQUIRE(back.size() == pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].hbar == pts[i].hbar);
        CHECK(back[i].nu_e == pts[i].nu_e);
        CHECK(back[i].eps_lo == pts[i].eps_lo);
        CHECK(back[i].eps_hi == pts[i].eps_hi);
        CHECK(back[i].method == pts[i].method);
      }
    }
  }

  TEST_CASE("JSON mirrors the CSV columns") {
    std::ostringstream os;
    io::write_json(os, io::ehrenfest_table(sample_points()));
    const std::string text = os.str();
    CHECK(text.find("\"schema\": \"v1\"") != std::string::npos);
    CHECK(text.find("\"nu_E_inv\"") != std::string::npos);
  }

  TEST_CASE("output is deterministic") {
    std::ostringstream a, b;
    io::write_csv(a, io::ehrenfest_table(sample_points()));
    io::write_csv(b, io::ehrenfest_table(sample_points()));
    CHECK(a.str() == b.str());
  }

  TEST_CASE("files: format detected from content") {
    const auto dir = std::filesystem::temp_directory_path();
    for (auto fmt : {io::Format::Csv, io::Format::Json}) {
      const auto path = (dir / (fmt == io::Format::Csv ? "qbreak_io_test.csv" : "qbreak_io_test.json")).string();
      io::write_table(path, io::ehrenfest_table(sample_points()), fmt);
      CHECK(io::ehrenfest_points(io::read_table(path)).size() == 2);
      std::remove(path.c_str());
    }
    CHECK_THROWS_AS(io::read_table((dir / "qbreak_missing_file.csv").string()), ConfigError);
  }

  TEST_CASE("malformed input") {
    std::istringstream bad_json("{\"columns\": [");
    CHECK_THROWS_AS(io::read_json(bad_json), ConfigError);
    std::istringstream ragged("# schema=v1\na,b\n1\n");
    CHECK_THROWS_AS(io::read_csv(ragged), ConfigError);
    std::istringstream no_nu("# schema=v1\nhbar,x\n0.1,2\n");
    CHECK_THROWS_AS(io::ehrenfest_points(io::read_csv(no_nu)), ConfigError);
    CHECK_THROWS_AS(io::parse_format("xml"), ConfigError);
  }
}
