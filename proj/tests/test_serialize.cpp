#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "depbounds/bounds.hpp"
#include "depbounds/reproduce.hpp"
#include "depbounds/serialize.hpp"

using namespace depbounds;

TEST_SUITE_BEGIN("serialize");

TEST_CASE("doubles are written with full precision") {
  const double v = 0.54107508004674343;
  CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(v).find(',') == std::string::npos);
}

TEST_CASE("estimate records") {
  Estimate e;
  e.value = 1.0 / 3;
  e.se = 0.001;
  e.method = Method::MonteCarlo;
  e.effort = 1000;
  const std::string csv = estimate_csv(e, 1.0, 2);
  CHECK(csv.find("value,se,method,effort,beta,d") == 0);
  CHECK(csv.find("monte-carlo") != std::string::npos);
  const auto j = nlohmann::json::parse(estimate_json(e, 1.0, 2));
  CHECK(j["value"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(j["effort"].get<long long>() == 1000);
  CHECK(j["d"].get<int>() == 2);
}

TEST_CASE("bounds report serialization mirrors csv and json") {
  const std::vector<MarginalDist> ms(2, MarginalDist::uniform(0, 1));
  const BoundsReport rep = bounds_report(ms, ms, 1.0);
  const std::string csv = bounds_report_csv(rep);
  CHECK(csv.find("lower,comonotone-lower") != std::string::npos);
  CHECK(csv.find("upper,same-copula-upper") != std::string::npos);
  const auto j = nlohmann::json::parse(bounds_report_json(rep));
  CHECK(j["lower"].size() == 1);
  CHECK(j["upper"].size() == 2);
  CHECK(j["upper"][1]["sharp"].get<bool>());
}

TEST_CASE("atomic writes do not leave partial files") {
  const std::string path = "/tmp/depbounds_test_out.csv";
  std::filesystem::remove(path);
  write_file_atomic(path, "a,b\n1,2\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "a,b\n1,2\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("reproduction rows serialize to csv and json") {
  std::vector<CheckRow> rows(1);
  rows[0].criterion = 3;
  rows[0].name = "example";
  rows[0].got = 0.5;
  rows[0].lo = 0.0;
  rows[0].hi = 1.0;
  rows[0].pass = true;
  const std::string csv = reproduction_csv(rows);
  CHECK(csv.find("3,\"example\",0.5,0,1,pass") != std::string::npos);
  const auto j = nlohmann::json::parse(reproduction_json(rows));
  CHECK(j[0]["pass"].get<bool>());
  CHECK(all_pass(rows));
  rows[0].pass = false;
  CHECK_FALSE(all_pass(rows));
}

TEST_SUITE_END();
