#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "replicaflow/sweep_engine.hpp"

using namespace rflow;

namespace {

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_csv(rows, os);
  return os.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

bool has_flag(const SweepRow& r, std::string_view t) {
  return std::find(r.warn_flags.begin(), r.warn_flags.end(), t) != r.warn_flags.end();
}

}  // namespace

TEST_SUITE("sweep_engine") {

TEST_CASE("grid order puts the replica list innermost") {
  const auto spec = parse_sweep("Omega = 1,2,3\nM = 2,3");
  const auto grid = enumerate_grid(spec);
  REQUIRE(grid.size() == 6);
  const double omegas[] = {1, 1, 2, 2, 3, 3};
  const int ms[] = {2, 3, 2, 3, 2, 3};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(grid[i].first.omega == omegas[i]);
    CHECK(grid[i].second == ms[i]);
  }
}

TEST_CASE("outer axes vary slowest") {
  const auto spec = parse_sweep("theta_e = 1,2\nOmega = 5,6,7");
  ModelParams base;
  base.gamma_b = 0.25;
  const auto grid = enumerate_grid(spec, base);
  REQUIRE(grid.size() == 6);
  CHECK(grid[0].first.theta_e == 1);
  CHECK(grid[2].first.omega == 7);
  CHECK(grid[3].first.theta_e == 2);
  CHECK(grid[3].first.omega == 5);
  for (const auto& g : grid) CHECK(g.first.gamma_b == 0.25);
}

TEST_CASE("decoupled probe rows have zero flow") {
  const auto rows = run_sweep(parse_sweep("gamma_b = 0\nOmega = 0.5,2\nM = 1,2,3"));
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(std::abs(r.flow) < 1e-10);
    CHECK_FALSE(r.failed());
  }
}

TEST_CASE("weak regime rows agree with the weak-coupling flow") {
  const auto rows = run_sweep(parse_sweep("gamma_b = 0.05\ntheta_b = 20\nOmega = 0.005:0.5:4 log\ntheta_e = 1:5:3\n"));
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    CHECK(std::abs(r.flow - r.weak_flow) <= 0.15 * std::abs(r.weak_flow));
  }
}

TEST_CASE("row count and token registry") {
  const auto spec = parse_sweep("Omega = 0,1\ntheta_e = 1,3\nM = 1,2");
  const auto rows = run_sweep(spec);
  CHECK(rows.size() == spec.cardinality());
  const auto& reg = warn_token_registry();
  for (const auto& r : rows) {
    for (const auto& t : r.warn_flags) {
      CHECK(std::find(reg.begin(), reg.end(), t) != reg.end());
      CHECK(t.find(',') == std::string::npos);
    }
  }
}

TEST_CASE("single replica rows have no weak Renyi flow") {
  const auto row = compute_row(ModelParams{}, 1, true, false);
  CHECK(has_flag(row, warn::kWeakRenyiUndefined));
  CHECK(row.weak_flow == 0);
  CHECK(std::isfinite(row.weak_vN));
  CHECK_FALSE(row.failed());
}

TEST_CASE("weak columns can be skipped") {
  const auto row = compute_row(ModelParams{}, 2, false, false);
  CHECK(has_flag(row, warn::kWeakSkipped));
  CHECK(row.weak_flow == 0);
  CHECK(row.weak_vN == 0);
}

TEST_CASE("failures are per row") {
  const auto row = compute_row(ModelParams{}, 8, true, false);
  CHECK(row.failed());
  CHECK(has_flag(row, warn::kAssemblyFailed));
  CHECK(std::isnan(row.flow));
  CHECK(std::isnan(row.lambda0_re));
  CHECK(std::isfinite(row.weak_flow));

  const auto csv = to_csv({row});
  CHECK(csv.find(",nan,nan,nan,") != std::string::npos);
  CHECK(csv.find("assembly_failed") != std::string::npos);
}

TEST_CASE("csv shape") {
  CHECK(to_csv({}) == std::string(kSweepCsvHeader) + "\n");
  const auto rows = run_sweep(parse_sweep("Omega = 1"));
  const auto csv = to_csv(rows);
  CHECK(count_lines(csv) == 2);
  const auto second = csv.substr(csv.find('\n') + 1);
  CHECK(std::count(second.begin(), second.end(), ',') == 11);
  CHECK(second.rfind("2,1,1,1,20,0,", 0) == 0);
}

TEST_CASE("output is deterministic and independent of the worker count") {
  const auto spec = parse_sweep("Omega = 0.5,1,2\ntheta_e = 1,4\nM = 2,3");
  const auto one = to_csv(run_sweep(spec, {1, {}}));
  const auto again = to_csv(run_sweep(spec, {1, {}}));
  const auto four = to_csv(run_sweep(spec, {4, {}}));
  CHECK(one == again);
  CHECK(one == four);
}

TEST_CASE("csv round trip") {
  auto rows = run_sweep(parse_sweep("Omega = 0.3,3\nM = 1,2"));
  rows.push_back(compute_row(ModelParams{}, 8, true, false));
  std::istringstream in(to_csv(rows));
  const auto back = read_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].replicas == rows[i].replicas);
    CHECK(back[i].params.omega == rows[i].params.omega);
    CHECK(back[i].warn_flags == rows[i].warn_flags);
    if (std::isnan(rows[i].flow)) {
      CHECK(std::isnan(back[i].flow));
    } else {
      CHECK(back[i].flow == rows[i].flow);
      CHECK(back[i].lambda0_im == rows[i].lambda0_im);
    }
  }
  CHECK(to_csv(back) == to_csv(rows));
}

TEST_CASE("read_csv rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), std::runtime_error);
  std::istringstream header("M,Omega\n");
  CHECK_THROWS_AS(read_csv(header), std::runtime_error);
  std::istringstream short_row(std::string(kSweepCsvHeader) + "\n2,1,1\n");
  CHECK_THROWS_WITH(read_csv(short_row), doctest::Contains("line 2"));
  std::istringstream bad_number(std::string(kSweepCsvHeader) + "\n2,x,1,1,20,0,0,0,0,0,0,\n");
  CHECK_THROWS_WITH(read_csv(bad_number), doctest::Contains("line 2"));
}

TEST_CASE("number formatting") {
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(20) == "20");
  for (double v : {1.0 / 3, -2.5e-300, 6.02e23, 0.0}) CHECK(parse_number(format_double(v)) == v);
}

TEST_CASE("spectrum csv formats") {
  std::ostringstream one;
  write_spectrum_csv({{-1, 0}, {-0.5, 0.25}}, one);
  CHECK(one.str() == "re,im\n-1,0\n-0.5,0.25\n");

  const auto rows = run_sweep(parse_sweep("Omega = 1,2\nM = 1\ndump_spectra = true\ninclude_weak = false"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].spectrum.size() == 4);
  std::ostringstream all;
  write_spectra_csv(rows, all);
  CHECK(all.str().rfind("row,re,im\n0,", 0) == 0);
  CHECK(count_lines(all.str()) == 9);
}

TEST_CASE("emit_csv reports the path on failure") {
  CHECK_THROWS_WITH(emit_csv({}, "/nonexistent-dir/rows.csv"), doctest::Contains("/nonexistent-dir/rows.csv"));
  const auto path = std::filesystem::temp_directory_path() / "replicaflow_emit_test.csv";
  emit_csv({}, path.string());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == kSweepCsvHeader);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
