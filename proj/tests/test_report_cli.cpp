#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polygaf/cli.hpp"
#include "polygaf/common.hpp"
#include "polygaf/config.hpp"
#include "polygaf/geometry.hpp"
#include "polygaf/report.hpp"
#include "polygaf/sampler.hpp"

using namespace polygaf;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "polygaf_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("format_double: shortest round-trip representation") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-0.5) == "-0.5");
  for (double v : {1.0 / 3.0, 0.30000000000000004, 1e300, -2.2250738585072014e-308, 12345.6789}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv_escape quotes exactly the fields that need it") {
  CHECK(csv_escape("plain_text-42") == "plain_text-42");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_escape("") == "");
}

TEST_CASE("csv document: metadata lines, header, and width enforcement") {
  Config cfg;
  cfg.set("seed", "7");
  cfg.set("out", "artifacts");
  CsvDocument doc(cfg);
  doc.header(std::vector<std::string>{"a", "b"});
  doc.row(std::vector<std::string>{"1", "x,y"});

  std::istringstream lines(doc.content());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == std::string("# version: ") + kVersionString);
  REQUIRE(std::getline(lines, line));
  CHECK(line == "# config: {\"out\":\"artifacts\",\"seed\":\"7\"}");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "a,b");
  REQUIRE(std::getline(lines, line));
  CHECK(line == "1,\"x,y\"");
  CHECK_FALSE(std::getline(lines, line));

  CHECK_THROWS_AS(doc.row(std::vector<std::string>{"only_one"}), std::invalid_argument);
}

TEST_CASE("config: typed getters, fallbacks, and malformed values") {
  Config cfg;
  cfg.set("name", "run-1");
  cfg.set("ratio", "0.25");
  cfg.set("count", "12");
  cfg.set("big", "18446744073709551615");
  cfg.set("L", "5,8");
  cfg.set("bad", "abc");
  cfg.set("frac", "2.5");

  CHECK(cfg.has("name"));
  CHECK_FALSE(cfg.has("missing"));
  CHECK(cfg.get_string("name", "x") == "run-1");
  CHECK(cfg.get_string("missing", "x") == "x");
  CHECK(cfg.get_double("ratio", 0.0) == 0.25);
  CHECK(cfg.get_double("missing", 1.5) == 1.5);
  CHECK(cfg.get_int("count", 0) == 12);
  CHECK(cfg.get_int("missing", -3) == -3);
  CHECK(cfg.get_u64("big", 0) == 18446744073709551615ULL);
  const std::vector<double> list = cfg.get_double_list("L", {});
  REQUIRE(list.size() == 2);
  CHECK(list[0] == 5.0);
  CHECK(list[1] == 8.0);
  CHECK(cfg.get_double_list("missing", {1.0}) == std::vector<double>{1.0});

  CHECK_THROWS_AS(cfg.get_double("bad", 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get_int("frac", 0), std::invalid_argument);
  CHECK_THROWS_AS(cfg.get_u64("ratio", 0), std::invalid_argument);
}

TEST_CASE("config files: comments, whitespace, and malformed lines") {
  const fs::path dir = fresh_dir("config_files");
  const fs::path good = dir / "good.cfg";
  write_file(good.string(), "# run settings\n\n  trials = 250 \nseed=9\n");
  const Config cfg = Config::from_file(good.string());
  CHECK(cfg.get_u64("trials", 0) == 250);
  CHECK(cfg.get_u64("seed", 0) == 9);

  const fs::path bad = dir / "bad.cfg";
  write_file(bad.string(), "trials 250\n");
  CHECK_THROWS_AS(Config::from_file(bad.string()), std::invalid_argument);
  CHECK_THROWS_AS(Config::from_file((dir / "absent.cfg").string()), std::invalid_argument);
}

TEST_CASE("json helpers: alphabetical config echo and summary skeleton") {
  Config cfg;
  cfg.set("zeta", "1");
  cfg.set("alpha", "2");
  CHECK(config_json(cfg).dump() == "{\"alpha\":\"2\",\"zeta\":\"1\"}");

  const nlohmann::json summary = summary_json(cfg);
  CHECK(summary["version"] == kVersionString);
  CHECK(summary["config"]["alpha"] == "2");
  const std::string text = json_content(summary);
  CHECK(text.back() == '\n');
  CHECK(nlohmann::json::parse(text) == summary);
}

TEST_CASE("write_file: exact bytes out, clear error on a missing directory") {
  const fs::path dir = fresh_dir("write_file");
  const std::string payload = "bytes\r\nwith\nmixed endings\x01";
  const fs::path target = dir / "payload.bin";
  write_file(target.string(), payload);
  CHECK(slurp(target) == payload);
  CHECK_THROWS_AS(write_file((dir / "no_such_dir" / "x.csv").string(), "data"),
                  std::invalid_argument);
}

TEST_CASE("cli: version and usage errors") {
  CHECK(run_cli({"--version"}) == 0);
  CHECK(run_cli({"no-such-subcommand"}) == 2);
  CHECK(run_cli({}) == 2);
}

TEST_CASE("cli: kernel-check writes a passing identity table") {
  const fs::path dir = fresh_dir("kernel_check");
  CHECK(run_cli({"kernel-check", "--samples", "25", "--out", dir.string()}) == 0);
  const std::string csv = slurp(dir / "kernel_identities.csv");
  CHECK(csv.find(",pass\n") != std::string::npos);
  CHECK(csv.find(",fail\n") == std::string::npos);
  CHECK(csv.find("dilog_two_sided_bound") != std::string::npos);
}

TEST_CASE("cli: flags override config files, unknown keys are rejected") {
  const fs::path dir = fresh_dir("precedence");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg.string(), "samples = 60\nseed = 11\n");
  CHECK(run_cli({"kernel-check", "--config", cfg.string(), "--samples", "40", "--out",
                 dir.string()}) == 0);
  const std::string csv = slurp(dir / "kernel_identities.csv");
  CHECK(csv.find("\"samples\":\"40\"") != std::string::npos);
  CHECK(csv.find("\"seed\":\"11\"") != std::string::npos);

  const fs::path bad = dir / "bad.cfg";
  write_file(bad.string(), "no_such_key = 1\n");
  CHECK(run_cli({"kernel-check", "--config", bad.string(), "--out", dir.string()}) == 2);
}

TEST_CASE("cli: missing output directory is a configuration error") {
  const fs::path dir = fresh_dir("missing_out");
  CHECK(run_cli({"kernel-check", "--samples", "5", "--out",
                 (dir / "does_not_exist").string()}) == 2);
}

TEST_CASE("cli: sample artifacts round-trip against a direct draw") {
  const fs::path dir = fresh_dir("sample");
  CHECK(run_cli({"sample", "--L", "2", "--r", "0.5", "--tol", "1e-10", "--seed", "7", "--out",
                 dir.string()}) == 0);
  const nlohmann::json summary = nlohmann::json::parse(slurp(dir / "sample_summary.json"));
  CHECK(summary["version"] == kVersionString);
  CHECK(summary["config"]["seed"] == "7");
  REQUIRE(summary["degrees"].size() == 1);
  const int degree = summary["degrees"][0].get<int>();
  CHECK(summary["flat_size"].get<int>() == degree + 1);
  CHECK(summary["tail_variance_bound"].get<double>() <= 1e-10);

  const auto table =
      BasisCoefficientTable::certified(IntensityVector{2.0}, std::vector<double>{0.5}, 1e-10);
  const GafSample s = draw_sample(table, 7, 0);
  CHECK(summary["value_at_origin_re"].get<double>() == s.coeff[0].real());
  CHECK(summary["value_at_origin_im"].get<double>() == s.coeff[0].imag());

  const std::string csv = slurp(dir / "sample_coefficients.csv");
  CHECK(csv.find("alpha_1,log_coeff_sq,a_re,a_im,coeff_re,coeff_im") != std::string::npos);
  CHECK(csv.find("\n0," + format_double(table->logsq(0)) + ",") != std::string::npos);
}

TEST_CASE("cli: unreachable truncation tolerance exits with the numerical code") {
  CHECK(run_cli({"sample", "--n", "1", "--L", "2", "--r", "0.99", "--tol", "1e-300"}) == 3);
}

TEST_CASE("cli: artifacts are byte-identical across worker counts") {
  const fs::path dir1 = fresh_dir("workers_1");
  const fs::path dir2 = fresh_dir("workers_3");
  REQUIRE(setenv("POLYGAF_WORKERS", "1", 1) == 0);
  CHECK(run_cli({"intensity", "--trials", "300", "--seed", "5", "--out", dir1.string()}) == 0);
  REQUIRE(setenv("POLYGAF_WORKERS", "3", 1) == 0);
  CHECK(run_cli({"intensity", "--trials", "300", "--seed", "5", "--out", dir2.string()}) == 0);
  unsetenv("POLYGAF_WORKERS");
  // The echoed output directory necessarily differs between the two runs;
  // every numeric field must not.
  nlohmann::json report1 = nlohmann::json::parse(slurp(dir1 / "intensity_report.json"));
  nlohmann::json report2 = nlohmann::json::parse(slurp(dir2 / "intensity_report.json"));
  CHECK(report1["within_three_se"].get<bool>());
  report1["config"].erase("out");
  report2["config"].erase("out");
  CHECK(report1.dump() == report2.dump());
}

TEST_CASE("cli: mean-value subcommand reports zero violations") {
  const fs::path dir = fresh_dir("mean_value");
  CHECK(run_cli({"mean-value", "--trials", "60", "--seed", "13", "--out", dir.string()}) == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "mean_value_report.json"));
  CHECK(report["all_hold"].get<bool>());
  CHECK(report["epsilon_bound_ok"].get<bool>());
  CHECK(report["violations"].get<int>() == 0);
}
