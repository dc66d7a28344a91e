#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gambles/cli.hpp"
#include "gambles/io/manifest.hpp"

namespace fs = std::filesystem;
using gambles::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gambles-cli-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_spec(const std::string& name, const std::string& text) {
  const fs::path path = fs::temp_directory_path() / ("gambles-cli-spec-" + name + ".txt");
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::map<std::string, std::string> key_values(const std::string& csv) {
  std::map<std::string, std::string> values;
  const auto rows = csv_rows(csv);
  for (std::size_t i = 1; i < rows.size(); ++i) values[rows[i][0]] = rows[i][1];
  return values;
}

}  // namespace

TEST_CASE("evaluate reports the coin gamble") {
  const auto spec = write_spec("coin", "outcome 0.5 -0.4\noutcome 0.5 0.5\n");
  const auto r = invoke({"evaluate", "--spec", spec});
  REQUIRE(r.code == 0);
  const auto values = key_values(r.out);
  CHECK(std::stod(values.at("huygens_rate")) == doctest::Approx(0.05));
  CHECK(std::stod(values.at("laplace_rate")) == doctest::Approx(-0.05268).epsilon(1e-4));
  CHECK(values.at("growth_factor.1") == "0.6");
  CHECK(values.at("growth_factor.2") == "1.5");
  CHECK(values.at("bankruptcy_possible") == "false");
  CHECK(r.err.find("command = evaluate") != std::string::npos);
  CHECK(r.err.find("output.stdout = fnv1a64:") != std::string::npos);
}

TEST_CASE("evaluate on degenerate and ruinous gambles") {
  const auto certain = invoke({"evaluate", "--spec", write_spec("certain", "outcome 1 0\n"), "--utility", "sqrt"});
  REQUIRE(certain.code == 0);
  const auto zeros = key_values(certain.out);
  CHECK(zeros.at("huygens_rate") == "0");
  CHECK(zeros.at("laplace_rate") == "0");
  CHECK(zeros.at("expected_utility_rate") == "0");

  const auto ruin = invoke({"evaluate", "--spec", write_spec("ruin", "outcome 0.5 -1\noutcome 0.5 1\n")});
  REQUIRE(ruin.code == 0);
  const auto values = key_values(ruin.out);
  CHECK(values.at("laplace_rate") == "-inf");
  CHECK(values.at("bankruptcy_possible") == "true");
}

TEST_CASE("evaluate on a lottery spec with overrides") {
  const auto spec = write_spec("stp", "family = st_petersburg\nnmax = 10\nprice = 2\n");
  const auto r = invoke({"evaluate", "--spec", spec, "--price", "0", "--nmax", "30", "--format", "jsonl"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("{\"criterion\":\"huygens_rate\",\"value\":15}") != std::string::npos);
  CHECK(r.out.find("{\"criterion\":\"nmax\",\"value\":30}") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({"evaluate", "--spec", write_spec("bad", "outcome 0.5 1\noutcome 0.49 2\n")}).code == 2);
  CHECK(invoke({"evaluate", "--spec", write_spec("syntax", "outcome 1\n")}).code == 2);
  CHECK(invoke({"evaluate", "--spec", "/no/such/file"}).code == 2);
  CHECK(invoke({"evaluate"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"simulate", "--dynamic", "sideways"}).code == 2);
  CHECK(invoke({"stpetersburg", "--nmax", "0"}).code == 2);
  const auto negative = write_spec("negative", "outcome 0.5 -15\noutcome 0.5 1\n");
  const auto domain = invoke({"evaluate", "--spec", negative, "--wealth", "10"});
  CHECK(domain.code == 3);
  CHECK(domain.err.find("error:") != std::string::npos);
  CHECK(invoke({"simulate", "--spec", negative, "--wealth", "10", "--dynamic", "multiplicative"}).code == 3);
  CHECK(invoke({"evaluate", "--spec", write_spec("coin2", "outcome 0.5 -0.4\noutcome 0.5 0.5\n"), "--wealth", "0"})
            .code == 3);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("simulate prints trajectories and ensembles") {
  const auto t = invoke({"simulate", "--rounds", "3", "--seed", "5", "--dynamic", "additive"});
  REQUIRE(t.code == 0);
  const auto rows = csv_rows(t.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"tau", "outcome", "wealth"});
  CHECK(rows[1] == std::vector<std::string>{"0", "", "1"});

  const auto e = invoke({"simulate", "--rounds", "10", "--ensemble", "100", "--seed", "5", "--times", "0,10"});
  REQUIRE(e.code == 0);
  const auto erows = csv_rows(e.out);
  REQUIRE(erows.size() == 3);
  CHECK(erows[2][0] == "10");
}

TEST_CASE("seed falls back to GAMBLES_SEED") {
  ::setenv("GAMBLES_SEED", "5", 1);
  const auto from_env = invoke({"simulate", "--rounds", "20"});
  ::unsetenv("GAMBLES_SEED");
  const auto explicit_seed = invoke({"simulate", "--rounds", "20", "--seed", "5"});
  const auto default_seed = invoke({"simulate", "--rounds", "20"});
  CHECK(from_env.out == explicit_seed.out);
  CHECK(from_env.err.find("seed = 5") != std::string::npos);
  CHECK(default_seed.err.find("seed = 1\n") != std::string::npos);
  ::setenv("GAMBLES_SEED", "five", 1);
  CHECK(invoke({"simulate", "--rounds", "20"}).code == 2);
  ::unsetenv("GAMBLES_SEED");
}

TEST_CASE("diagnose classifies delta log wealth as ergodic") {
  const auto r = invoke({"diagnose", "--dynamic", "multiplicative", "--observable", "delta-log-w", "--seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(key_values(r.out).at("verdict") == "ergodic");
  const auto w = invoke({"diagnose", "--dynamic", "additive", "--observable", "wealth", "--seed", "3"});
  CHECK(key_values(w.out).at("verdict") == "non_ergodic");
}

TEST_CASE("menger price sweep ends in -inf") {
  const auto r = invoke({"menger", "--sweep", "price"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 3);
  CHECK(rows[0][2] == "laplace_change");
  CHECK(rows.back()[2] == "-inf");
  CHECK(rows.back()[6] == "ruin");
  CHECK(rows[rows.size() - 2][2] == "-inf");
  CHECK(rows[1][6] == "accept");
}

TEST_CASE("st petersburg nmax sweep grows linearly under huygens") {
  const auto r = invoke({"stpetersburg", "--sweep", "nmax", "--nmax-values", "1:20"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 21);
  CHECK(rows[0][1] == "huygens_rate");
  for (int n = 1; n <= 20; ++n) CHECK(std::stod(rows[n][1]) == n / 2.0);
}

TEST_CASE("max-price sweep stays below the bound") {
  const auto r = invoke({"menger", "--sweep", "max-price", "--nmax-values", "1:3,10"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) < std::stod(rows[i][2]));
  CHECK(invoke({"menger", "--sweep", "max-price", "--nmax-values", "3:1"}).code == 2);
}

TEST_CASE("figure2 files") {
  const auto dir = scratch("figure2");
  const auto r = invoke({"figure2", "--out", dir.string(), "--seed", "11", "--ensemble", "100000", "--rounds", "1000"});
  REQUIRE(r.code == 0);
  const auto additive = csv_rows(slurp(dir / "figure2_additive.csv"));
  const auto multiplicative = csv_rows(slurp(dir / "figure2_multiplicative.csv"));
  REQUIRE(additive.size() == 1002);
  REQUIRE(multiplicative.size() == 1002);
  CHECK(additive[0] == std::vector<std::string>{"t", "typical_W", "ensemble_mean_W", "huygens_line", "laplace_line"});
  CHECK(std::stod(additive[1001][3]) == doctest::Approx(51.0).epsilon(1e-12));
  CHECK(std::stod(multiplicative[1001][4]) == doctest::Approx(std::exp(-52.68025782891315)).epsilon(1e-10));
  CHECK(std::stod(multiplicative[11][2]) == doctest::Approx(std::pow(1.05, 10)).epsilon(0.02));

  // one outcome sequence drives both typical paths
  for (std::size_t t = 1; t <= 1000; ++t) {
    const double up_add = std::stod(additive[t + 1][1]) - std::stod(additive[t][1]);
    const double up_mult = std::stod(multiplicative[t + 1][1]) / std::stod(multiplicative[t][1]);
    CHECK((up_add > 0) == (up_mult > 1));
  }

  const auto manifest = gambles::io::RunManifest::parse(slurp(dir / "manifest.txt"));
  CHECK(manifest.command == "figure2");
  CHECK(manifest.seed == "11");
  CHECK(manifest.outputs.size() == 2);
}

TEST_CASE("replaying a manifest reproduces every output") {
  const auto dir = scratch("replay");
  REQUIRE(invoke({"figure2", "--out", dir.string(), "--rounds", "50", "--ensemble", "500"}).code == 0);
  const auto replay = invoke({"replay", (dir / "manifest.txt").string(), "--work-dir", scratch("replay-work").string()});
  CHECK(replay.code == 0);
  CHECK(replay.out.find("figure2_additive.csv match") != std::string::npos);
  CHECK(replay.out.find("figure2_multiplicative.csv match") != std::string::npos);
  CHECK(replay.out.find("MISMATCH") == std::string::npos);

  // a tampered output is caught
  std::ofstream(dir / "manifest.txt", std::ios::app) << "output.extra.csv = fnv1a64:0000000000000000\n";
  CHECK(invoke({"replay", (dir / "manifest.txt").string(), "--work-dir", scratch("replay-work").string()}).code == 1);
}

TEST_CASE("replay of a stdout run") {
  const auto dir = scratch("replay-stdout");
  const auto r = invoke({"simulate", "--rounds", "30"});
  std::ofstream(dir / "manifest.txt") << r.err;
  const auto replay = invoke({"replay", (dir / "manifest.txt").string()});
  CHECK(replay.code == 0);
  CHECK(replay.out.find("stdout match") != std::string::npos);
}
