#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using vecmass::cli::run_cli;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "vecmass");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> f;
  std::istringstream is(line);
  for (std::string x; std::getline(is, x, ',');) f.push_back(x);
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("vecmass_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Cli, BoostReportsFourMass) {
  const CliRun r = run({"boost", "--beta", "0.6,0,0", "--m", "1", "--k", "1,0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["K"], nlohmann::json::parse("[2, 2, 0, 0]"));
  EXPECT_EQ(j["E"].get<double>(), 1.25);
  EXPECT_FALSE(j["negative_M2"].get<bool>());
}

TEST(Cli, KernelSingleQuery) {
  const CliRun r = run({"kernel", "--m", "1", "--dtau", "1", "--dxi", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "m,dtau,dxi1,dxi2,dxi3,regime,proper_time,re,im");
  const auto f = split_fields(lines[1]);
  ASSERT_EQ(f.size(), 9u);
  EXPECT_EQ(f[5], "timelike");
  EXPECT_NEAR(std::stod(f[7]), 0.08599, 1e-4);
  EXPECT_NEAR(std::stod(f[8]), -0.13390, 1e-4);
  EXPECT_EQ(std::stod(f[7]), std::cos(1.0) / (2.0 * std::numbers::pi));
}

TEST(Cli, KernelSweepCoversRegimes) {
  const CliRun r = run({"kernel", "--m", "1,-1", "--dtau", "1", "--dxi", "0;0.5;1;2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 9u);
  int spacelike = 0, lightlike = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f[5] == "spacelike") {
      ++spacelike;
      EXPECT_EQ(f[7], "0");
      EXPECT_EQ(f[8], "0");
    }
    if (f[5] == "lightlike") ++lightlike;
  }
  EXPECT_EQ(spacelike, 2);
  EXPECT_EQ(lightlike, 2);
}

TEST(Cli, KernelOracleColumn) {
  const CliRun r = run({"kernel", "--m", "1", "--dtau", "1", "--dxi", "0;0.3,0.2", "--oracle", "--epsilon", "0.02"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_NE(lines[0].find("rel_error"), std::string::npos);
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_LT(std::stod(split_fields(lines[i]).back()), 0.01);
}

TEST(Cli, KernelOracleOutsideRangeIsNan) {
  const CliRun r = run({"kernel", "--m", "1", "--dtau", "1", "--dxi", "0.95", "--oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = split_fields(split_lines(r.out).at(1));
  EXPECT_EQ(f[5], "timelike");
  EXPECT_EQ(f.back(), "nan");
}

TEST(Cli, ActionOnZigzag) {
  const CliRun r = run({"action", "--vertices", "0,0;1,0.9;2,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["total_proper_time"].get<double>(), 0.871779788708, 1e-12);
}

TEST(Cli, ActionSpacelikeSegmentIsDomainError) {
  const CliRun r = run({"action", "--vertices", "0,0;1,2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("path_integral: segment 0"), std::string::npos) << r.err;
}

TEST(Cli, WavepacketProducts) {
  const CliRun r = run({"wavepacket", "--sigma-k", "1,1,1", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(r.out);
  ASSERT_EQ(lines.size(), 5u);
  for (std::size_t i = 1; i < lines.size(); ++i) EXPECT_NEAR(std::stod(split_fields(lines[i]).back()), 0.5, 1e-3);
}

TEST(Cli, CheckCleanAndFaulted) {
  const CliRun clean = run({"check"});
  EXPECT_EQ(clean.code, 0) << clean.err;
  EXPECT_EQ(clean.out.find("FAIL"), std::string::npos);
  const CliRun faulted = run({"check", "--inject-metric-fault", "--format", "csv"});
  EXPECT_EQ(faulted.code, 1);
  EXPECT_NE(faulted.out.find("tetrad_algebra,boost_preserves_dot"), std::string::npos);
  EXPECT_NE(faulted.err.find("invariant failed: tetrad_algebra.boost_preserves_dot"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nosuchcommand"}).code, 2);
  EXPECT_EQ(run({"boost", "--m", "1"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "boost", "--beta", "0,0,0", "--m", "1"}).code, 2);
  EXPECT_EQ(run({"--workers", "0", "check"}).code, 2);
  EXPECT_EQ(run({"kernel", "--m", "abc"}).code, 2);
  EXPECT_EQ(run({"boost", "--beta", "1.2,0,0", "--m", "1"}).code, 1);
  EXPECT_EQ(run({"kernel", "--m", "1", "--dtau", "-1"}).code, 1);
  EXPECT_EQ(run({"kernel", "--m", "0", "--dtau", "1", "--dxi", "0", "--oracle", "--epsilon", "-1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SeventeenSignificantDigits) {
  const CliRun r = run({"--format", "json", "kernel", "--m", "1", "--dtau", "3", "--dxi", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const double re = std::cos(3.0) / (2.0 * std::numbers::pi * 3.0);
  EXPECT_NE(r.out.find([&] {
              char buf[64];
              std::snprintf(buf, sizeof buf, "%.17g", re);
              return std::string(buf);
            }()),
            std::string::npos)
      << r.out;
  EXPECT_FALSE(j.empty());
}

TEST_F(CliFiles, OutWritesManifest) {
  const fs::path out = dir_ / "k.csv";
  const CliRun r = run({"--out", out.string(), "--seed", "9", "kernel", "--m", "1", "--dtau", "1,2", "--dxi", "0;0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(out));
  const fs::path manifest = dir_ / "k.csv.manifest.json";
  ASSERT_TRUE(fs::exists(manifest));
  const auto m = nlohmann::json::parse(slurp(manifest));
  EXPECT_EQ(m["subcommand"], "kernel");
  EXPECT_EQ(m["seed"], 9);
  EXPECT_EQ(m["format"], "csv");
  EXPECT_EQ(m["parameters"]["dtau"], "1,2");
  EXPECT_TRUE(m.contains("tool_version"));
  EXPECT_TRUE(m.contains("timestamp"));
  EXPECT_EQ(split_lines(slurp(out)).size(), 5u);
}

TEST_F(CliFiles, ReplayIsBitwiseIdentical) {
  const fs::path out = dir_ / "mc.json";
  ASSERT_EQ(run({"--out", out.string(), "--seed", "4", "--workers", "2", "action", "--vertices", "0,0;1,0.2;2,0.4",
                 "--sample", "5000"})
                .code,
            0);
  const fs::path again = dir_ / "mc2.json";
  const CliRun r = run({"replay", (dir_ / "mc.json.manifest.json").string(), "--out", again.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(out), slurp(again));
  EXPECT_TRUE(fs::exists(dir_ / "mc2.json.manifest.json"));
}

TEST_F(CliFiles, WavepacketDumpHasManifest) {
  const fs::path dump = dir_ / "grid.csv";
  const CliRun r = run({"wavepacket", "--half-width", "8", "--step", "0.1", "--dump", dump.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dump));
  EXPECT_TRUE(fs::exists(dir_ / "grid.csv.manifest.json"));
  EXPECT_EQ(split_lines(slurp(dump)).front(), "tau,xi1,xi2,xi3,re,im");
}

TEST(Cli, OverlapDiagonal) {
  const CliRun r = run({"--format", "json", "overlap", "--m1", "1", "--m2", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"re\""), std::string::npos) << r.out;
}

TEST(Cli, ComposeRestPhase) {
  const CliRun r = run({"--format", "json", "compose", "--m", "50", "--dtau", "2", "--slices", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("phase_error"), std::string::npos) << r.out;
}
