#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "app.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = MVAM_CONFIG_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mvam");
  std::ostringstream out;
  std::ostringstream err;
  const int code = mvam::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mvam_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SweepSingleSample) {
  const Result r = run({"sweep", "--config", kConfigDir + "/husky_nominal.json", "--out", (dir_ / "a").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(dir_ / "a" / "records.csv"), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "manifest.json"));
}

TEST_F(Cli, SweepIsBitIdenticalAcrossRunsAndJobs) {
  const std::string cfg = kConfigDir + "/coarse.json";
  ASSERT_EQ(run({"sweep", "--config", cfg, "--out", (dir_ / "a").string()}).code, 0);
  ASSERT_EQ(run({"sweep", "--config", cfg, "--out", (dir_ / "b").string(), "--jobs", "3"}).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "records.csv"), slurp(dir_ / "b" / "records.csv"));
}

TEST_F(Cli, ManifestReplaysSweep) {
  const std::string cfg = kConfigDir + "/coarse.json";
  ASSERT_EQ(run({"sweep", "--config", cfg, "--out", (dir_ / "a").string(), "--speed-mps", "0.15"}).code, 0);
  ASSERT_EQ(run({"sweep", "--config", (dir_ / "a" / "manifest.json").string(), "--out", (dir_ / "b").string()}).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "records.csv"), slurp(dir_ / "b" / "records.csv"));
}

TEST_F(Cli, BadConfigExitsTwoWithField) {
  const fs::path cfg = write("bad.json", R"({"components": [{"name": "a", "mass_kg": "x", "bounds": {}}]})");
  const Result r = run({"sweep", "--config", cfg.string(), "--out", (dir_ / "o").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("components[0].mass_kg"), std::string::npos) << r.err;

  const fs::path broken = write("broken.json", "{\n\"components\": [,]\n}");
  const Result b = run({"sweep", "--config", broken.string(), "--out", (dir_ / "o").string()});
  EXPECT_EQ(b.code, 2);
  EXPECT_NE(b.err.find(":2:"), std::string::npos) << b.err;
}

TEST_F(Cli, MissingArgumentsAreConfigErrors) {
  EXPECT_EQ(run({"sweep"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, SimulateNominal) {
  const Result r = run({"simulate", "--config", kConfigDir + "/husky_nominal.json", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(dir_ / "trace.csv"), 1u + 251u);
  EXPECT_NE(r.out.find("tcot "), std::string::npos);
  EXPECT_NE(r.out.find("mean_power_W "), std::string::npos);
}

TEST_F(Cli, SimulateStandingHasUndefinedTcot) {
  const Result r = run({"simulate", "--config", kConfigDir + "/husky_nominal.json", "--out", dir_.string(),
                        "--speed-mps", "0"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("TCOT undefined"), std::string::npos) << r.err;
}

TEST_F(Cli, SimulateUnreachableGaitIsInfeasible) {
  const Result r = run({"simulate", "--config", kConfigDir + "/husky_nominal.json", "--out", dir_.string(),
                        "--speed-mps", "3", "--period-s", "1"});
  EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, EvolveSeededRunsAreIdentical) {
  const std::string cfg = kConfigDir + "/coarse.json";
  const std::vector<std::string> common{"--config", cfg, "--seed", "5", "--generations", "6", "--population", "8"};
  auto args = [&](const std::string& out, const std::string& jobs) {
    std::vector<std::string> a{"evolve"};
    a.insert(a.end(), common.begin(), common.end());
    a.insert(a.end(), {"--out", (dir_ / out).string(), "--jobs", jobs});
    return a;
  };
  ASSERT_EQ(run(args("a", "1")).code, 0);
  ASSERT_EQ(run(args("b", "1")).code, 0);
  ASSERT_EQ(run(args("c", "3")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "history.csv"), slurp(dir_ / "b" / "history.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "history.csv"), slurp(dir_ / "c" / "history.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "best.csv"), slurp(dir_ / "c" / "best.csv"));
  EXPECT_EQ(line_count(dir_ / "a" / "history.csv"), 7u);
}

TEST_F(Cli, EvolveMinimalRun) {
  const Result r = run({"evolve", "--config", kConfigDir + "/coarse.json", "--seed", "1", "--generations", "1",
                        "--population", "2", "--out", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(dir_ / "history.csv"), 2u);
}

TEST_F(Cli, JobsFromEnvironment) {
  ::setenv("MVAM_JOBS", "2", 1);
  const Result r = run({"sweep", "--config", kConfigDir + "/husky_nominal.json", "--out", dir_.string()});
  ::unsetenv("MVAM_JOBS");
  EXPECT_EQ(r.code, 0) << r.err;
  ::setenv("MVAM_JOBS", "many", 1);
  const Result bad = run({"sweep", "--config", kConfigDir + "/husky_nominal.json", "--out", dir_.string()});
  ::unsetenv("MVAM_JOBS");
  EXPECT_EQ(bad.code, 2);
}

TEST_F(Cli, ReportSlices) {
  ASSERT_EQ(run({"sweep", "--config", kConfigDir + "/coarse.json", "--out", (dir_ / "s").string()}).code, 0);
  const std::string records = (dir_ / "s" / "records.csv").string();
  Result r = run({"report", "--records", records, "--slice-cy-m", "0", "--out", (dir_ / "r").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  // coarse space: 5 battery x positions times 3 actuator positions per Cy.
  EXPECT_EQ(line_count(dir_ / "r" / "slice.csv"), 1u + 15u);

  r = run({"report", "--records", records, "--slice-cy-m", "0.01", "--out", (dir_ / "r2").string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("nearest"), std::string::npos);
  EXPECT_EQ(line_count(dir_ / "r2" / "slice.csv"), 16u);
}

TEST_F(Cli, ReportOneRowAndEmpty) {
  ASSERT_EQ(run({"sweep", "--config", kConfigDir + "/husky_nominal.json", "--out", (dir_ / "s").string()}).code, 0);
  Result r = run({"report", "--records", (dir_ / "s" / "records.csv").string(), "--slice-cy-m", "-0.01",
                  "--out", (dir_ / "r").string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(line_count(dir_ / "r" / "slice.csv"), 2u);

  const fs::path empty = write("empty.csv", "id,cx_m,cy_m,ib_kgm2,mass_kg,tcot,payload_margin_kg,min_stability_margin_m,feasible\n");
  r = run({"report", "--records", empty.string(), "--slice-cy-m", "0", "--out", (dir_ / "e").string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("empty"), std::string::npos);
  EXPECT_EQ(line_count(dir_ / "e" / "slice.csv"), 1u);
}
