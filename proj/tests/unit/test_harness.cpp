#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mslab/experiments.hpp"

using namespace mslab;
namespace fs = std::filesystem;

namespace {

class Harness : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mslab_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("OUTPUT_DIR");
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

const char* kFundsol =
    "experiment = fundsol-check\n"
    "fundsol.samples = 4\n"
    "fundsol.max_dim = 3\n"
    "fundsol.r_max = 5\n"
    "fundsol.mu_max = 3\n"
    "seed = 11\n";

}  // namespace

TEST_F(Harness, RunIsReproducible) {
  std::ostringstream log;
  const auto cfg = write("f.cfg", std::string(kFundsol) + "output_dir = " + (dir_ / "a").string() + "\n");
  ASSERT_EQ(run_command(cfg, log), kExitOk) << log.str();
  const std::string first = slurp(dir_ / "a" / "summary.csv");
  ASSERT_EQ(run_command(cfg, log), kExitOk);
  EXPECT_EQ(slurp(dir_ / "a" / "summary.csv"), first);
  EXPECT_NE(first.find("status,ok"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "recurrence.csv"));
}

TEST_F(Harness, OutputDirFromEnvironment) {
  std::ostringstream log;
  const auto cfg = write("f.cfg", kFundsol);
  ::setenv("OUTPUT_DIR", (dir_ / "env").c_str(), 1);
  EXPECT_EQ(run_command(cfg, log), kExitOk) << log.str();
  ::unsetenv("OUTPUT_DIR");
  EXPECT_TRUE(fs::exists(dir_ / "env" / "summary.csv"));
}

TEST_F(Harness, MalformedConfigExitsWithKey) {
  std::ostringstream log;
  const auto cfg = write("bad.cfg", "experiment = boundstate\nrun.n = 7\n");
  EXPECT_EQ(run_command(cfg, log), kExitConfig);
  EXPECT_NE(log.str().find("run.n"), std::string::npos) << log.str();
  std::ostringstream log2;
  EXPECT_EQ(run_command(write("bad2.cfg", "experiment = nonsense\n"), log2), kExitConfig);
  EXPECT_NE(log2.str().find("experiment"), std::string::npos);
  std::ostringstream log3;
  EXPECT_EQ(run_command(dir_ / "missing.cfg", log3), kExitConfig);
}

TEST_F(Harness, EmptySweep) {
  std::ostringstream log;
  const auto cfg = write("f.cfg", std::string(kFundsol) + "output_dir = " + (dir_ / "s").string() + "\n");
  const std::vector<double> none;
  EXPECT_EQ(sweep_command(cfg, "fundsol.r_max", &none, log), kExitOk);
  const std::string csv = slurp(dir_ / "s" / "sweep_summary.csv");
  EXPECT_EQ(csv, "fundsol.r_max,config_hash,status,error\n");
}

TEST_F(Harness, SweepRecordsFailedJobs) {
  const RunConfig cfg = RunConfig::parse(kFundsol);
  const auto rows = run_sweep(cfg, "fundsol.r_max", {4.0, 0.1, 3.0}, 2);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].result.status, "ok");
  EXPECT_EQ(rows[1].result.status, "error");
  EXPECT_NE(rows[1].result.error.find("fundsol.r_max"), std::string::npos);
  EXPECT_EQ(rows[2].result.status, "ok");
  EXPECT_EQ(rows[1].value, 0.1);
  EXPECT_NE(rows[0].result.config_hash, rows[2].result.config_hash);
  const std::string csv = sweep_summary_csv("fundsol.r_max", rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST_F(Harness, SweepFromConfigList) {
  std::ostringstream log;
  const auto cfg = write("f.cfg", std::string(kFundsol) + "sweep.fundsol.mu_max = [1, 2]\n" +
                                      "output_dir = " + (dir_ / "l").string() + "\n");
  EXPECT_EQ(sweep_command(cfg, "fundsol.mu_max", nullptr, log), kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(dir_ / "l" / "job1" / "summary.csv"));
  std::ostringstream log2;
  EXPECT_EQ(sweep_command(cfg, "fundsol.r_min", nullptr, log2), kExitConfig);
}

TEST_F(Harness, VStarAxisRescalesVelocities) {
  const RunConfig cfg = RunConfig::parse(
      "experiment = backward\n"
      "ensemble.solitons[0].v = [-1]\n"
      "ensemble.solitons[1].v = [0.5]\n"
      "ensemble.solitons[2].v = [2]\n");
  EXPECT_TRUE(sweepable(cfg, "v_star"));
  EXPECT_TRUE(sweepable(cfg, "a"));
  EXPECT_FALSE(sweepable(cfg, "experiment"));
  const RunConfig out = apply_axis(cfg, "v_star", 1.0);
  // Smallest gap 1.5 becomes 9.
  EXPECT_DOUBLE_EQ(out.get_doubles("ensemble.solitons[0].v")[0], -6.0);
  EXPECT_DOUBLE_EQ(out.get_doubles("ensemble.solitons[2].v")[0], 12.0);
  EXPECT_THROW(apply_axis(cfg, "v_star", -1.0), ConfigError);
  EXPECT_DOUBLE_EQ(apply_axis(cfg, "a", 0.3).get_double("profile.a"), 0.3);
}

TEST_F(Harness, ExperimentErrorIsRecorded) {
  const RunConfig cfg = RunConfig::parse(
      "experiment = instability\nnonlinearity.p = 3\nrun.n = 64\nrun.box = 12\n");
  const RunResult r = run_experiment(cfg);
  EXPECT_EQ(r.status, "error");
  EXPECT_FALSE(r.error.empty());
  EXPECT_NE(summary_csv(r).find("status,error"), std::string::npos);
}
