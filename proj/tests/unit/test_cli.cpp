#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"

using namespace spinwehrl::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SPINWEHRL_CONFIG_DIR;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("spinwehrl_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  CommandOptions opts(const fs::path& config) {
    CommandOptions o;
    o.config = config.string();
    o.out_dir = dir_.string();
    return o;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

const char* kEqualQuench = R"({
  "scenario": "thermal_quench",
  "params": {"omega": 1.0, "gamma": 0.5, "initial_temperature": 1.0, "bath_temperature": 1.0},
  "time": {"t_max": 4.0, "output_dt": 0.5},
  "output": {"csv": "quench.csv"}
})";

}  // namespace

TEST_F(Cli, EveryBundledConfigValidates) {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".json") continue;
    ++n;
    EXPECT_EQ(cmd_validate(opts(entry.path()), out_, err_), kExitOk) << entry.path() << err_.str();
  }
  EXPECT_GE(n, 10);
}

TEST_F(Cli, RunWritesCsvAndSummary) {
  const auto cfg = write_config("q.json", kEqualQuench);
  ASSERT_EQ(cmd_run(opts(cfg), out_, err_), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("sigma_wehrl 0\n"), std::string::npos) << out_.str();
  const std::string csv = slurp(dir_ / "quench.csv");
  EXPECT_EQ(csv.rfind("t,tau_x,tau_y,tau_z,S_wehrl,Pi_wehrl,Phi_wehrl,Pi_vN,Phi_vN,Phi_E", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  EXPECT_FALSE(fs::exists(dir_ / "quench_trajectory.csv"));
}

TEST_F(Cli, RunIsDeterministic) {
  const auto cfg = write_config("q.json", kEqualQuench);
  ASSERT_EQ(cmd_run(opts(cfg), out_, err_), kExitOk);
  const std::string first = slurp(dir_ / "quench.csv");
  ASSERT_EQ(cmd_run(opts(cfg), out_, err_), kExitOk);
  EXPECT_EQ(first, slurp(dir_ / "quench.csv"));
}

TEST_F(Cli, TrajectoryFlag) {
  const auto cfg = write_config("q.json", kEqualQuench);
  auto o = opts(cfg);
  o.trajectory = true;
  ASSERT_EQ(cmd_run(o, out_, err_), kExitOk);
  const std::string traj = slurp(dir_ / "quench_trajectory.csv");
  EXPECT_EQ(traj.rfind("t,re_0_0,im_0_0,re_0_1,im_0_1,re_1_0,im_1_0,re_1_1,im_1_1\n", 0), 0u);
}

TEST_F(Cli, DephasingRateCurveDivergesOnlyForVonNeumann) {
  ASSERT_EQ(cmd_run(opts(kConfigs / "rate_dephasing_tau.json"), out_, err_), kExitOk);
  const std::string csv = slurp(dir_ / "rate_dephasing_tau.csv");
  const std::string last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
  EXPECT_EQ(last, "1,0.25,inf\n");
}

TEST_F(Cli, SchemaErrorsExitTwo) {
  const auto unknown = write_config("u.json", R"({"scenario": "thermal_quench", "colour": 3})");
  EXPECT_EQ(cmd_run(opts(unknown), out_, err_), kExitConfig);
  EXPECT_NE(err_.str().find("colour"), std::string::npos);

  const auto bad_scenario = write_config("b.json", R"({"scenario": "warp_drive"})");
  EXPECT_EQ(cmd_validate(opts(bad_scenario), out_, err_), kExitConfig);

  const auto negative = write_config("n.json", R"({"scenario": "spontaneous_emission", "params": {"gamma": -1}})");
  EXPECT_EQ(cmd_validate(opts(negative), out_, err_), kExitConfig);
  EXPECT_NE(err_.str().find("params.gamma"), std::string::npos) << err_.str();

  EXPECT_EQ(cmd_validate(opts(dir_ / "missing.json"), out_, err_), kExitConfig);
  const auto broken = write_config("x.json", "{ not json");
  EXPECT_EQ(cmd_validate(opts(broken), out_, err_), kExitConfig);

  auto grid = opts(write_config("q.json", kEqualQuench));
  grid.grid = "12by4";
  EXPECT_EQ(cmd_validate(grid, out_, err_), kExitConfig);
}

TEST_F(Cli, NumericalFailureExitsThree) {
  const auto pulse = write_config("p.json", R"({
    "scenario": "photon_pulse",
    "params": {"gamma0": 1.0, "capital_omega": 4.0, "a0": 0.7071067811865476},
    "time": {"t_max": 5.0, "output_dt": 0.1},
    "output": {"csv": "p.csv"}
  })");
  const int code = cmd_run(opts(pulse), out_, err_);
  if (code == kExitConfig) {
    EXPECT_NE(err_.str().find("a0"), std::string::npos) << err_.str();
  } else {
    EXPECT_EQ(code, kExitNumerical);
    EXPECT_NE(err_.str().find("NonMarkovianRegime"), std::string::npos) << err_.str();
  }
}

TEST_F(Cli, CompareReportsAgreement) {
  const auto cfg = write_config("q.json", R"({
    "scenario": "thermal_quench",
    "params": {"omega": 1.0, "gamma": 0.5, "initial_temperature": 3.0, "bath_temperature": 1.0},
    "time": {"t_max": 4.0, "output_dt": 0.5},
    "output": {"csv": "quench.csv"}
  })");
  EXPECT_EQ(cmd_compare(opts(cfg), out_, err_), kExitOk) << out_.str() << err_.str();
  EXPECT_NE(out_.str().find("PASS"), std::string::npos);

  auto strict = opts(cfg);
  strict.tol = 1e-300;
  EXPECT_EQ(cmd_compare(strict, out_, err_), kExitDeviation);
  EXPECT_NE(out_.str().find("FAIL"), std::string::npos);

  EXPECT_EQ(cmd_compare(opts(kConfigs / "rate_damping_tau.json"), out_, err_), kExitConfig);
  EXPECT_NE(err_.str().find("single method"), std::string::npos);
}

TEST_F(Cli, SweepOverTemperature) {
  const auto cfg = write_config("q.json", kEqualQuench);
  auto o = opts(cfg);
  o.param = "params.bath_temperature";
  o.values = {"1.0", "2.0", "0.5"};
  ASSERT_EQ(cmd_sweep(o, out_, err_), kExitOk) << err_.str();
  const std::string csv = slurp(dir_ / "sweep_bath_temperature.csv");
  EXPECT_EQ(csv, out_.str());
  EXPECT_EQ(csv.rfind("params.bath_temperature,sigma_wehrl", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n1,0,"), std::string::npos) << csv;
}

TEST_F(Cli, SweepErrors) {
  const auto cfg = write_config("q.json", kEqualQuench);
  auto empty = opts(cfg);
  empty.param = "params.gamma";
  EXPECT_EQ(cmd_sweep(empty, out_, err_), kExitConfig);

  auto unknown = opts(cfg);
  unknown.param = "params.colour";
  unknown.values = {"1"};
  EXPECT_EQ(cmd_sweep(unknown, out_, err_), kExitConfig);

  auto garbage = opts(cfg);
  garbage.param = "params.gamma";
  garbage.values = {"fast"};
  EXPECT_EQ(cmd_sweep(garbage, out_, err_), kExitConfig);
}

TEST_F(Cli, ListScenarios) {
  EXPECT_EQ(cmd_list_scenarios(out_), kExitOk);
  for (const char* name : {"spontaneous_emission", "thermal_quench", "rotating_field", "photon_pulse", "custom"}) {
    EXPECT_NE(out_.str().find(name), std::string::npos) << name;
  }
}
