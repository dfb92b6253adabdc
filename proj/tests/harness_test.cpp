#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "energynet/harness/commands.hpp"

using namespace energynet;
using namespace energynet::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("energynet_harness_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct RunOutput {
  int exit_code;
  std::string out;
};

RunOutput run_cli(const std::string& args) {
  const std::string cmd = std::string(ENERGYNET_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, DefaultsFromEmptyInput) {
  const RunConfig c = resolve_config({});
  EXPECT_EQ(c.layers, (std::vector<std::size_t>{2, 4, 4, 3}));
  EXPECT_EQ(c.beta1, -0.5);
  EXPECT_EQ(c.beta2, 0.5);
  EXPECT_EQ(c.epsilon, 0.05);
  EXPECT_EQ(c.sigma, 0.0);
  EXPECT_EQ(c.tolerance, 1e-10);
  EXPECT_EQ(c.seed, 42u);
}

TEST(Config, FlagsOverrideFile) {
  const fs::path dir = scratch("precedence");
  write_json(dir / "c.json", {{"epsilon", 0.05}, {"seed", 7}});
  FlagOverrides f;
  f.config_path = (dir / "c.json").string();
  f.epsilon = 0.01;
  const RunConfig c = resolve_config(f);
  EXPECT_EQ(c.epsilon, 0.01);
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, EchoRoundTrips) {
  RunConfig c;
  c.layers = {3, 5, 2};
  c.epsilon = 0.1 + 0.2;
  c.x = {0.1, -0.3};
  c.mode = "free_run";
  c.update_biases = true;
  RunConfig back;
  merge_json(nlohmann::json(c), back);
  EXPECT_EQ(back, c);
}

TEST(Config, InvalidInputsNameTheField) {
  RunConfig c;
  c.beta2 = 0.6;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("beta2"), std::string::npos);
  }
  RunConfig d;
  EXPECT_THROW(merge_json({{"epsilonn", 0.1}}, d), Error);
  EXPECT_THROW(merge_json({{"epsilon", "fast"}}, d), Error);
  EXPECT_THROW(parse_layers("2,,3"), Error);
  EXPECT_THROW(parse_layers("2,x,3"), Error);
  EXPECT_EQ(parse_layers("1,4,2"), (std::vector<std::size_t>{1, 4, 2}));
}

TEST(Config, XorDefaultsToMatchingLayers) {
  FlagOverrides f;
  f.dataset = "xor";
  EXPECT_EQ(resolve_config(f).layers, (std::vector<std::size_t>{1, 4, 4, 2}));
  f.layers = "1,3,2";
  EXPECT_EQ(resolve_config(f).layers, (std::vector<std::size_t>{1, 3, 2}));
}

TEST(Io, ShortestRoundTripFormatting) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Io, ParamsRoundTripExactly) {
  Rng rng(5);
  const LayeredTopology t({2, 3, 4});
  const auto p = random_params<double>(t, rng);
  const auto text = params_to_json(p).dump();
  const auto q = params_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(q.topology(), p.topology());
  for (std::size_t k = 0; k < t.num_blocks(); ++k) EXPECT_EQ(q.block(k), p.block(k));
  EXPECT_EQ(q.biases(), p.biases());
  auto bad = params_to_json(p);
  bad["format_version"] = 99;
  EXPECT_THROW(params_from_json(bad), Error);
  bad = params_to_json(p);
  bad["blocks"][0]["data"].erase(0);
  EXPECT_THROW(params_from_json(bad), Error);
}

TEST(Io, CsvHeaders) {
  EXPECT_EQ(metrics_csv({}), "epoch,mse,cosine_stdp_vs_sgd,weight_asymmetry,skipped_examples\n");
  const auto p = NetworkParams<double>::zeros(LayeredTopology({1, 1, 1}));
  StateVector<double> s(3);
  const auto log = langevin_chain(p, s, DynamicsConfig{}, 1);
  const std::string csv = trajectory_csv(log);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,unit,state,corrupted_state,delta,energy");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 3);
}

TEST(Verify, FilterSelectsGroup) {
  const auto invs = select_invariants("langevin");
  ASSERT_FALSE(invs.empty());
  for (const auto& i : invs) EXPECT_EQ(i.group, "langevin");
  EXPECT_TRUE(select_invariants("no_such_check").empty());
}

TEST(Verify, AsymmetryInjectionTripsTheSymmetryInvariant) {
  const auto invs = select_invariants("drive_jacobian_symmetry");
  ASSERT_EQ(invs.size(), 1u);
  EXPECT_TRUE(invs[0].run({}).passed);
  VerifyOptions o;
  o.inject_asymmetry = true;
  EXPECT_FALSE(invs[0].run(o).passed);
}

TEST(Cli, BadConfigExitsTwo) {
  const fs::path dir = scratch("bad");
  write_json(dir / "c.json", {{"beta1", -0.5}, {"beta2", 0.7}});
  const auto r = run_cli("relax --config " + (dir / "c.json").string() + " --out " + dir.string());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("beta2"), std::string::npos);
  EXPECT_EQ(run_cli("relax --layers 2,0,3 --out " + dir.string()).exit_code, 2);
  EXPECT_EQ(run_cli("relax --epsilon abc --out " + dir.string()).exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
}

TEST(Cli, VerifyFilterRunsOnlyLangevinAndPasses) {
  const fs::path dir = scratch("verify");
  const auto r = run_cli("verify --filter langevin --jobs 2 --out " + dir.string());
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("langevin/langevin_identity"), std::string::npos);
  EXPECT_EQ(r.out.find("model/"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "config.json"));
}

TEST(Cli, InjectedAsymmetryExitsOneNamingTheInvariant) {
  const fs::path dir = scratch("inject");
  const auto r = run_cli("verify --filter model --inject-asymmetry --out " + dir.string());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("FAIL  model/drive_jacobian_symmetry"), std::string::npos) << r.out;
}

TEST(Cli, RelaxOnZeroNetWritesZeros) {
  const fs::path dir = scratch("relax");
  write_json(dir / "c.json", {{"init", "zeros"}, {"layers", {2, 3, 2}}, {"x", {0.0, 0.0}}});
  const auto r = run_cli("relax --config " + (dir / "c.json").string() + " --out " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto fp = read_json_file(dir / "fixed_point.json");
  for (double v : fp["state"].get<std::vector<double>>()) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(fs::exists(dir / "fixed_point.csv"));
  const RunConfig echo = [&] {
    RunConfig c;
    merge_json(read_json_file(dir / "config.json"), c);
    return c;
  }();
  EXPECT_EQ(echo.layers, (std::vector<std::size_t>{2, 3, 2}));
}

TEST(Cli, NonConvergenceExitsThree) {
  const fs::path dir = scratch("nonconv");
  write_json(dir / "c.json", {{"max_steps", 2}});
  EXPECT_EQ(run_cli("relax --config " + (dir / "c.json").string() + " --out " + dir.string()).exit_code, 3);
  EXPECT_EQ(run_cli("nudge --config " + (dir / "c.json").string() + " --out " + dir.string()).exit_code, 3);
}

TEST(Cli, NudgeWithFreeOutputTargetReportsZeroGradients) {
  const fs::path dir = scratch("nudge");
  write_json(dir / "c.json", {{"target_free_output", true}, {"init_gain", 0.3}});
  const auto r = run_cli("nudge --config " + (dir / "c.json").string() + " --out " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto rep = read_json_file(dir / "gradient_report.json");
  for (const auto& l : rep["layers"]) {
    for (double v : l["oracle_gradient"].get<std::vector<double>>()) EXPECT_EQ(v, 0.0);
  }
  EXPECT_TRUE(fs::exists(dir / "gradient_report.csv"));
}

TEST(Cli, SampleAndTrainWriteArtifacts) {
  const fs::path dir = scratch("artifacts");
  ASSERT_EQ(run_cli("sample --sigma 0.05 --out " + dir.string()).exit_code, 0);
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  const auto r = run_cli("train --layers 2,4,3 --epochs 2 --out " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const std::string metrics = slurp(dir / "train_metrics.csv");
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 3);
  EXPECT_EQ(params_from_json(read_json_file(dir / "params.json")).topology(), LayeredTopology({2, 4, 3}));
  EXPECT_TRUE(read_json_file(dir / "train_summary.json").contains("initial_mse"));
}
