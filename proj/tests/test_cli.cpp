#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fbmlab/cli.hpp"
#include "fbmlab/report.hpp"
#include "json.hpp"

namespace fbmlab {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fbmlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  const std::string s = slurp(p);
  return s.substr(0, s.find('\n'));
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("fbmlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string config(const std::string& text) {
    const fs::path p = root_ / "run.conf";
    std::ofstream(p) << text;
    return p.string();
  }
  std::string out(const std::string& name) const { return (root_ / name).string(); }

  fs::path root_;
};

constexpr const char* kSmall =
    "hurst = 0.7\n"
    "dt = 0.125\n"
    "n_list = 4, 8, 16, 32\n"
    "t_list = 8\n"
    "r_list = 0, 0.5, 1\n"
    "r_units = sigma\n"
    "lambda_list = 1\n"
    "replicas = 300\n"
    "centering_replicas = 300\n"
    "sample.n_steps = 32\n"
    "sample.paths = 2\n"
    "diagnose.k_list = 1, 2\n"
    "diagnose.paths = 500\n"
    "diagnose.steps = 64\n"
    "diagnose.x_list = 0.5, 1\n"
    "diagnose.p_list = 2, 4\n";

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"bounds", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"bounds", "--threads", "0"}).code, kExitUsage);
}

TEST_F(Cli, MissingConfigFileExitsWithTwo) {
  const auto r = run({"bounds", "--config", out("nope.conf"), "--out", out("run")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST_F(Cli, UnknownConfigKeyExitsWithTwo) {
  const auto r = run({"bounds", "--config", config("hurst = 0.3\nsurprise = 1\n"), "--out", out("run")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("unknown key 'surprise'"), std::string::npos);
}

TEST_F(Cli, BoundsWritesSchema) {
  ASSERT_EQ(run({"bounds", "--config", config(kSmall), "--out", out("b")}).code, kExitPass);
  EXPECT_EQ(first_line(root_ / "b" / "bounds_discrete.csv"), "H,n_or_T,k,psi,psi_sq_cumsum,growth_exponent");
  EXPECT_TRUE(fs::exists(root_ / "b" / "plots" / "bounds_discrete.svg"));
  EXPECT_TRUE(fs::exists(root_ / "b" / "summary.md"));
}

TEST_F(Cli, BoundsConstantScalesSquaredSums) {
  ASSERT_EQ(run({"bounds", "--config", config(kSmall), "--out", out("one")}).code, kExitPass);
  ASSERT_EQ(run({"bounds", "--config", config(std::string(kSmall) + "bounds.c_prime = 4\n"), "--out", out("four")}).code,
            kExitPass);
  const auto a = report::load_table(root_ / "one", "bounds_discrete", report::Format::Csv);
  const auto b = report::load_table(root_ / "four", "bounds_discrete", report::Format::Csv);
  ASSERT_EQ(a.rows().size(), b.rows().size());
  const std::size_t psi = a.column("psi"), cum = a.column("psi_sq_cumsum");
  for (std::size_t i = 0; i < a.rows().size(); ++i) {
    EXPECT_NEAR(std::stod(b.rows()[i][psi]), 2.0 * std::stod(a.rows()[i][psi]), 1e-12 * std::stod(b.rows()[i][psi]));
    EXPECT_NEAR(std::stod(b.rows()[i][cum]), 4.0 * std::stod(a.rows()[i][cum]), 1e-12 * std::stod(b.rows()[i][cum]));
  }
}

TEST_F(Cli, SampleAndIntegrateWritePaths) {
  for (const char* cmd : {"sample", "integrate"}) {
    ASSERT_EQ(run({cmd, "--config", config(kSmall), "--out", out(cmd)}).code, kExitPass);
    EXPECT_EQ(first_line(root_ / cmd / "path_1.csv"), "t,comp_0");
    const auto m = nlohmann::json::parse(slurp(root_ / cmd / "manifest.json"));
    EXPECT_EQ(m["stream_ranges"]["paths"]["last"], 2);
  }
  EXPECT_NE(slurp(root_ / "sample" / "path_0.csv"), slurp(root_ / "integrate" / "path_0.csv"));
}

TEST_F(Cli, DiagnoseWritesSchemas) {
  ASSERT_EQ(run({"diagnose", "--config", config(kSmall), "--out", out("d")}).code, kExitPass);
  EXPECT_EQ(first_line(root_ / "d" / "holder.csv"), "v,v_prime,k,H,second_moment,bound_ratio");
  EXPECT_EQ(first_line(root_ / "d" / "sup_norm.csv"), "x,p,estimate,stderr,comparator");
}

TEST_F(Cli, ExperimentIsThreadCountInvariant) {
  const std::string cfg = config(kSmall);
  ASSERT_EQ(run({"experiment", "--config", cfg, "--seed", "42", "--threads", "1", "--out", out("t1")}).code, kExitPass);
  ASSERT_EQ(run({"experiment", "--config", cfg, "--seed", "42", "--threads", "3", "--out", out("t3")}).code, kExitPass);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(root_ / "t1")) {
    if (e.path().extension() != ".csv") continue;
    EXPECT_EQ(slurp(e.path()), slurp(root_ / "t3" / e.path().filename())) << e.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 5u);
  EXPECT_EQ(first_line(root_ / "t1" / "tails_discrete.csv"), "H,n_or_T,delta,r,estimate,stderr,envelope,censored");
  EXPECT_EQ(first_line(root_ / "t1" / "exponents.csv"), "H,quantity,slope,slope_stderr,target");
  const auto m = nlohmann::json::parse(slurp(root_ / "t1" / "manifest.json"));
  EXPECT_TRUE(m["stream_ranges"]["disjoint"].get<bool>());
  EXPECT_EQ(m["seed"], 42);
  EXPECT_TRUE(m.contains("wall_time_s"));
  EXPECT_TRUE(m.contains("versions"));
}

TEST_F(Cli, SeedChangesResults) {
  const std::string cfg = config(kSmall);
  ASSERT_EQ(run({"sample", "--config", cfg, "--seed", "1", "--out", out("s1")}).code, kExitPass);
  ASSERT_EQ(run({"sample", "--config", cfg, "--seed", "2", "--out", out("s2")}).code, kExitPass);
  EXPECT_NE(slurp(root_ / "s1" / "path_0.csv"), slurp(root_ / "s2" / "path_0.csv"));
}

TEST_F(Cli, JsonFormat) {
  ASSERT_EQ(run({"bounds", "--config", config(kSmall), "--format", "json", "--out", out("j")}).code, kExitPass);
  const auto t = nlohmann::json::parse(slurp(root_ / "j" / "bounds_discrete.json"));
  EXPECT_EQ(t["columns"][0], "H");
  EXPECT_DOUBLE_EQ(t["rows"][0]["H"].get<double>(), 0.7);
}

TEST_F(Cli, ReportRegeneratesWithoutSimulation) {
  ASSERT_EQ(run({"bounds", "--config", config(kSmall), "--out", out("r")}).code, kExitPass);
  fs::remove_all(root_ / "r" / "plots");
  fs::remove(root_ / "r" / "summary.md");
  EXPECT_EQ(run({"report", "--out", out("r")}).code, kExitPass);
  EXPECT_TRUE(fs::exists(root_ / "r" / "plots" / "bounds_continuous.svg"));
  EXPECT_TRUE(fs::exists(root_ / "r" / "summary.md"));
  EXPECT_EQ(run({"report", "--out", out("missing")}).code, kExitUsage);
}

TEST_F(Cli, ThreadsFlagOverridesEnvironment) {
  setenv("FBM_LAB_THREADS", "3", 1);
  ASSERT_EQ(run({"bounds", "--config", config(kSmall), "--out", out("e")}).code, kExitPass);
  EXPECT_EQ(nlohmann::json::parse(slurp(root_ / "e" / "manifest.json"))["threads"], 3);
  ASSERT_EQ(run({"bounds", "--config", config(kSmall), "--threads", "2", "--out", out("f")}).code, kExitPass);
  EXPECT_EQ(nlohmann::json::parse(slurp(root_ / "f" / "manifest.json"))["threads"], 2);
  unsetenv("FBM_LAB_THREADS");
}

}  // namespace
}  // namespace fbmlab
