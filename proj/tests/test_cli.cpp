#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& args, const fs::path& err = {}) {
  std::string cmd = std::string(MVCOVH_CLI_PATH) + " " + args + " > /dev/null";
  cmd += err.empty() ? " 2>/dev/null" : " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("mvcovh_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    ASSERT_EQ(run("synth --samples 60 --dims 6,5 --seed 2 --out " + (root_ / "data").string()), 0);
    manifest_ = root_ / "data" / "manifest.json";
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
  fs::path manifest_;
};

}  // namespace

TEST_F(Cli, FitWritesArtifacts) {
  const auto out = root_ / "fit";
  ASSERT_EQ(run("fit --manifest " + manifest_.string() + " --clusters 3 --seed 5 --out " + out.string()), 0);
  for (const char* f : {"report.json", "trace.csv", "hidden_trace.csv", "assignment.csv", "hidden_H.csv",
                        "centers_hidden.csv", "centers_view0.csv", "centers_view1.csv"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_TRUE(report.contains("metrics"));

  const auto eval = root_ / "eval";
  ASSERT_EQ(run("eval --manifest " + manifest_.string() + " --assignment " + (out / "assignment.csv").string() +
                " --out " + eval.string()),
            0);
  const auto metrics = nlohmann::json::parse(slurp(eval / "report.json"));
  EXPECT_EQ(metrics["nmi"], report["metrics"]["nmi"]);
}

TEST_F(Cli, ExtractHiddenWritesModel) {
  const auto out = root_ / "hidden";
  ASSERT_EQ(run("extract-hidden --manifest " + manifest_.string() + " --hidden-dim 2 --max-iter 20 --out " +
                out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "hidden_H.csv"));
  const auto model = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(model["r"], 2);
  EXPECT_EQ(model["q"].size(), 2u);
}

TEST_F(Cli, ProtocolsWriteReports) {
  const std::string base = " --manifest " + manifest_.string() + " --clusters 3 --repeats 2 --nmf-max-iter 30";
  ASSERT_EQ(run("sweep-beta" + base + " --beta 0,0.5,1 --out " + (root_ / "sweep").string()), 0);
  EXPECT_TRUE(fs::exists(root_ / "sweep" / "sweep.csv"));
  EXPECT_EQ(nlohmann::json::parse(slurp(root_ / "sweep" / "report.json"))["rows"].size(), 3u);

  ASSERT_EQ(run("grid" + base + " --eta 1 --beta 0,1 --hidden-dim 2 --lambda 1 --out " + (root_ / "grid").string()), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(root_ / "grid" / "report.json"))["cells"].size(), 2u);

  ASSERT_EQ(run("ablate" + base + " --out " + (root_ / "ablate").string()), 0);
  EXPECT_TRUE(nlohmann::json::parse(slurp(root_ / "ablate" / "report.json")).contains("arms"));
  EXPECT_TRUE(fs::exists(root_ / "ablate" / "trace.csv"));
}

TEST_F(Cli, ReportIsByteIdenticalAcrossThreadCounts) {
  const std::string base = "sweep-beta --manifest " + manifest_.string() +
                           " --clusters 3 --repeats 3 --beta 0,0.5 --seed 8 --out ";
  ASSERT_EQ(run(base + (root_ / "a").string() + " --threads 1"), 0);
  ASSERT_EQ(run(base + (root_ / "b").string() + " --threads 8"), 0);
  EXPECT_EQ(slurp(root_ / "a" / "report.json"), slurp(root_ / "b" / "report.json"));
}

TEST_F(Cli, FailuresEmitErrorJson) {
  const auto err = root_ / "err.txt";
  EXPECT_NE(run("fit --manifest " + (root_ / "missing.json").string() + " --clusters 2 --out " +
                (root_ / "x").string(),
                err),
            0);
  const auto e = nlohmann::json::parse(slurp(err));
  EXPECT_EQ(e["error"], "missing_file");
  EXPECT_TRUE(e.contains("message"));

  EXPECT_NE(run("fit --manifest " + manifest_.string() + " --clusters 3 --beta 2 --out " + (root_ / "y").string(),
                err),
            0);
  EXPECT_EQ(nlohmann::json::parse(slurp(err))["error"], "invalid_parameter");

  EXPECT_NE(run("fit --bogus", err), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(err))["error"], "usage");
}
