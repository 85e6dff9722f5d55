#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rhi/report.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = RHI_CLI_PATH;
const std::string kFixtures = RHI_FIXTURE_DIR;

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "rhi_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream cfg(dir_ / "small.cfg");
    cfg << "rhi-config 1\nsequences = 2\nbootstrap = 50\n";
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >" + (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static std::string cfg() { return "--config " + path("small.cfg"); }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("train --in x"), 1);
  EXPECT_EQ(run("gen-synth --out " + path("g") + " --windows 1"), 1);
  EXPECT_EQ(run("gen-synth --out " + path("g") + " --descriptor rgb"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(run("train --in " + kFixtures + "/gap.rhis --out " + path("m.rhim")), 2);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("person bob missing frame 13"), std::string::npos);
  EXPECT_EQ(run("train --in /nonexistent.rhis --out " + path("m.rhim")), 2);
  EXPECT_EQ(run("evaluate --in " + kFixtures + "/two_person_100.rhis --out " + path("e") +
                " --config /nonexistent.cfg"),
            2);
}

TEST_F(CliTest, EndToEnd) {
  ASSERT_EQ(run("gen-synth --out " + path("data") + " --folds 2 " + cfg()), 0);
  ASSERT_TRUE(fs::exists(dir_ / "data" / "manifest.txt"));
  ASSERT_EQ(run("train --in " + path("data/manifest.txt") + " --out " + path("model.rhim") + " " + cfg()), 0);
  ASSERT_EQ(run("assign --model " + path("model.rhim") + " --in " + kFixtures + "/two_person_100.rhis --out " +
                path("assign.txt")),
            0);
  EXPECT_EQ(slurp(dir_ / "assign.txt").rfind("rhi-assignments 1", 0), 0u);
  ASSERT_EQ(run("extract --in " + kFixtures + "/single_person.rhis --out " + path("feat.txt") + " " + cfg()), 0);
  EXPECT_EQ(slurp(dir_ / "feat.txt").rfind("rhi-features 1", 0), 0u);

  ASSERT_EQ(run("evaluate --in " + path("data/manifest.txt") + " --out " + path("eval1") + " " + cfg()), 0);
  ASSERT_EQ(run("evaluate --in " + path("data/manifest.txt") + " --out " + path("eval2") + " " + cfg()), 0);
  const std::string json = slurp(dir_ / "eval1" / "report.json");
  EXPECT_EQ(json, slurp(dir_ / "eval2" / "report.json"));
  const rhi::EvaluationReport r = rhi::report_from_json(json);
  EXPECT_EQ(r.folds.size(), 2u);

  ASSERT_EQ(run("report --in " + path("eval1/report.json")), 0);
  EXPECT_EQ(slurp(dir_ / "stdout.txt"), rhi::render_report_table(r));
  EXPECT_EQ(slurp(dir_ / "eval1" / "report.txt"), rhi::render_report_table(r));

  ASSERT_EQ(run("evaluate --model " + path("model.rhim") + " --in " + kFixtures + "/two_person_100.rhis --out " +
                path("fixed")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "fixed" / "report.json"));

  // A corrupted model fails cleanly and leaves no report behind.
  std::string model = slurp(dir_ / "model.rhim");
  model[model.size() / 2] = model[model.size() / 2] == '1' ? '2' : '1';
  std::ofstream(dir_ / "bad.rhim") << model;
  EXPECT_EQ(run("evaluate --model " + path("bad.rhim") + " --in " + kFixtures + "/two_person_100.rhis --out " +
                path("bad")),
            2);
  EXPECT_FALSE(fs::exists(dir_ / "bad" / "report.json"));
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("corrupted"), std::string::npos);
  std::ofstream(dir_ / "short.rhim") << model.substr(0, model.size() / 3);
  EXPECT_EQ(run("assign --model " + path("short.rhim") + " --in " + kFixtures + "/two_person_100.rhis"), 2);
}

}  // namespace
