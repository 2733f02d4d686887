#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ripple/mesh_io.hpp"
#include "ripple/procedural.hpp"
#include "ripple/ripl_format.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ripple_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with stdout captured; returns the exit status.
  int run(const std::string& args, std::string* out = nullptr) {
    const auto stdout_file = dir_ / "stdout.txt";
    const std::string cmd = std::string(RIPPLE_CLI_PATH) + " " + args + " > " + stdout_file.string() + " 2> " +
                            (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    if (out) *out = slurp(stdout_file);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, TokenizeWritesExpectedTokenCount) {
  ripple::write_obj(path("ico.obj"), ripple::procedural::icosphere(2));
  ASSERT_EQ(run("tokenize " + path("ico.obj") + " -o " + path("out")), 0);
  const auto file = ripple::read_ripl(path("out/ico.ripl"));
  EXPECT_EQ(file.sequence.tokens.size(), 9u * 320u + 3u);
  EXPECT_TRUE(fs::exists(path("out/tokenize_stats.csv")));

  ASSERT_EQ(run("tokenize " + path("ico.obj") + " --format jsonl -o " + path("jl")), 0);
  EXPECT_TRUE(fs::exists(path("jl/ico.jsonl")));

  ASSERT_EQ(run("detokenize " + path("out/ico.ripl") + " -o " + path("back")), 0);
  EXPECT_EQ(ripple::read_mesh(path("back/ico.obj")).faces.size(), 320u);
}

TEST_F(Cli, ParallelOutputMatchesSerial) {
  fs::create_directories(path("in"));
  for (int i = 0; i < 100; ++i) {
    const auto mesh = i % 2 ? ripple::procedural::torus(8 + i % 13, 5 + i % 7)
                            : ripple::procedural::grid_patch(4 + i % 9, 3 + i % 5, 0.1);
    char name[32];
    std::snprintf(name, sizeof name, "in/m%03d.obj", i);
    ripple::write_obj(path(name), mesh);
  }
  ASSERT_EQ(run("tokenize " + path("in") + " -j 1 -o " + path("serial")), 0);
  ASSERT_EQ(run("tokenize " + path("in") + " -j 8 -o " + path("parallel")), 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(path("serial"))) {
    const auto other = fs::path(path("parallel")) / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
    ++files;
  }
  EXPECT_EQ(files, 101u);

  ASSERT_EQ(run("filter " + path("in") + " -j 1 -o " + path("f1")), 0);
  ASSERT_EQ(run("filter " + path("in") + " -j 8 -o " + path("f8")), 0);
  EXPECT_EQ(slurp(path("f1/filter_summary.csv")), slurp(path("f8/filter_summary.csv")));
}

TEST_F(Cli, ExitCodes) {
  std::ofstream(path("broken.obj")) << "v 0 0 0\nf 1 2 3\n";
  ripple::write_obj(path("good.obj"), ripple::procedural::cube());
  EXPECT_EQ(run("tokenize " + path("good.obj") + " " + path("broken.obj") + " -o " + path("out")), 1);
  EXPECT_TRUE(fs::exists(path("out/good.ripl")));
  EXPECT_EQ(run("tokenize --no-such-flag"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("eval " + path("good.obj")), 2);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, MasksPerWindow) {
  ripple::write_obj(path("torus.obj"), ripple::procedural::torus(50, 25));
  ASSERT_EQ(run("masks " + path("torus.obj") + " --window 1000 -o " + path("m")), 0);
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(path("m"))) count += e.path().extension() == ".ripm";
  EXPECT_EQ(count, 3u);
  EXPECT_TRUE(fs::exists(path("m/torus.w002.ripm")));
}

TEST_F(Cli, EvalPrintsJson) {
  ripple::write_obj(path("a.obj"), ripple::procedural::icosphere(1));
  std::string out;
  ASSERT_EQ(run("eval " + path("a.obj") + " " + path("a.obj") + " --samples 128", &out), 0);
  const auto j = nlohmann::json::parse(out);
  EXPECT_EQ(j["CD"], 0.0);
  EXPECT_EQ(j["HD"], 0.0);
  EXPECT_EQ(j["NC"], 1.0);
  EXPECT_EQ(j["samples"], 128);
}

TEST_F(Cli, RoundtripAndReplayOnCorpus) {
  EXPECT_EQ(run("roundtrip --corpus"), 0);
  ASSERT_EQ(run("corpus -o " + path("corpus")), 0);
  ASSERT_EQ(run("tokenize " + path("corpus") + " -o " + path("tok")), 0);
  EXPECT_EQ(run("replay " + path("tok") + " --trace -o " + path("trace")), 0);
  std::size_t traces = 0;
  for (const auto& e : fs::directory_iterator(path("trace"))) traces += e.path().string().ends_with(".trace.jsonl");
  EXPECT_EQ(traces, ripple::procedural::corpus().size());
}
