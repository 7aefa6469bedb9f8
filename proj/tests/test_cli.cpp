#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MCP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mcp_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("experiment").code, 1);
  EXPECT_EQ(run("--version").code, 0);
}

TEST_F(Cli, GenerateListsCodebook) {
  const auto r = run("generate --n 4 --m 4 --families CONSTANT --budget 12");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 17);
  EXPECT_NE(r.out.find("CONSTANT:0000,CONSTANT,12"), std::string::npos);
}

TEST_F(Cli, MeasureThenSolve) {
  const auto m = run("measure --n 16 --m 4 --families CONSTANT,K_SPARSE --entry K_SPARSE:0100111010 "
                     "--d 6 --matrix-seed 3 --out " + path("rec.json") + " --export-matrix " +
                     path("a.bin"));
  ASSERT_EQ(m.code, 0);
  for (const char* extra : {"", " --matrix "}) {
    std::string args = "solve --families CONSTANT,K_SPARSE --budget 18 --record " + path("rec.json");
    if (std::string(extra).size()) args += extra + path("a.bin");
    const auto s = run(args);
    ASSERT_EQ(s.code, 0) << args;
    const auto j = nlohmann::json::parse(s.out);
    EXPECT_EQ(j.at("entry"), "K_SPARSE:0100111010");
    EXPECT_EQ(j.at("l2"), 0.0);
  }
  EXPECT_EQ(run("solve --families CONSTANT --budget 12 --record " + path("rec.json")).code, 2);
  EXPECT_EQ(run("solve --record " + path("missing.json")).code, 3);
}

TEST_F(Cli, ExperimentWritesReportAndHonoursOverrides) {
  write("cfg.json", R"({"experiment_id": "NOISELESS_SCALING", "n": 16, "m": 3, "d": 4,
                        "families": ["CONSTANT", "K_SPARSE"], "budget": 15, "trials": 5})");
  const auto a = run("experiment --config " + path("cfg.json") + " --seed 5 --trials 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("\"base_seed\":5"), std::string::npos);
  EXPECT_NE(a.out.find("\"trials\":3"), std::string::npos);
  const auto b = run("experiment --config " + path("cfg.json") + " --seed 5 --trials 3");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("experiment --config " + path("cfg.json") + " --format json --out " +
                path("r.json"))
                .code,
            0);
  std::ifstream in(path("r.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("records").size(), 5u);
}

TEST_F(Cli, ExperimentErrors) {
  write("bad.json", R"({"experiment_id": "NOISELESS_SCALING", "n": 16, "d": 4, "extra": 1})");
  EXPECT_EQ(run("experiment --config " + path("bad.json")).code, 1);
  EXPECT_EQ(run("experiment --config " + path("none.json")).code, 3);
  write("ok.json", R"({"experiment_id": "NOISELESS_SCALING", "n": 16, "m": 3, "d": 4, "trials": 2})");
  EXPECT_EQ(run("experiment --config " + path("ok.json") + " --out /nonexistent/x.csv").code, 3);
}

TEST_F(Cli, BoundsPrintsAllCalculators) {
  const auto r = run("bounds --kappa-bits 10 --m 6 --n 256 --d 320 --sigma 1 --r 4");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j.at("theorem2_bound").get<double>(), 0.5);
  EXPECT_EQ(j.at("rho").get<double>(), 0.125);
  EXPECT_EQ(j.at("event_bounds").size(), 6u);
  EXPECT_EQ(j.at("gamma").size(), 4u);
}

}  // namespace
