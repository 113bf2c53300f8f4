#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace mwsn::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mwsn-sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mwsn_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  static std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* kSmall = "node_count = 15\nsim_duration = 40\n";

TEST_F(CliTest, RunTwiceIsByteIdentical) {
  const auto cfg = write("s.cfg", kSmall);
  const auto a = invoke({"run", "--config", cfg, "--seed", "7", "--protocol", "e2rp"});
  const auto b = invoke({"run", "--config", cfg, "--seed", "7", "--protocol", "e2rp"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["protocol"], "e2rp");
}

TEST_F(CliTest, RunWritesFilesAndCsv) {
  const auto cfg = write("s.cfg", kSmall);
  const auto out = (dir_ / "r.csv").string();
  const auto trace = (dir_ / "t.log").string();
  const auto r = invoke({"run", "--config", cfg, "--format", "csv", "--out", out, "--trace", trace});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto csv = read(out);
  EXPECT_EQ(csv.rfind("seed,protocol,speed_max,pdf,network_lifetime,generated,delivered\n", 0), 0u);
  EXPECT_FALSE(read(trace).empty());
}

TEST_F(CliTest, SweepRowCountAndOrder) {
  const auto cfg = write("s.cfg", "node_count = 10\nsim_duration = 15\n");
  const auto r = invoke({"sweep", "--config", cfg, "--seeds", "10", "--protocols", "e2rp,aodv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows.front().substr(0, 7), "1,aodv,");
  EXPECT_EQ(rows.back().substr(0, 8), "10,e2rp,");
}

TEST_F(CliTest, SweepSpeedsAndSummary) {
  const auto cfg = write("s.cfg", "node_count = 10\nsim_duration = 15\n");
  const auto summary = (dir_ / "sum.csv").string();
  const auto r = invoke({"sweep", "--config", cfg, "--seeds", "2", "--protocols", "aodv",
                         "--speeds", "5,20", "--summary", summary});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = read(summary);
  EXPECT_NE(text.find("aodv,5,2,"), std::string::npos) << text;
  EXPECT_NE(text.find("aodv,20,2,"), std::string::npos) << text;
}

TEST_F(CliTest, ValidateNegativeEnergy) {
  const auto cfg = write("bad.cfg", "initial_energy = -2\n");
  const auto r = invoke({"validate", "--config", cfg});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("initial_energy"), std::string::npos);
  const auto good = write("good.cfg", kSmall);
  EXPECT_EQ(invoke({"validate", "--config", good}).code, 0);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({"run"}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", "/no/such/file.cfg"}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", write("s.cfg", kSmall), "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"run", "--config", write("s.cfg", kSmall), "--protocol", "dsr"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  const auto r = invoke({"run", "--config", write("s.cfg", kSmall), "--out", "/no/such/dir/x"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/no/such/dir/x"), std::string::npos);
}

#ifdef MWSN_SCENARIO_DIR
TEST_F(CliTest, ShippedScenariosValidate) {
  for (const auto& e : fs::directory_iterator(MWSN_SCENARIO_DIR)) {
    if (e.path().extension() != ".cfg") continue;
    EXPECT_EQ(invoke({"validate", "--config", e.path().string()}).code, 0) << e.path();
  }
}
#endif

}  // namespace
}  // namespace mwsn::cli
