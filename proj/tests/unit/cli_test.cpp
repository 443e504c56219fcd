// Copyright 2026 The dpf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dpf/cli.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int status = 0;
  std::string out;
  std::string err;
};

CliResult invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = dpf::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& path) { return dpf::read_file(path); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dpf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "maps");
    fs::copy_file(dpf::testing::scenario_path("maps/ref-5x5.map"), dir_ / "maps/ref-5x5.map");
    std::string text = slurp(dpf::testing::scenario_path("ref-5x5.json"));
    // Keep the runs short.
    const auto pos = text.find("\"n_particles\": 10000");
    text.replace(pos, 20, "\"n_particles\": 500");
    std::ofstream(dir_ / "small.json") << text;
  }
  void TearDown() override { fs::remove_all(dir_); }

  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

TEST_F(CliTest, RunWritesAReproducibleCsv) {
  const auto first = invoke({"run", "--config", path("small.json"), "--out", path("a.csv")});
  ASSERT_EQ(first.status, 0) << first.err;
  EXPECT_EQ(first.out.rfind("mean_kl=", 0), 0U);
  const auto second = invoke({"run", "--config", path("small.json"), "--out", path("b.csv")});
  ASSERT_EQ(second.status, 0);
  const std::string csv = slurp(path("a.csv"));
  EXPECT_EQ(csv, slurp(path("b.csv")));
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,agent,kl_to_oracle,ess,scalars_sent_cum,msgs_sent_cum");
  EXPECT_EQ(count_lines(csv), 1U + 2U * 10U);
}

TEST_F(CliTest, SeedAndOracleOverrides) {
  ASSERT_EQ(invoke({"run", "--config", path("small.json"), "--out", path("a.csv"), "--seed", "5"}).status, 0);
  ASSERT_EQ(invoke({"run", "--config", path("small.json"), "--out", path("b.csv"), "--seed", "6"}).status, 0);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("b.csv")));
  const auto off = invoke({"run", "--config", path("small.json"), "--out", path("c.csv"), "--oracle", "off"});
  ASSERT_EQ(off.status, 0);
  EXPECT_NE(slurp(path("c.csv")).find(",NA,"), std::string::npos);
}

TEST_F(CliTest, JsonOutput) {
  const auto r = invoke({"run", "--config", path("small.json"), "--out", path("a.json"), "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_TRUE(doc.contains("rows"));
  EXPECT_EQ(doc["rows"].size(), 20U);
}

TEST_F(CliTest, SweepWritesOneRowPerStrategyAndRate) {
  const auto r = invoke({"sweep", "--config", path("small.json"), "--out", path("s.csv"), "--rates", "1,2,3,4,5",
                         "--strategies", "selective,baseline", "--repeats", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string csv = slurp(path("s.csv"));
  EXPECT_EQ(count_lines(csv), 11U);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "strategy,rate,repeats,bandwidth,messages,mean_kl,std_kl");
}

TEST_F(CliTest, EvalWritesReportAndMetrics) {
  const auto r = invoke({"eval", "--config", path("small.json"), "--out", path("oracle.csv"), "--metrics",
                         path("metrics.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string report = slurp(path("oracle.csv"));
  EXPECT_EQ(report.substr(0, report.find('\n')), "time,kl,ess");
  EXPECT_EQ(count_lines(report), 12U);
  EXPECT_EQ(count_lines(slurp(path("metrics.csv"))), 21U);
}

TEST_F(CliTest, DemoFig3) {
  const auto r = invoke({"demo-fig3", "--out", path("fig3.csv")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("far-side mass"), std::string::npos);
  const auto from_file = invoke({"demo-fig3", "--config", dpf::testing::scenario_path("fig3-corridor.json"), "--out",
                                 path("fig3b.csv")});
  ASSERT_EQ(from_file.status, 0) << from_file.err;
  EXPECT_EQ(slurp(path("fig3.csv")), slurp(path("fig3b.csv")));
}

TEST_F(CliTest, Validate) {
  EXPECT_EQ(invoke({"validate", "--config", path("small.json")}).status, 0);
  std::ofstream(path("bad.json")) << R"({"map": "maps/ref-5x5.map", "n_agents": 0, "horizon": 5})";
  const auto bad = invoke({"validate", "--config", path("bad.json")});
  EXPECT_NE(bad.status, 0);
  EXPECT_NE(bad.err.find("n_agents"), std::string::npos);
}

TEST_F(CliTest, FailuresAreNonzero) {
  EXPECT_NE(invoke({}).status, 0);
  EXPECT_NE(invoke({"frobnicate"}).status, 0);
  EXPECT_NE(invoke({"run", "--out", path("x.csv")}).status, 0);
  EXPECT_NE(invoke({"run", "--config", path("missing.json"), "--out", path("x.csv")}).status, 0);
  EXPECT_NE(invoke({"run", "--config", path("small.json"), "--out", path("x.csv"), "--format", "xml"}).status, 0);
  EXPECT_NE(invoke({"sweep", "--config", path("small.json"), "--out", path("x.csv"), "--rates", "0",
                    "--strategies", "baseline"})
                .status,
            0);
  EXPECT_NE(invoke({"sweep", "--config", path("small.json"), "--out", path("x.csv"), "--rates", "1",
                    "--strategies", "shout"})
                .status,
            0);
  const auto unwritable = invoke({"run", "--config", path("small.json"), "--out", path("no/such/dir/x.csv")});
  EXPECT_NE(unwritable.status, 0);
  EXPECT_EQ(unwritable.err.rfind("error:", 0), 0U);
}

}  // namespace
