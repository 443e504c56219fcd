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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "dpf/config.hpp"
#include "dpf/demo.hpp"
#include "test_support.hpp"

namespace {

std::vector<std::string> parse_errors(const std::string& text) {
  std::vector<std::string> errors;
  (void)dpf::parse_config(text, DPF_SCENARIO_DIR, errors);
  return errors;
}

bool mentions(const std::vector<std::string>& errors, const std::string& field) {
  return std::any_of(errors.begin(), errors.end(), [&](const std::string& e) { return e.find(field) != std::string::npos; });
}

TEST(Config, BundledScenariosAreValid) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(DPF_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") {
      continue;
    }
    ++count;
    EXPECT_TRUE(dpf::validate_config(entry.path()).empty()) << entry.path();
    EXPECT_NO_THROW((void)dpf::load_config(entry.path())) << entry.path();
  }
  EXPECT_GE(count, 2);
}

TEST(Config, ReferenceScenarioFields) {
  const auto c = dpf::load_config(dpf::testing::scenario_path("ref-5x5.json"));
  EXPECT_EQ(c.name, "ref-5x5");
  EXPECT_EQ(c.map->width(), 5);
  EXPECT_EQ(c.map->free_count(), 23U);
  EXPECT_EQ(c.n_agents, 2);
  ASSERT_EQ(c.agents.size(), 2U);
  EXPECT_EQ(c.agents[1].pose.cell, (dpf::Cell{4, 4}));
  EXPECT_EQ(c.agents[1].pose.heading, dpf::Heading::kWest);
  EXPECT_TRUE(c.target_start.empty());
  EXPECT_DOUBLE_EQ(c.sensor.p_detect, 0.9);
  EXPECT_EQ(c.sensor.max_range, 2);
  EXPECT_EQ(c.filter.n_particles, 10'000U);
  EXPECT_EQ(c.comm.strategy, dpf::Strategy::kSelective);
  EXPECT_EQ(c.oracle, dpf::OracleMode::kExact);
}

TEST(Config, CorridorFileMatchesTheBuiltInDemo) {
  const auto file = dpf::load_config(dpf::testing::scenario_path("fig3-corridor.json"));
  const auto builtin = dpf::corridor_scenario();
  EXPECT_EQ(*file.map, *builtin.map);
  EXPECT_EQ(file.target_start, builtin.target_start);
  EXPECT_EQ(file.target_script, builtin.target_script);
  EXPECT_EQ(file.horizon, builtin.horizon);
  ASSERT_EQ(file.agents.size(), builtin.agents.size());
  for (std::size_t i = 0; i < file.agents.size(); ++i) {
    EXPECT_EQ(file.agents[i].pose, builtin.agents[i].pose);
  }
}

TEST(Config, ErrorsNameTheOffendingField) {
  const std::string base = R"({"map": "maps/ref-5x5.map", "horizon": 5, )";
  EXPECT_TRUE(mentions(parse_errors(base + R"("n_agents": 0})"), "n_agents"));
  EXPECT_TRUE(mentions(parse_errors(base + R"("n_agents": 3, "k_nbr": 3})"), "k_nbr"));
  EXPECT_TRUE(mentions(parse_errors(base + R"("n_agents": 2, "k_nbr": 1, "sensor": {"p_detect": 1.5}})"), "p_detect"));
  EXPECT_TRUE(mentions(parse_errors(base + R"("n_agents": 2, "k_nbr": 1, "comm": {"strategy": "gossip"}})"),
                       "comm.strategy"));
  EXPECT_TRUE(mentions(parse_errors(base + R"("n_agents": "two"})"), "n_agents"));
  EXPECT_TRUE(mentions(parse_errors(R"({"map": "maps/missing.map", "n_agents": 1, "k_nbr": 0})"), "map"));
  EXPECT_TRUE(mentions(parse_errors(R"({"map": )"), "syntax"));
  EXPECT_TRUE(mentions(parse_errors(base + R"("n_agents": 1, "k_nbr": 0, "agents": [{"cell": [1, 1]}]})"), "agents[0]"));
  EXPECT_TRUE(parse_errors(base + R"("n_agents": 2, "k_nbr": 1})").empty());
}

TEST(Config, LoadThrowsListingProblems) {
  const auto dir = std::filesystem::temp_directory_path() / "dpf_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "bad.json";
  {
    std::ofstream(path) << R"({"map": "nowhere.map", "n_agents": 0})";
  }
  try {
    (void)dpf::load_config(path);
    FAIL() << "expected a validation error";
  } catch (const dpf::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("map"), std::string::npos);
  }
  EXPECT_THROW((void)dpf::load_config(dir / "absent.json"), dpf::IoError);
}

}  // namespace
