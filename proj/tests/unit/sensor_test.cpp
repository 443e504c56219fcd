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

#include <map>

#include "dpf/sensor.hpp"
#include "test_support.hpp"

namespace {

using dpf::AgentPose;
using dpf::Cell;
using dpf::Fov;
using dpf::Heading;
using dpf::Measurement;
using dpf::SensorParams;

Measurement footprint_measurement(std::vector<Cell> visible, std::optional<Cell> detection) {
  Measurement m;
  m.id = {0, 0};
  m.visible = std::move(visible);
  m.detection = detection;
  return m;
}

std::vector<Cell> ten_cells() {
  std::vector<Cell> cells;
  for (int x = 0; x < 10; ++x) {
    cells.push_back({x, 0});
  }
  return cells;
}

TEST(Sense, TargetOutOfViewIsNeverDetected) {
  const auto map = dpf::load_map("..#..\n");
  dpf::Rng rng(1);
  const SensorParams params{1.0, 0.0, 4, Fov::kFull};
  for (int t = 0; t < 200; ++t) {
    const auto m = dpf::sense(map, AgentPose{{0, 0}, Heading::kEast}, params, {4, 0}, t, 3, rng);
    EXPECT_FALSE(m.detection);
    EXPECT_EQ(m.visible, (std::vector<Cell>{{0, 0}, {1, 0}}));
    EXPECT_EQ(m.id, (dpf::MeasurementId{3, t}));
  }
}

TEST(Sense, PerfectSensorReportsTheTarget) {
  const auto map = dpf::testing::open_map(5, 5);
  dpf::Rng rng(2);
  const SensorParams params{1.0, 0.0, 2, Fov::kFull};
  for (const Cell target : {Cell{2, 2}, Cell{3, 1}, Cell{4, 4}}) {
    const auto m = dpf::sense(map, AgentPose{{2, 2}, Heading::kNorth}, params, target, 0, 0, rng);
    ASSERT_TRUE(m.detection);
    EXPECT_EQ(*m.detection, target);
  }
}

TEST(Sense, DetectionFrequencyMatchesBernoulli) {
  const auto map = dpf::testing::open_map(3, 3);
  dpf::Rng rng(99);
  const SensorParams params{0.7, 0.0, 1, Fov::kFull};
  constexpr int kTrials = 100'000;
  int detected = 0;
  for (int i = 0; i < kTrials; ++i) {
    detected += dpf::sense(map, AgentPose{{1, 1}, Heading::kNorth}, params, {0, 1}, 0, 0, rng).detection ? 1 : 0;
  }
  EXPECT_LT(dpf::testing::standard_errors(detected, kTrials, 0.7), 3.0);
}

TEST(Sense, OutcomeFrequenciesMatchLikelihood) {
  const auto map = dpf::load_map("..\n..\n");
  const SensorParams params{0.9, 0.2, 1, Fov::kFull};
  const AgentPose pose{{0, 0}, Heading::kSouth};
  const Cell target{1, 1};
  dpf::Rng rng(5);
  constexpr int kTrials = 100'000;
  std::map<std::optional<Cell>, int> counts;
  Measurement last;
  for (int i = 0; i < kTrials; ++i) {
    last = dpf::sense(map, pose, params, target, 0, 0, rng);
    ++counts[last.detection];
  }
  std::vector<std::optional<Cell>> outcomes{std::nullopt};
  for (const Cell c : last.visible) {
    outcomes.emplace_back(c);
  }
  for (const auto& outcome : outcomes) {
    Measurement probe = last;
    probe.detection = outcome;
    const double p = dpf::likelihood(probe, target, params);
    if (p >= 0.01) {
      EXPECT_LT(dpf::testing::standard_errors(counts[outcome], kTrials, p), 3.0);
    }
  }
}

TEST(Likelihood, Examples) {
  const SensorParams params{0.9, 0.05, 4, Fov::kFull};
  const auto cells = ten_cells();
  EXPECT_DOUBLE_EQ(dpf::likelihood(footprint_measurement(cells, std::nullopt), {0, 5}, params), 1.0);
  EXPECT_NEAR(dpf::likelihood(footprint_measurement(cells, std::nullopt), {3, 0}, params), 0.1, 1e-15);
  EXPECT_NEAR(dpf::likelihood(footprint_measurement(cells, Cell{3, 0}), {3, 0}, params), 0.855, 1e-15);
  EXPECT_NEAR(dpf::likelihood(footprint_measurement(cells, Cell{3, 0}), {4, 0}, params), 0.9 * 0.05 / 9, 1e-15);
  EXPECT_EQ(dpf::likelihood(footprint_measurement(cells, Cell{3, 0}), {0, 5}, params), 0.0);
}

TEST(Likelihood, SingleCellFootprintKeepsTheNoiseMass) {
  const SensorParams params{0.8, 0.3, 0, Fov::kFull};
  EXPECT_DOUBLE_EQ(dpf::likelihood(footprint_measurement({{1, 1}}, Cell{1, 1}), {1, 1}, params), 0.8);
}

TEST(Likelihood, MalformedDetection) {
  const SensorParams params;
  EXPECT_THROW(dpf::likelihood(footprint_measurement({{0, 0}}, Cell{1, 1}), {0, 0}, params),
               dpf::MalformedMeasurementError);
}

TEST(Likelihood, SumsToOneOverOutcomes) {
  dpf::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const SensorParams params{0.05 + 0.95 * dpf::uniform01(rng), 0.99 * dpf::uniform01(rng), 3, Fov::kFull};
    std::vector<Cell> visible;
    for (int x = 0; x < 12; ++x) {
      if (dpf::uniform01(rng) < 0.5) {
        visible.push_back({x, 0});
      }
    }
    if (visible.empty()) {
      visible.push_back({0, 0});
    }
    for (int x = 0; x < 12; ++x) {
      const Cell where{x, 0};
      double total = dpf::likelihood(footprint_measurement(visible, std::nullopt), where, params);
      for (const Cell d : visible) {
        total += dpf::likelihood(footprint_measurement(visible, d), where, params);
      }
      if (std::binary_search(visible.begin(), visible.end(), where)) {
        EXPECT_NEAR(total, 1.0, 1e-12);
      } else {
        // Outside the footprint the only possible outcome is "nothing seen".
        EXPECT_EQ(dpf::likelihood(footprint_measurement(visible, std::nullopt), where, params), 1.0);
      }
    }
  }
}

TEST(Likelihood, ZeroOnlyForDetectionsThatExcludeTheCell) {
  const SensorParams params{0.9, 0.1, 3, Fov::kFull};
  const std::vector<Cell> visible{{0, 0}, {1, 0}, {2, 0}};
  for (int x = 0; x < 5; ++x) {
    const Cell where{x, 0};
    const bool inside = x < 3;
    EXPECT_GT(dpf::likelihood(footprint_measurement(visible, std::nullopt), where, params), 0.0);
    for (const Cell d : visible) {
      const double p = dpf::likelihood(footprint_measurement(visible, d), where, params);
      EXPECT_EQ(p == 0.0, !inside);
    }
  }
}

TEST(MeasurementRecord, RoundTripsAndIsByteStable) {
  const auto map = dpf::load_map(
      "......\n"
      ".##...\n"
      "......\n");
  dpf::Rng rng(8);
  const SensorParams params{0.9, 0.3, 3, Fov::kFull};
  for (int i = 0; i < 100; ++i) {
    const auto& cells = map.free_cells();
    const Cell pose = cells[dpf::uniform_index(rng, cells.size())];
    const Cell target = cells[dpf::uniform_index(rng, cells.size())];
    const auto m = dpf::sense(map, AgentPose{pose, Heading::kNorth}, params, target, i, i % 4, rng);
    const auto text = dpf::to_record(m);
    const auto parsed = dpf::parse_record(text);
    EXPECT_EQ(parsed, m);
    EXPECT_EQ(dpf::to_record(parsed), text);
  }
  EXPECT_EQ(dpf::to_record(footprint_measurement({{0, 0}, {1, 0}}, Cell{1, 0})), "0:0 0 0 2 0 0 1 0 1 0");
  EXPECT_THROW(dpf::parse_record("0:0 0 0 2 0 0"), dpf::FormatError);
  EXPECT_THROW(dpf::parse_record("garbage"), dpf::FormatError);
}

TEST(SensorParams, Validation) {
  EXPECT_THROW((SensorParams{0.0, 0.0, 1, Fov::kFull}.validate()), dpf::ValidationError);
  EXPECT_THROW((SensorParams{0.5, 1.0, 1, Fov::kFull}.validate()), dpf::ValidationError);
  EXPECT_NO_THROW((SensorParams{1.0, 0.0, 0, Fov::kFull}.validate()));
}

}  // namespace
