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

#ifndef DPF_TESTS_TEST_SUPPORT_HPP
#define DPF_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dpf/eval.hpp"
#include "dpf/sensor.hpp"
#include "dpf/world.hpp"

namespace dpf::testing {

inline std::string scenario_path(const std::string& name) { return std::string(DPF_SCENARIO_DIR) + "/" + name; }

inline GridMap open_map(int width, int height) {
  std::string text;
  for (int y = 0; y < height; ++y) {
    text += std::string(static_cast<std::size_t>(width), '.') + "\n";
  }
  return load_map(text);
}

/// Upper-tail probability of Pearson's statistic for observed counts against expected probabilities.
inline double chi_square_p_value(const std::vector<double>& counts, const std::vector<double>& probs) {
  double total = 0.0;
  for (double c : counts) {
    total += c;
  }
  double stat = 0.0;
  int bins = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0.0) {
      continue;
    }
    const double expected = total * probs[i];
    stat += (counts[i] - expected) * (counts[i] - expected) / expected;
    ++bins;
  }
  if (bins < 2) {
    return 1.0;
  }
  boost::math::chi_squared dist(bins - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// |observed frequency - p| measured in binomial standard errors.
inline double standard_errors(double count, double total, double p) {
  const double se = std::sqrt(p * (1.0 - p) / total);
  return std::abs(count / total - p) / se;
}

/// A target path with every agent's reading at each step, agents in index order.
struct SimulatedLog {
  std::vector<Cell> target_path;
  MeasurementLog measurements;
};

/// Samples a uniform start, moves the target `horizon` times and senses from fixed poses.
inline SimulatedLog simulate_log(const GridMap& map, const std::vector<AgentPose>& poses, const MotionParams& motion,
                                 const SensorParams& sensor, Timestep horizon, std::uint64_t seed) {
  Rng world(derive_seed(seed, Stream::kWorld, 0));
  SimulatedLog log;
  const auto& free = map.free_cells();
  Cell target = free[uniform_index(world, free.size())];
  for (Timestep t = 0; t <= horizon; ++t) {
    if (t > 0) {
      target = step_target(map, motion, target, world);
    }
    log.target_path.push_back(target);
    auto& step = log.measurements.emplace_back();
    for (std::size_t a = 0; a < poses.size(); ++a) {
      Rng sensing(derive_seed(seed, Stream::kSensing, (static_cast<std::uint64_t>(t) << 16) + a));
      step.push_back(sense(map, poses[a], sensor, target, t, static_cast<AgentId>(a), sensing));
    }
  }
  return log;
}

}  // namespace dpf::testing

#endif
