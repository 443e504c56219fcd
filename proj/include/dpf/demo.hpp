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


#ifndef DPF_DEMO_HPP
#define DPF_DEMO_HPP

#include <iomanip>
#include <memory>
#include <ostream>
#include <vector>

#include "dpf/engine.hpp"
#include "dpf/eval.hpp"

namespace dpf {

/// Two guards, each watching one of the two corridors that join the west and east rooms.
inline constexpr const char* kCorridorMap =
    "#######\n"
    "#.....#\n"
    "#.###.#\n"
    "#.....#\n"
    "#######\n";

/// The east room: reachable from the start region only through a watched corridor.
inline std::vector<Cell> corridor_far_side() { return {{5, 1}, {5, 2}, {5, 3}}; }

/// Corridor scenario: the target starts (and stays) in the west room, the guards never see it.
inline ScenarioConfig corridor_scenario() {
  ScenarioConfig config;
  config.name = "fig3-corridor";
  config.map = std::make_shared<const GridMap>(load_map(kCorridorMap));
  config.n_agents = 2;
  config.agents = {AgentSpec{AgentPose{{3, 1}, Heading::kEast}, {}}, AgentSpec{AgentPose{{3, 3}, Heading::kEast}, {}}};
  config.target_start = {{1, 1}, {1, 2}, {1, 3}};
  config.target_script = {{1, 2}};
  config.motion.p_stay = 0.2;
  config.sensor = SensorParams{1.0, 0.0, 1, Fov::kFull};
  config.filter.n_particles = 16;
  config.comm.strategy = Strategy::kNone;
  config.k_nbr = 1;
  config.horizon = 24;
  config.oracle = OracleMode::kOff;
  return config;
}

struct CorridorDemo {
  std::shared_ptr<const GridMap> map;
  GridDist prior;                ///< Motion-only marginal at the horizon.
  GridDist exact;                ///< Posterior given both guards' data.
  std::vector<GridDist> locals;  ///< Each guard's posterior from its own data alone.
  GridDist product;              ///< Momentary combination of the local posteriors.
  double exact_far_side = 0.0;
  double product_far_side = 0.0;
};

inline double mass_in(const GridMap& map, const GridDist& dist, const std::vector<Cell>& region) {
  double total = 0.0;
  for (const Cell& c : region) {
    total += dist.mass(map, c);
  }
  return total;
}

/// Compares the exact posterior with the momentary product of per-guard exact posteriors.
inline CorridorDemo run_corridor_demo(const ScenarioConfig& config, const std::vector<Cell>& far_side) {
  const RunResult run = run_detailed(config);
  const GridMap& map = *config.map;
  const GridDist start = scenario_prior_dist(config);
  const Timestep horizon = config.horizon;

  CorridorDemo demo{config.map, motion_prior(map, config.motion, start, horizon),
                    brute_force_posterior(map, config.motion, config.sensor, start, run.measurements, horizon),
                    {},
                    GridDist(map)};
  for (AgentId a = 0; a < config.n_agents; ++a) {
    MeasurementLog own(run.measurements.size());
    for (std::size_t t = 0; t < run.measurements.size(); ++t) {
      own[t].push_back(run.measurements[t][static_cast<std::size_t>(a)]);
    }
    demo.locals.push_back(brute_force_posterior(map, config.motion, config.sensor, start, own, horizon));
  }
  demo.product = momentary_product(demo.locals, demo.prior);
  demo.exact_far_side = mass_in(map, demo.exact, far_side);
  demo.product_far_side = mass_in(map, demo.product, far_side);
  return demo;
}

/// `x,y,prior,exact,local_0,...,product` for every free cell.
inline void write_corridor_csv(std::ostream& out, const CorridorDemo& demo) {
  out << std::setprecision(10) << "x,y,prior,exact";
  for (std::size_t i = 0; i < demo.locals.size(); ++i) {
    out << ",local_" << i;
  }
  out << ",product\n";
  const auto& cells = demo.map->free_cells();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out << cells[k].x << ',' << cells[k].y << ',' << demo.prior[k] << ',' << demo.exact[k];
    for (const auto& l : demo.locals) {
      out << ',' << l[k];
    }
    out << ',' << demo.product[k] << '\n';
  }
}

}  // namespace dpf

#endif
