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


#ifndef DPF_EVAL_HPP
#define DPF_EVAL_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dpf/errors.hpp"
#include "dpf/filter.hpp"
#include "dpf/grid_dist.hpp"
#include "dpf/sensor.hpp"
#include "dpf/world.hpp"

namespace dpf {

/// Measurements grouped by timestep: element t holds everything sensed at time t.
using MeasurementLog = std::vector<std::vector<Measurement>>;

/// Exact forward algorithm over the free cells of a map.
class ForwardFilter {
 public:
  ForwardFilter(const GridMap& map, const MotionParams& motion, const SensorParams& sensor, GridDist prior)
      : map_(&map), motion_(motion), sensor_(sensor), belief_(std::move(prior)) {
    belief_.check_map(map);
    rows_.reserve(map.free_count());
    for (const Cell& c : map.free_cells()) {
      rows_.push_back(kernel_row(map, motion, c));
    }
  }

  [[nodiscard]] const GridDist& belief() const noexcept { return belief_; }

  /// Applies the motion kernel once.
  void predict() {
    GridDist next(*map_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double mass = belief_[i];
      if (mass == 0.0) {
        continue;
      }
      for (std::size_t k = 0; k < rows_[i].to.size(); ++k) {
        next[static_cast<std::size_t>(map_->free_index(rows_[i].to[k]))] += mass * rows_[i].prob[k];
      }
    }
    belief_ = std::move(next);
  }

  /// Multiplies in the exact likelihood of `m` (no floor) and renormalizes.
  void update(const Measurement& m) {
    const auto& cells = map_->free_cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      belief_[i] *= likelihood(m, cells[i], sensor_);
    }
    if (belief_.normalize() <= 0.0) {
      throw DegenerateEvidenceError("measurement " + to_string(m.id) + " has zero probability under the model");
    }
  }

 private:
  const GridMap* map_;
  MotionParams motion_;
  SensorParams sensor_;
  GridDist belief_;
  std::vector<KernelRow> rows_;
};

/// Default dense budget for exact inference, in (free cells x timesteps).
inline constexpr std::size_t kDefaultOracleBudget = 50'000'000;

/// Exact filtered marginal p(x_T | all measurements up to T).
/**
 * Evidence at time 0 is applied to the prior directly; every later step predicts first and then
 * applies that step's measurements.
 */
inline GridDist brute_force_posterior(const GridMap& map, const MotionParams& motion, const SensorParams& sensor,
                                      const GridDist& prior, const MeasurementLog& measurements, Timestep horizon,
                                      std::size_t budget = kDefaultOracleBudget) {
  if (map.free_count() * static_cast<std::size_t>(horizon + 1) > budget) {
    throw CapacityError("exact oracle needs " + std::to_string(map.free_count()) + " cells x " +
                        std::to_string(horizon + 1) + " steps, over budget " + std::to_string(budget));
  }
  ForwardFilter exact(map, motion, sensor, prior);
  for (Timestep t = 0; t <= horizon; ++t) {
    if (t > 0) {
      exact.predict();
    }
    if (static_cast<std::size_t>(t) < measurements.size()) {
      for (const auto& m : measurements[static_cast<std::size_t>(t)]) {
        exact.update(m);
      }
    }
  }
  return exact.belief();
}

/// Laplace pseudocount spreading one observation over the map.
inline double default_laplace_alpha(const GridMap& map) { return 1.0 / static_cast<double>(map.free_count()); }

/// KL(p' || q') in nats after Laplace smoothing both histograms with pseudocount `alpha`.
inline double kl_grid(const GridDist& p, const GridDist& q, double alpha) {
  if (!p.same_support(q)) {
    throw DomainError("kl_grid over distributions from different maps");
  }
  if (!(alpha > 0.0)) {
    throw DomainError("Laplace pseudocount must be positive");
  }
  const double z = 1.0 + alpha * static_cast<double>(p.size());
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ps = (p[i] + alpha) / z;
    const double qs = (q[i] + alpha) / z;
    kl += ps * std::log(ps / qs);
  }
  return std::max(0.0, kl);
}

/// Multiplicative combination of local posteriors over a static state: prior * prod(local / prior), normalized.
inline std::vector<double> combine_static_evidence(std::span<const double> prior,
                                                   const std::vector<std::vector<double>>& locals) {
  std::vector<double> out(prior.begin(), prior.end());
  for (const auto& local : locals) {
    if (local.size() != prior.size()) {
      throw DomainError("local posterior support differs from prior support");
    }
    for (std::size_t x = 0; x < prior.size(); ++x) {
      if (prior[x] <= 0.0) {
        if (local[x] > 0.0) {
          throw DomainError("local posterior puts mass where the prior has none");
        }
        out[x] = 0.0;
        continue;
      }
      out[x] *= local[x] / prior[x];
    }
  }
  double total = 0.0;
  for (double v : out) {
    total += v;
  }
  if (total <= 0.0) {
    throw DegenerateEvidenceError("local posteriors have disjoint support");
  }
  for (double& v : out) {
    v /= total;
  }
  return out;
}

/// The static combination rule applied to momentary marginals of a dynamic state.
/**
 * This estimator is wrong for moving targets; it exists to demonstrate how it fails.
 */
inline GridDist momentary_product(const std::vector<GridDist>& marginals, const GridDist& prior) {
  std::vector<std::vector<double>> locals;
  locals.reserve(marginals.size());
  for (const auto& m : marginals) {
    if (!m.same_support(prior)) {
      throw DomainError("marginal defined over a different map");
    }
    locals.emplace_back(m.masses().begin(), m.masses().end());
  }
  const auto combined = combine_static_evidence(prior.masses(), locals);
  GridDist out = prior;
  std::copy(combined.begin(), combined.end(), out.masses().begin());
  return out;
}

/// One particle filter that receives every agent's measurement at its true timestep.
class FullCommFilter {
 public:
  FullCommFilter(const GridMap& map, const MotionParams& motion, const SensorParams& sensor,
                 const FilterParams& params, const Prior& prior, Rng rng)
      : map_(&map), motion_(motion), sensor_(sensor), floor_(params.weight_floor), rng_(std::move(rng)),
        belief_(init_belief(map, prior, params, rng_)) {}

  [[nodiscard]] const ParticleBelief& belief() const noexcept { return belief_; }

  /// Propagates to the next timestep.
  void advance() { belief_.propagate(*map_, motion_, rng_); }

  /// Incorporates the current step's measurements in agent order.
  void observe(std::span<const Measurement> step) {
    for (const auto& m : step) {
      belief_.incorporate(m, sensor_, floor_);
    }
  }

  [[nodiscard]] GridDist marginal() const { return belief_.marginal_at(*map_, belief_.now()); }

 private:
  const GridMap* map_;
  MotionParams motion_;
  SensorParams sensor_;
  double floor_;
  Rng rng_;
  ParticleBelief belief_;
};

/// Per-step marginals (times 0..horizon) of the full-communication particle filter.
inline std::vector<GridDist> full_comm_filter(const GridMap& map, const MotionParams& motion,
                                              const SensorParams& sensor, const FilterParams& params,
                                              const Prior& prior, const MeasurementLog& measurements,
                                              Timestep horizon, Rng rng) {
  FullCommFilter filter(map, motion, sensor, params, prior, std::move(rng));
  std::vector<GridDist> out;
  for (Timestep t = 0; t <= horizon; ++t) {
    if (t > 0) {
      filter.advance();
    }
    if (static_cast<std::size_t>(t) < measurements.size()) {
      filter.observe(measurements[static_cast<std::size_t>(t)]);
    }
    out.push_back(filter.marginal());
  }
  return out;
}

/// Exact prior marginal at time T under motion alone.
inline GridDist motion_prior(const GridMap& map, const MotionParams& motion, const GridDist& prior, Timestep horizon) {
  return brute_force_posterior(map, motion, SensorParams{}, prior, {}, horizon);
}

}  // namespace dpf

#endif
