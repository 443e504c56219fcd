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


#ifndef DPF_FILTER_HPP
#define DPF_FILTER_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <ostream>
#include <span>
#include <tuple>
#include <variant>
#include <vector>

#include "dpf/errors.hpp"
#include "dpf/grid_dist.hpp"
#include "dpf/random.hpp"
#include "dpf/sensor.hpp"
#include "dpf/world.hpp"

namespace dpf {

struct FilterParams {
  std::size_t n_particles = 1000;
  int window = 20;            ///< History window: states and measurements older than now - window are dropped.
  double weight_floor = 1e-6; ///< Lower bound applied to every likelihood before normalization.

  void validate() const {
    if (n_particles < 2) {
      throw ValidationError("filter.n_particles must be at least 2");
    }
    if (window < 1) {
      throw ValidationError("filter.window must be at least 1");
    }
    if (!(weight_floor > 0.0 && weight_floor <= 1e-3)) {
      throw ValidationError("filter.weight_floor must lie in (0, 1e-3]");
    }
  }
};

/// A weighted state trajectory over the belief window.
struct TrajectoryParticle {
  std::vector<Cell> states;
  double weight = 0.0;
};

/// n trajectories of equal length stored row-major, plus their weights.
class ParticleSet {
 public:
  ParticleSet() = default;
  ParticleSet(std::size_t n, std::size_t length) : length_(length), states_(n * length), weights_(n, 1.0 / static_cast<double>(n)) {}

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::size_t length() const noexcept { return length_; }

  [[nodiscard]] std::span<const Cell> trajectory(std::size_t i) const {
    return {states_.data() + i * length_, length_};
  }
  [[nodiscard]] std::span<Cell> trajectory(std::size_t i) { return {states_.data() + i * length_, length_}; }

  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<double> weights() noexcept { return weights_; }

  friend bool operator==(const ParticleSet&, const ParticleSet&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<Cell> states_;
  std::vector<double> weights_;
};

/// Ancestor indices by systematic resampling: one offset `u` in [0, 1) shared by n evenly spaced pointers.
inline std::vector<std::size_t> systematic_resample(std::span<const double> weights, double u) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> ancestors(n);
  double total = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += weights[i];
    if (weights[i] > 0.0) {
      last_positive = i;
    }
  }
  const double step = total / static_cast<double>(n);
  double pointer = u * step;
  double cumulative = weights.empty() ? 0.0 : weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (pointer >= cumulative && j < last_positive) {
      ++j;
      cumulative += weights[j];
    }
    ancestors[i] = j;
    pointer += step;
  }
  return ancestors;
}

/// Measurements held by one agent, keyed by id and bounded to the freshness window.
class MeasurementDb {
 public:
  /// Inserts `m` iff its id is new and it is no older than `now - window`; evicts stale entries first.
  bool insert(const Measurement& m, Timestep now, int window) {
    evict(now, window);
    if (m.time < now - window || entries_.contains(m.id)) {
      return false;
    }
    entries_.emplace(m.id, m);
    return true;
  }

  /// Drops every entry older than `now - window`.
  void evict(Timestep now, int window) {
    std::erase_if(entries_, [&](const auto& kv) { return kv.second.time < now - window; });
  }

  [[nodiscard]] bool contains(const MeasurementId& id) const { return entries_.contains(id); }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] const std::map<MeasurementId, Measurement>& entries() const noexcept { return entries_; }

  /// Entries with time `s`, in replay order (agent id, then id).
  [[nodiscard]] std::vector<const Measurement*> at_time(Timestep s) const {
    std::vector<const Measurement*> out;
    for (const auto& [id, m] : entries_) {
      if (m.time == s) {
        out.push_back(&m);
      }
    }
    std::sort(out.begin(), out.end(), [](const Measurement* a, const Measurement* b) {
      return std::tie(a->agent, a->id) < std::tie(b->agent, b->id);
    });
    return out;
  }

 private:
  std::map<MeasurementId, Measurement> entries_;
};

/// Prior over the initial state: uniform over all free cells, or uniform over an explicit region.
struct UniformPrior {};
using Prior = std::variant<UniformPrior, std::vector<Cell>>;

/// Sliding-window trajectory particle filter with snapshots for replay.
/**
 * The belief holds n trajectories covering timesteps [window_start, now], where
 * window_start = max(0, now - window). For every timestep s in that range it also keeps a
 * snapshot of the particle set as it stood when s was entered (after propagation, before
 * any evidence for s), which is what `resimulate` restores.
 */
class ParticleBelief {
 public:
  struct Snapshot {
    Timestep time = 0;
    Timestep window_start = 0;
    ParticleSet particles;
  };

  ParticleBelief(ParticleSet particles, int window) : particles_(std::move(particles)), window_(window) {
    snapshots_.push_back(Snapshot{0, 0, particles_});
  }

  [[nodiscard]] std::size_t size() const noexcept { return particles_.size(); }
  [[nodiscard]] Timestep now() const noexcept { return now_; }
  [[nodiscard]] Timestep window_start() const noexcept { return window_start_; }
  [[nodiscard]] int window() const noexcept { return window_; }
  [[nodiscard]] const ParticleSet& particles() const noexcept { return particles_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return particles_.weights(); }
  [[nodiscard]] const std::deque<Snapshot>& snapshots() const noexcept { return snapshots_; }

  [[nodiscard]] TrajectoryParticle particle(std::size_t i) const {
    const auto states = particles_.trajectory(i);
    return {std::vector<Cell>(states.begin(), states.end()), particles_.weights()[i]};
  }

  /// State of particle `i` at absolute time `s` (window_start <= s <= now).
  [[nodiscard]] Cell state_at(std::size_t i, Timestep s) const {
    return particles_.trajectory(i)[static_cast<std::size_t>(s - window_start_)];
  }

  /// Resamples ancestors by weight and extends each trajectory by one motion-model step.
  /**
   * Draw order: one uniform for systematic resampling, then one motion draw per particle in
   * index order. Weights reset to 1/n; the oldest state is dropped once the window is full.
   */
  void propagate(const GridMap& map, const MotionParams& motion, Rng& rng) {
    const std::size_t n = size();
    const auto ancestors = systematic_resample(particles_.weights(), uniform01(rng));
    const Timestep next = now_ + 1;
    const Timestep next_start = std::max<Timestep>(0, next - window_);
    const auto drop = static_cast<std::size_t>(next_start - window_start_);
    const std::size_t old_length = particles_.length();
    const std::size_t kept = old_length - drop;

    ParticleSet next_set(n, kept + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const auto from = particles_.trajectory(ancestors[i]);
      auto to = next_set.trajectory(i);
      std::copy(from.begin() + static_cast<std::ptrdiff_t>(drop), from.end(), to.begin());
      to[kept] = step_target(map, motion, from[old_length - 1], rng);
    }
    particles_ = std::move(next_set);
    now_ = next;
    window_start_ = next_start;
    while (!snapshots_.empty() && snapshots_.front().time < window_start_) {
      snapshots_.pop_front();
    }
    snapshots_.push_back(Snapshot{now_, window_start_, particles_});
  }

  /// Multiplies every weight by the floored likelihood of `m` at the particle's state at m.time.
  void incorporate(const Measurement& m, const SensorParams& sensor, double floor) {
    if (m.time < window_start_ || m.time > now_) {
      throw StaleMeasurementError("measurement " + to_string(m.id) + " outside belief window [" +
                                  std::to_string(window_start_) + ", " + std::to_string(now_) + "]");
    }
    const auto column = static_cast<std::size_t>(m.time - window_start_);
    auto weights = particles_.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      weights[i] *= std::max(likelihood(m, particles_.trajectory(i)[column], sensor), floor);
      total += weights[i];
    }
    for (double& w : weights) {
      w /= total;
    }
  }

  /// Rewinds to the snapshot at `from` and replays propagation and every db measurement up to now.
  void resimulate(const MeasurementDb& db, Timestep from, const GridMap& map, const MotionParams& motion,
                  const SensorParams& sensor, double floor, Rng& rng) {
    if (from < window_start_) {
      throw StaleMeasurementError("cannot replay from " + std::to_string(from) + ": window starts at " +
                                  std::to_string(window_start_));
    }
    if (from > now_) {
      throw RangeError("cannot replay from future time " + std::to_string(from));
    }
    const Timestep target = now_;
    while (snapshots_.back().time > from) {
      snapshots_.pop_back();
    }
    const Snapshot& snap = snapshots_.back();
    particles_ = snap.particles;
    now_ = snap.time;
    window_start_ = snap.window_start;
    for (const Measurement* m : db.at_time(from)) {
      incorporate(*m, sensor, floor);
    }
    for (Timestep s = from + 1; s <= target; ++s) {
      propagate(map, motion, rng);
      for (const Measurement* m : db.at_time(s)) {
        incorporate(*m, sensor, floor);
      }
    }
  }

  /// Weighted histogram of particle states at time `s`.
  [[nodiscard]] GridDist marginal_at(const GridMap& map, Timestep s) const {
    if (s < window_start_ || s > now_) {
      throw RangeError("marginal requested at " + std::to_string(s) + " outside window [" +
                       std::to_string(window_start_) + ", " + std::to_string(now_) + "]");
    }
    GridDist h(map);
    const auto column = static_cast<std::size_t>(s - window_start_);
    const auto weights = particles_.weights();
    for (std::size_t i = 0; i < size(); ++i) {
      const int k = map.free_index(particles_.trajectory(i)[column]);
      h[static_cast<std::size_t>(k)] += weights[i];
    }
    return h;
  }

  /// 1 / sum of squared normalized weights.
  [[nodiscard]] double effective_sample_size() const {
    const auto weights = particles_.weights();
    double total = 0.0;
    double squares = 0.0;
    for (double w : weights) {
      total += w;
    }
    if (total <= 0.0) {
      return 0.0;
    }
    for (double w : weights) {
      squares += (w / total) * (w / total);
    }
    return 1.0 / squares;
  }

  /// Flat text table: one row per particle, `weight x0 y0 x1 y1 ...` over the window.
  void dump(std::ostream& out) const {
    out << "# window_start " << window_start_ << " now " << now_ << " particles " << size() << '\n';
    for (std::size_t i = 0; i < size(); ++i) {
      out << particles_.weights()[i];
      for (const Cell& c : particles_.trajectory(i)) {
        out << ' ' << c.x << ' ' << c.y;
      }
      out << '\n';
    }
  }

 private:
  ParticleSet particles_;
  int window_;
  Timestep now_ = 0;
  Timestep window_start_ = 0;
  std::deque<Snapshot> snapshots_;
};

/// Draws n single-state trajectories i.i.d. from the prior, each with weight 1/n, at time 0.
inline ParticleBelief init_belief(const GridMap& map, const Prior& prior, const FilterParams& params, Rng& rng) {
  params.validate();
  std::span<const Cell> region = map.free_cells();
  if (const auto* cells = std::get_if<std::vector<Cell>>(&prior)) {
    if (cells->empty()) {
      throw ValidationError("prior region is empty");
    }
    for (const Cell& c : *cells) {
      if (!map.is_free(c)) {
        throw ValidationError("prior region contains non-free cell " + to_string(c));
      }
    }
    region = *cells;
  }
  ParticleSet set(params.n_particles, 1);
  for (std::size_t i = 0; i < set.size(); ++i) {
    set.trajectory(i)[0] = region[uniform_index(rng, region.size())];
  }
  return ParticleBelief(std::move(set), params.window);
}

}  // namespace dpf

#endif
