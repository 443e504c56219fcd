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


#ifndef DPF_ENGINE_HPP
#define DPF_ENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dpf/comms.hpp"
#include "dpf/errors.hpp"
#include "dpf/eval.hpp"
#include "dpf/filter.hpp"
#include "dpf/random.hpp"
#include "dpf/sensor.hpp"
#include "dpf/world.hpp"

namespace dpf {

enum class Strategy { kNone, kSelective, kBaseline, kFull };
enum class OracleMode { kOff, kFullComm, kExact };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kNone:
      return "none";
    case Strategy::kSelective:
      return "selective";
    case Strategy::kBaseline:
      return "baseline";
    case Strategy::kFull:
      return "full";
  }
  return "?";
}

inline std::string to_string(OracleMode m) {
  switch (m) {
    case OracleMode::kOff:
      return "off";
    case OracleMode::kFullComm:
      return "full_comm";
    case OracleMode::kExact:
      return "exact";
  }
  return "?";
}

struct CommParams {
  Strategy strategy = Strategy::kNone;
  std::size_t query_size = 10;  ///< M, trajectories per query.
  int rate = 1;                 ///< Communicate on steps divisible by rate.
  int k = 1;                    ///< Baseline sends on steps divisible by k (within communication rounds).
  int latency = 0;              ///< Steps between sending and delivery of a measurement.
};

/// A tracker: initial pose and an optional cyclic list of waypoints it walks between.
struct AgentSpec {
  AgentPose pose;
  std::vector<Cell> waypoints;
};

struct ScenarioConfig {
  std::string name;
  std::shared_ptr<const GridMap> map;
  std::string map_path;
  int n_agents = 1;
  std::vector<AgentSpec> agents;  ///< Empty: agents are placed on random free cells.
  std::uint64_t placement_seed = 0;
  std::vector<Cell> target_start;  ///< Empty: uniform over free cells. Also the trackers' prior.
  std::vector<Cell> target_script; ///< Non-empty: target position at time t is script[min(t, size-1)].
  MotionParams motion;
  SensorParams sensor;
  FilterParams filter;
  CommParams comm;
  int k_nbr = 1;
  int horizon = 10;
  std::uint64_t seed = 1;
  OracleMode oracle = OracleMode::kFullComm;
  bool parallel = false;
};

/// Every violated invariant of `config`, as human-readable messages naming the field.
inline std::vector<std::string> config_errors(const ScenarioConfig& config) {
  std::vector<std::string> errors;
  auto check = [&](bool ok, const std::string& message) {
    if (!ok) {
      errors.push_back(message);
    }
  };
  auto check_params = [&](const auto& params) {
    try {
      params.validate();
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
  };
  check(config.map != nullptr, "map: no map loaded");
  check(config.n_agents >= 1, "n_agents: must be at least 1");
  check(config.horizon >= 1, "horizon: must be at least 1");
  check(config.comm.rate >= 1, "comm.rate: must be at least 1");
  check(config.comm.k >= 1, "comm.k: must be at least 1");
  check(config.comm.latency >= 0, "comm.latency: must be nonnegative");
  check(config.k_nbr >= 0, "k_nbr: must be nonnegative");
  check(config.n_agents < 1 || config.k_nbr < config.n_agents,
        "k_nbr: must be smaller than n_agents (k_nbr=" + std::to_string(config.k_nbr) +
            ", n_agents=" + std::to_string(config.n_agents) + ")");
  check(config.comm.strategy != Strategy::kSelective || config.comm.query_size >= 1,
        "comm.query_size: must be at least 1");
  check(config.comm.query_size <= config.filter.n_particles, "comm.query_size: must not exceed filter.n_particles");
  check_params(config.motion);
  check_params(config.sensor);
  check_params(config.filter);
  check(config.agents.empty() || static_cast<int>(config.agents.size()) == config.n_agents,
        "agents: " + std::to_string(config.agents.size()) + " poses given for n_agents=" +
            std::to_string(config.n_agents));
  if (config.map) {
    const GridMap& map = *config.map;
    for (std::size_t i = 0; i < config.agents.size(); ++i) {
      check(map.is_free(config.agents[i].pose.cell), "agents[" + std::to_string(i) + "]: pose not on a free cell");
      for (const Cell& w : config.agents[i].waypoints) {
        check(map.is_free(w), "agents[" + std::to_string(i) + "].waypoints: " + to_string(w) + " not free");
      }
    }
    for (const Cell& c : config.target_start) {
      check(map.is_free(c), "target.start: " + to_string(c) + " not free");
    }
    for (const Cell& c : config.target_script) {
      check(map.is_free(c), "target.script: " + to_string(c) + " not free");
    }
    if (config.agents.empty() && config.n_agents > static_cast<int>(map.free_count())) {
      errors.emplace_back("n_agents: more agents than free cells for random placement");
    }
  }
  return errors;
}

inline void validate(const ScenarioConfig& config) {
  const auto errors = config_errors(config);
  if (!errors.empty()) {
    std::string message = "invalid scenario:";
    for (const auto& e : errors) {
      message += "\n  " + e;
    }
    throw ValidationError(message);
  }
}

/// The k_nbr agents closest to `agent` (Euclidean distance between cells), ties to the lower id.
inline std::vector<AgentId> neighbors(std::span<const AgentPose> poses, AgentId agent, int k_nbr) {
  const auto n = static_cast<int>(poses.size());
  if (k_nbr < 0 || k_nbr >= n) {
    throw ValidationError("k_nbr=" + std::to_string(k_nbr) + " must be smaller than the agent count " +
                          std::to_string(n));
  }
  const Cell self = poses[static_cast<std::size_t>(agent)].cell;
  std::vector<std::pair<long, AgentId>> by_distance;
  by_distance.reserve(poses.size());
  for (AgentId other = 0; other < n; ++other) {
    if (other == agent) {
      continue;
    }
    const Cell c = poses[static_cast<std::size_t>(other)].cell;
    const long dx = c.x - self.x;
    const long dy = c.y - self.y;
    by_distance.emplace_back(dx * dx + dy * dy, other);
  }
  std::partial_sort(by_distance.begin(), by_distance.begin() + k_nbr, by_distance.end());
  std::vector<AgentId> out;
  out.reserve(static_cast<std::size_t>(k_nbr));
  for (int i = 0; i < k_nbr; ++i) {
    out.push_back(by_distance[static_cast<std::size_t>(i)].second);
  }
  return out;
}

/// Uniformly random member of `nbrs`; empty when there is nobody to talk to.
inline std::optional<AgentId> pick_peer(std::span<const AgentId> nbrs, Rng& rng) {
  if (nbrs.empty()) {
    return std::nullopt;
  }
  return nbrs[uniform_index(rng, nbrs.size())];
}

struct MetricsRow {
  Timestep time = 0;
  AgentId agent = 0;
  std::optional<double> kl_to_oracle;
  double ess = 0.0;
  std::uint64_t scalars_sent_cum = 0;
  std::uint64_t msgs_sent_cum = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct MetricsLog {
  int n_agents = 0;
  int horizon = 0;
  std::vector<MetricsRow> rows;  ///< Ordered by time, then agent.
  std::uint64_t total_scalars = 0;
  std::uint64_t total_messages = 0;
  std::uint64_t queries = 0;
  std::uint64_t responses = 0;
  std::uint64_t broadcasts = 0;

  /// Mean KL over all rows that carry one; NaN when the oracle was off.
  [[nodiscard]] double mean_kl() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows) {
      if (r.kl_to_oracle) {
        sum += *r.kl_to_oracle;
        ++count;
      }
    }
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(count);
  }

  [[nodiscard]] double scalars_per_agent_step() const {
    return static_cast<double>(total_scalars) / (static_cast<double>(n_agents) * horizon);
  }
  [[nodiscard]] double messages_per_agent_step() const {
    return static_cast<double>(total_messages) / (static_cast<double>(n_agents) * horizon);
  }

  friend bool operator==(const MetricsLog&, const MetricsLog&) = default;
};

/// Everything a run produces: the metrics plus the ground truth and raw measurements.
struct RunResult {
  MetricsLog metrics;
  std::vector<Cell> target_path;  ///< Index t is the target at time t (0..horizon).
  MeasurementLog measurements;    ///< Index t holds each agent's reading at t, in agent order.
  std::vector<std::vector<AgentPose>> poses;  ///< Index t holds every agent's pose at t.
};

namespace detail {

/// Runs fn(i) for i in [0, n), split over hardware threads when `parallel` is set.
template <class Fn>
void for_each_index(std::size_t n, bool parallel, Fn&& fn) {
  const std::size_t workers = parallel ? std::min<std::size_t>(n, std::max(2U, std::thread::hardware_concurrency())) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        fn(i);
      }
    });
  }
}

/// One 4-connected step toward `goal`, preferring the x axis; stays put when both moves are blocked.
inline Cell step_toward(const GridMap& map, Cell from, Cell goal) {
  if (from.x != goal.x) {
    const Cell next{from.x + (goal.x > from.x ? 1 : -1), from.y};
    if (map.is_free(next)) {
      return next;
    }
  }
  if (from.y != goal.y) {
    const Cell next{from.x, from.y + (goal.y > from.y ? 1 : -1)};
    if (map.is_free(next)) {
      return next;
    }
  }
  return from;
}

struct Delivery {
  Timestep due = 0;
  AgentId to = 0;
  Measurement measurement;
};

class Agent {
 public:
  Agent(AgentId id, const ScenarioConfig& config, AgentSpec spec, const Prior& prior)
      : id_(id), spec_(std::move(spec)), pose_(spec_.pose),
        sense_rng_(make_rng(config.seed, Stream::kSensing, static_cast<std::uint64_t>(id))),
        filter_rng_(make_rng(config.seed, Stream::kFilter, static_cast<std::uint64_t>(id))),
        comms_rng_(make_rng(config.seed, Stream::kComms, static_cast<std::uint64_t>(id))),
        belief_(init_belief(*config.map, prior, config.filter, filter_rng_)) {}

  [[nodiscard]] AgentId id() const noexcept { return id_; }
  [[nodiscard]] const AgentPose& pose() const noexcept { return pose_; }
  [[nodiscard]] const ParticleBelief& belief() const noexcept { return belief_; }
  [[nodiscard]] const MeasurementDb& db() const noexcept { return db_; }
  [[nodiscard]] const std::optional<Measurement>& latest_own() const noexcept { return latest_own_; }
  Rng& comms_rng() noexcept { return comms_rng_; }

  /// Walks one cell toward the current waypoint, cycling through the list.
  void move(const GridMap& map) {
    if (spec_.waypoints.empty()) {
      return;
    }
    if (pose_.cell == spec_.waypoints[next_waypoint_]) {
      next_waypoint_ = (next_waypoint_ + 1) % spec_.waypoints.size();
    }
    const Cell next = step_toward(map, pose_.cell, spec_.waypoints[next_waypoint_]);
    if (next != pose_.cell) {
      const Cell d{next.x - pose_.cell.x, next.y - pose_.cell.y};
      pose_.heading = d.x > 0 ? Heading::kEast : d.x < 0 ? Heading::kWest : d.y > 0 ? Heading::kSouth : Heading::kNorth;
      pose_.cell = next;
    }
  }

  /// Propagates (for t > 0), senses the target and incorporates the reading.
  Measurement step(const ScenarioConfig& config, Cell target, Timestep t) {
    const GridMap& map = *config.map;
    if (t > 0) {
      belief_.propagate(map, config.motion, filter_rng_);
    }
    Measurement m = sense_with_footprint(footprint(config), config.sensor, target, t, id_, sense_rng_);
    db_.insert(m, t, config.filter.window);
    belief_.incorporate(m, config.sensor, config.filter.weight_floor);
    latest_own_ = m;
    return m;
  }

  /// Stores a received measurement and folds it into the belief, replaying history if it is late.
  void receive(const ScenarioConfig& config, const Measurement& m) {
    if (!db_.insert(m, belief_.now(), config.filter.window)) {
      return;
    }
    if (m.time == belief_.now()) {
      belief_.incorporate(m, config.sensor, config.filter.weight_floor);
    } else {
      belief_.resimulate(db_, m.time, *config.map, config.motion, config.sensor, config.filter.weight_floor,
                         filter_rng_);
    }
  }

 private:
  const std::vector<Cell>& footprint(const ScenarioConfig& config) {
    if (!footprint_ || footprint_pose_ != pose_) {
      footprint_ = visible_cells(*config.map, pose_, config.sensor.max_range, config.sensor.fov);
      footprint_pose_ = pose_;
    }
    return *footprint_;
  }

  AgentId id_;
  AgentSpec spec_;
  AgentPose pose_;
  std::size_t next_waypoint_ = 0;
  Rng sense_rng_;
  Rng filter_rng_;
  Rng comms_rng_;
  ParticleBelief belief_;
  MeasurementDb db_;
  std::optional<Measurement> latest_own_;
  std::optional<std::vector<Cell>> footprint_;
  AgentPose footprint_pose_;
};

}  // namespace detail

/// Agent specs for a config, drawing random free cells when no poses are listed.
inline std::vector<AgentSpec> resolve_agents(const ScenarioConfig& config) {
  if (!config.agents.empty()) {
    return config.agents;
  }
  Rng rng(derive_seed(config.placement_seed, Stream::kPlacement));
  std::vector<Cell> cells = config.map->free_cells();
  std::vector<AgentSpec> out;
  for (int i = 0; i < config.n_agents; ++i) {
    const std::size_t j = static_cast<std::size_t>(i) + uniform_index(rng, cells.size() - static_cast<std::size_t>(i));
    std::swap(cells[static_cast<std::size_t>(i)], cells[j]);
    AgentSpec spec;
    spec.pose.cell = cells[static_cast<std::size_t>(i)];
    spec.pose.heading = static_cast<Heading>(uniform_index(rng, 4));
    out.push_back(spec);
  }
  return out;
}

inline Prior scenario_prior(const ScenarioConfig& config) {
  if (config.target_start.empty()) {
    return UniformPrior{};
  }
  return config.target_start;
}

inline GridDist scenario_prior_dist(const ScenarioConfig& config) {
  if (config.target_start.empty()) {
    return GridDist::uniform(*config.map);
  }
  return GridDist::uniform_over(*config.map, config.target_start);
}

/// Simulates a scenario end to end.
/**
 * Time 0 is the initial reading. Each step t = 1..horizon then moves the target and any scripted
 * trackers, propagates every belief, senses and incorporates, delivers due messages, runs a
 * communication round when t is a multiple of comm.rate, and records one metrics row per agent.
 * Everything is a deterministic function of config.seed; the parallel flag changes only how the
 * per-agent phases are scheduled.
 */
inline RunResult run_detailed(const ScenarioConfig& config) {
  validate(config);
  const GridMap& map = *config.map;
  const auto n = static_cast<std::size_t>(config.n_agents);
  const Prior prior = scenario_prior(config);

  std::vector<detail::Agent> agents;
  agents.reserve(n);
  {
    const auto specs = resolve_agents(config);
    for (std::size_t i = 0; i < n; ++i) {
      agents.emplace_back(static_cast<AgentId>(i), config, specs[i], prior);
    }
  }

  Rng world = make_rng(config.seed, Stream::kWorld);
  Cell target;
  if (!config.target_script.empty()) {
    target = config.target_script.front();
  } else {
    const auto& start = config.target_start.empty() ? map.free_cells() : config.target_start;
    target = start[uniform_index(world, start.size())];
  }

  std::optional<FullCommFilter> reference;
  std::optional<ForwardFilter> exact;
  if (config.oracle == OracleMode::kFullComm) {
    reference.emplace(map, config.motion, config.sensor, config.filter, prior,
                      make_rng(config.seed, Stream::kFilter, 0));
  } else if (config.oracle == OracleMode::kExact) {
    if (map.free_count() * static_cast<std::size_t>(config.horizon + 1) > kDefaultOracleBudget) {
      throw CapacityError("exact oracle over budget for this scenario");
    }
    exact.emplace(map, config.motion, config.sensor, scenario_prior_dist(config));
  }
  const double alpha = default_laplace_alpha(map);

  RunResult result;
  MetricsLog& log = result.metrics;
  log.n_agents = config.n_agents;
  log.horizon = config.horizon;
  log.rows.reserve(n * static_cast<std::size_t>(config.horizon));
  BandwidthLedger ledger(n);
  std::vector<detail::Delivery> pending;

  auto send = [&](AgentId to, const Measurement& m, Timestep t) {
    if (config.comm.latency == 0) {
      agents[static_cast<std::size_t>(to)].receive(config, m);
    } else {
      pending.push_back(detail::Delivery{t + config.comm.latency, to, m});
    }
  };

  std::vector<Measurement> readings(n);
  std::vector<MetricsRow> rows(n);
  for (Timestep t = 0; t <= config.horizon; ++t) {
    if (t > 0) {
      if (!config.target_script.empty()) {
        target = config.target_script[std::min<std::size_t>(static_cast<std::size_t>(t), config.target_script.size() - 1)];
      } else {
        target = step_target(map, config.motion, target, world);
      }
      for (auto& a : agents) {
        a.move(map);
      }
    }
    result.target_path.push_back(target);
    {
      std::vector<AgentPose> poses;
      poses.reserve(n);
      for (const auto& a : agents) {
        poses.push_back(a.pose());
      }
      result.poses.push_back(std::move(poses));
    }

    detail::for_each_index(n, config.parallel, [&](std::size_t i) { readings[i] = agents[i].step(config, target, t); });
    result.measurements.push_back(readings);

    if (reference) {
      if (t > 0) {
        reference->advance();
      }
      reference->observe(readings);
    }
    if (exact) {
      if (t > 0) {
        exact->predict();
      }
      for (const auto& m : readings) {
        exact->update(m);
      }
    }

    if (!pending.empty()) {
      std::vector<detail::Delivery> due;
      std::erase_if(pending, [&](detail::Delivery& d) {
        if (d.due <= t) {
          due.push_back(std::move(d));
          return true;
        }
        return false;
      });
      for (const auto& d : due) {
        agents[static_cast<std::size_t>(d.to)].receive(config, d.measurement);
      }
    }

    if (t > 0 && t % config.comm.rate == 0 && config.comm.strategy != Strategy::kNone) {
      const auto& poses = result.poses.back();
      switch (config.comm.strategy) {
        case Strategy::kSelective:
          for (auto& a : agents) {
            const auto nbrs = neighbors(poses, a.id(), config.k_nbr);
            const auto peer = pick_peer(nbrs, a.comms_rng());
            if (!peer) {
              continue;
            }
            const QueryMsg q = compose_query(a.belief(), config.comm.query_size, a.comms_rng(), a.id(),
                                             exclusion_list(a.db(), a.id(), a.belief().window_start()));
            ledger.record(a.id(), MessageClass::kQuery, bandwidth_of(q));
            const ResponseMsg r = select_response(q, agents[static_cast<std::size_t>(*peer)].db(), config.sensor,
                                                  config.filter.weight_floor, *peer);
            ledger.record(*peer, MessageClass::kResponse, bandwidth_of(r));
            if (r.payload) {
              send(a.id(), *r.payload, t);
            }
          }
          break;
        case Strategy::kBaseline:
          for (auto& a : agents) {
            const auto msg = baseline_next(a.latest_own(), config.comm.k, t);
            if (!msg) {
              continue;
            }
            for (AgentId to : neighbors(poses, a.id(), config.k_nbr)) {
              ledger.record(a.id(), MessageClass::kBroadcast, bandwidth_of(*msg));
              send(to, *msg, t);
            }
          }
          break;
        case Strategy::kFull:
          for (auto& a : agents) {
            const Measurement& m = readings[static_cast<std::size_t>(a.id())];
            for (auto& b : agents) {
              if (b.id() != a.id()) {
                ledger.record(a.id(), MessageClass::kBroadcast, bandwidth_of(m));
                send(b.id(), m, t);
              }
            }
          }
          break;
        case Strategy::kNone:
          break;
      }
    }

    if (t == 0) {
      continue;
    }
    std::optional<GridDist> truth;
    if (reference) {
      truth = reference->marginal();
    } else if (exact) {
      truth = exact->belief();
    }
    detail::for_each_index(n, config.parallel, [&](std::size_t i) {
      const auto& a = agents[i];
      MetricsRow& row = rows[i];
      row.time = t;
      row.agent = a.id();
      row.ess = a.belief().effective_sample_size();
      row.kl_to_oracle.reset();
      if (truth) {
        row.kl_to_oracle = kl_grid(*truth, a.belief().marginal_at(map, t), alpha);
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].scalars_sent_cum = ledger.scalars(static_cast<AgentId>(i));
      rows[i].msgs_sent_cum = ledger.messages(static_cast<AgentId>(i));
      log.rows.push_back(rows[i]);
    }
  }

  log.total_scalars = ledger.total_scalars();
  log.total_messages = ledger.total_messages();
  for (std::size_t i = 0; i < n; ++i) {
    log.queries += ledger.messages(static_cast<AgentId>(i), MessageClass::kQuery);
    log.responses += ledger.messages(static_cast<AgentId>(i), MessageClass::kResponse);
    log.broadcasts += ledger.messages(static_cast<AgentId>(i), MessageClass::kBroadcast);
  }
  return result;
}

inline MetricsLog run(const ScenarioConfig& config) { return run_detailed(config).metrics; }

struct SweepRow {
  Strategy strategy = Strategy::kNone;
  int rate = 1;
  int repeats = 0;
  double bandwidth = 0.0;  ///< Mean scalars per agent per step.
  double messages = 0.0;   ///< Mean messages per agent per step.
  double mean_kl = 0.0;    ///< Mean over repeats of each run's mean KL.
  double std_kl = 0.0;     ///< Sample standard deviation of the per-run mean KL.
};

/// Seed of repeat `r` in a sweep; shared across strategies and rates so runs see the same world.
inline std::uint64_t repeat_seed(std::uint64_t base, int r) { return base + static_cast<std::uint64_t>(r); }

/// Runs every (strategy, rate, repeat) combination and summarizes per (strategy, rate), sorted by bandwidth.
inline std::vector<SweepRow> sweep(const ScenarioConfig& base, std::span<const int> rates,
                                   std::span<const Strategy> strategies, int repeats) {
  if (repeats < 1) {
    throw ValidationError("repeats must be at least 1");
  }
  std::vector<SweepRow> out;
  for (Strategy strategy : strategies) {
    for (int rate : rates) {
      SweepRow row;
      row.strategy = strategy;
      row.rate = rate;
      row.repeats = repeats;
      std::vector<double> kls;
      for (int r = 0; r < repeats; ++r) {
        ScenarioConfig config = base;
        config.comm.strategy = strategy;
        config.comm.rate = rate;
        config.seed = repeat_seed(base.seed, r);
        const MetricsLog log = run(config);
        row.bandwidth += log.scalars_per_agent_step();
        row.messages += log.messages_per_agent_step();
        kls.push_back(log.mean_kl());
      }
      row.bandwidth /= repeats;
      row.messages /= repeats;
      row.mean_kl = std::accumulate(kls.begin(), kls.end(), 0.0) / repeats;
      if (repeats > 1) {
        double ss = 0.0;
        for (double k : kls) {
          ss += (k - row.mean_kl) * (k - row.mean_kl);
        }
        row.std_kl = std::sqrt(ss / (repeats - 1));
      }
      out.push_back(row);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SweepRow& a, const SweepRow& b) { return a.bandwidth < b.bandwidth; });
  return out;
}

/// One row of an oracle comparison: the full-communication particle filter against the exact posterior.
struct OracleReportRow {
  Timestep time = 0;
  double kl = 0.0;   ///< kl_grid(exact, particle) in nats.
  double ess = 0.0;  ///< Effective sample size of the particle filter.
};

/// Replays a run's measurements through the full-communication filter and the exact oracle in lockstep.
inline std::vector<OracleReportRow> oracle_comparison(const ScenarioConfig& config, const MeasurementLog& measurements) {
  validate(config);
  const GridMap& map = *config.map;
  FullCommFilter particle(map, config.motion, config.sensor, config.filter, scenario_prior(config),
                          make_rng(config.seed, Stream::kFilter, 0));
  ForwardFilter exact(map, config.motion, config.sensor, scenario_prior_dist(config));
  const double alpha = default_laplace_alpha(map);
  std::vector<OracleReportRow> rows;
  for (std::size_t t = 0; t < measurements.size(); ++t) {
    if (t > 0) {
      particle.advance();
      exact.predict();
    }
    particle.observe(measurements[t]);
    for (const auto& m : measurements[t]) {
      exact.update(m);
    }
    rows.push_back({static_cast<Timestep>(t), kl_grid(exact.belief(), particle.marginal(), alpha),
                    particle.belief().effective_sample_size()});
  }
  return rows;
}

}  // namespace dpf

#endif
