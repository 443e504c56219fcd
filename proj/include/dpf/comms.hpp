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


#ifndef DPF_COMMS_HPP
#define DPF_COMMS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "dpf/errors.hpp"
#include "dpf/filter.hpp"
#include "dpf/random.hpp"
#include "dpf/sensor.hpp"

namespace dpf {

/// A compact belief summary: M weighted trajectories over [window_start, time].
struct QueryMsg {
  AgentId requester = 0;
  Timestep time = 0;
  Timestep window_start = 0;
  std::vector<TrajectoryParticle> samples;  ///< Weights renormalized over the samples.
  std::vector<MeasurementId> exclusions;    ///< Foreign measurements the requester already holds.

  [[nodiscard]] std::size_t window_length() const noexcept {
    return static_cast<std::size_t>(time - window_start + 1);
  }
};

/// At most one measurement sent back in answer to a query.
struct ResponseMsg {
  AgentId responder = 0;
  std::optional<Measurement> payload;
  double score = 0.0;  ///< Information score of the payload; diagnostic only, not transmitted.
};

enum class MessageClass : std::size_t { kQuery = 0, kResponse = 1, kBroadcast = 2 };

/// Running per-agent totals of scalars and messages sent, split by message class.
class BandwidthLedger {
 public:
  explicit BandwidthLedger(std::size_t n_agents = 0) : scalars_(n_agents), messages_(n_agents) {}

  void record(AgentId sender, MessageClass cls, std::uint64_t scalars) {
    const auto a = static_cast<std::size_t>(sender);
    scalars_.at(a)[static_cast<std::size_t>(cls)] += scalars;
    messages_.at(a)[static_cast<std::size_t>(cls)] += 1;
  }

  [[nodiscard]] std::uint64_t scalars(AgentId agent, MessageClass cls) const {
    return scalars_.at(static_cast<std::size_t>(agent))[static_cast<std::size_t>(cls)];
  }
  [[nodiscard]] std::uint64_t messages(AgentId agent, MessageClass cls) const {
    return messages_.at(static_cast<std::size_t>(agent))[static_cast<std::size_t>(cls)];
  }
  [[nodiscard]] std::uint64_t scalars(AgentId agent) const { return sum(scalars_.at(static_cast<std::size_t>(agent))); }
  [[nodiscard]] std::uint64_t messages(AgentId agent) const {
    return sum(messages_.at(static_cast<std::size_t>(agent)));
  }

  [[nodiscard]] std::uint64_t total_scalars() const {
    std::uint64_t total = 0;
    for (const auto& row : scalars_) {
      total += sum(row);
    }
    return total;
  }
  [[nodiscard]] std::uint64_t total_messages() const {
    std::uint64_t total = 0;
    for (const auto& row : messages_) {
      total += sum(row);
    }
    return total;
  }

 private:
  using Row = std::array<std::uint64_t, 3>;
  static std::uint64_t sum(const Row& row) { return row[0] + row[1] + row[2]; }

  std::vector<Row> scalars_;
  std::vector<Row> messages_;
};

/// Samples M distinct particles uniformly (partial Fisher-Yates) and packs them with renormalized weights.
inline QueryMsg compose_query(const ParticleBelief& belief, std::size_t m, Rng& rng, AgentId requester = 0,
                              std::vector<MeasurementId> exclusions = {}) {
  const std::size_t n = belief.size();
  if (m < 1 || m > n) {
    throw ValidationError("query size M=" + std::to_string(m) + " must lie in [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  QueryMsg q;
  q.requester = requester;
  q.time = belief.now();
  q.window_start = belief.window_start();
  q.exclusions = std::move(exclusions);
  q.samples.reserve(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    std::swap(order[k], order[k + uniform_index(rng, n - k)]);
    q.samples.push_back(belief.particle(order[k]));
    total += q.samples.back().weight;
  }
  for (auto& s : q.samples) {
    s.weight = total > 0.0 ? s.weight / total : 1.0 / static_cast<double>(m);
  }
  return q;
}

/// Information a measurement would add to the queried belief: KL(old || new) over the query samples, in nats.
/**
 * New weights are u_i proportional to w_i * max(likelihood, floor). The divergence
 * sum_i w_i ln(w_i / u_i) equals ln(sum_j w_j L_j) - sum_i w_i ln L_i, which is how it is evaluated.
 */
inline double score_measurement(const QueryMsg& q, const Measurement& m, const SensorParams& sensor, double floor) {
  if (m.time < q.window_start || m.time > q.time) {
    throw StaleMeasurementError("measurement " + to_string(m.id) + " outside query window [" +
                                std::to_string(q.window_start) + ", " + std::to_string(q.time) + "]");
  }
  const auto column = static_cast<std::size_t>(m.time - q.window_start);
  double total = 0.0;
  for (const auto& s : q.samples) {
    total += s.weight;
  }
  if (total <= 0.0) {
    return 0.0;
  }
  double evidence = 0.0;
  double mean_log = 0.0;
  std::optional<double> first;
  bool constant = true;
  for (const auto& s : q.samples) {
    if (s.weight <= 0.0) {
      continue;
    }
    const double w = s.weight / total;
    const double l = std::max(likelihood(m, s.states.at(column), sensor), floor);
    if (!first) {
      first = l;
    } else if (l != *first) {
      constant = false;
    }
    evidence += w * l;
    mean_log += w * std::log(l);
  }
  if (constant) {
    return 0.0;
  }
  return std::max(0.0, std::log(evidence) - mean_log);
}

/// Picks the most informative eligible db entry for the query.
/**
 * Eligible entries lie in the query window, were not authored by the requester, and are not in
 * the exclusion list. Ties go to the newer measurement, then the lower agent id, then the lower id.
 * The payload is empty when nothing is eligible or the best score is zero.
 */
inline ResponseMsg select_response(const QueryMsg& q, const MeasurementDb& db, const SensorParams& sensor,
                                   double floor, AgentId responder = 0) {
  ResponseMsg r;
  r.responder = responder;
  const Measurement* best = nullptr;
  double best_score = 0.0;
  for (const auto& [id, m] : db.entries()) {
    if (m.time < q.window_start || m.time > q.time || m.agent == q.requester) {
      continue;
    }
    if (std::find(q.exclusions.begin(), q.exclusions.end(), id) != q.exclusions.end()) {
      continue;
    }
    const double score = score_measurement(q, m, sensor, floor);
    const bool better = best == nullptr || score > best_score ||
                        (score == best_score && std::make_tuple(-m.time, m.agent, m.id) <
                                                    std::make_tuple(-best->time, best->agent, best->id));
    if (better) {
      best = &m;
      best_score = score;
    }
  }
  if (best != nullptr && best_score > 0.0) {
    r.payload = *best;
    r.score = best_score;
  }
  return r;
}

/// Ids of measurements in `db` not authored by `requester` and no older than `since`.
inline std::vector<MeasurementId> exclusion_list(const MeasurementDb& db, AgentId requester, Timestep since) {
  std::vector<MeasurementId> ids;
  for (const auto& [id, m] : db.entries()) {
    if (m.agent != requester && m.time >= since) {
      ids.push_back(id);
    }
  }
  return ids;
}

/// Non-selective schedule: the agent's latest own measurement on every k-th step, otherwise nothing.
inline std::optional<Measurement> baseline_next(const std::optional<Measurement>& latest_own, int k, Timestep t) {
  if (k < 1) {
    throw ValidationError("baseline period k must be at least 1");
  }
  if (t % k != 0 || !latest_own) {
    return std::nullopt;
  }
  return latest_own;
}

/// Wire cost in scalars: a cell is 2, a weight 1, ids and timestamps 1 each.
inline std::uint64_t bandwidth_of(const Measurement& m) {
  return 3 + 2 * m.visible.size() + (m.detection ? 2 : 0);
}

inline std::uint64_t bandwidth_of(const QueryMsg& q) {
  return 2 + q.samples.size() * (q.window_length() * 2 + 1) + q.exclusions.size();
}

inline std::uint64_t bandwidth_of(const ResponseMsg& r) { return 1 + (r.payload ? bandwidth_of(*r.payload) : 0); }

/// Canonical flat scalar encoding; its length is exactly bandwidth_of(m).
inline std::vector<double> flatten(const Measurement& m) {
  std::vector<double> out{static_cast<double>(m.id.token()), static_cast<double>(m.agent),
                          static_cast<double>(m.time)};
  for (const Cell& c : m.visible) {
    out.push_back(c.x);
    out.push_back(c.y);
  }
  if (m.detection) {
    out.push_back(m.detection->x);
    out.push_back(m.detection->y);
  }
  return out;
}

/// Field order: requester, time, samples (states then weight), exclusions.
inline std::vector<double> flatten(const QueryMsg& q) {
  std::vector<double> out{static_cast<double>(q.requester), static_cast<double>(q.time)};
  for (const auto& s : q.samples) {
    for (std::size_t k = 0; k < q.window_length(); ++k) {
      const Cell c = k < s.states.size() ? s.states[k] : Cell{};
      out.push_back(c.x);
      out.push_back(c.y);
    }
    out.push_back(s.weight);
  }
  for (const auto& id : q.exclusions) {
    out.push_back(static_cast<double>(id.token()));
  }
  return out;
}

inline std::vector<double> flatten(const ResponseMsg& r) {
  std::vector<double> out{static_cast<double>(r.responder)};
  if (r.payload) {
    const auto body = flatten(*r.payload);
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

}  // namespace dpf

#endif
