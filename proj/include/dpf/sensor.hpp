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


#ifndef DPF_SENSOR_HPP
#define DPF_SENSOR_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dpf/errors.hpp"
#include "dpf/random.hpp"
#include "dpf/world.hpp"

namespace dpf {

using AgentId = int;
using Timestep = int;

/// Occlusion-aware detector model.
struct SensorParams {
  double p_detect = 0.9;   ///< Chance that a target inside the footprint is reported.
  double pos_noise = 0.05; ///< Chance that a report names a uniformly chosen other footprint cell.
  int max_range = 4;       ///< Chebyshev range in cells.
  Fov fov = Fov::kFull;

  void validate() const {
    if (!(p_detect > 0.0 && p_detect <= 1.0)) {
      throw ValidationError("sensor.p_detect must lie in (0, 1]");
    }
    if (!(pos_noise >= 0.0 && pos_noise < 1.0)) {
      throw ValidationError("sensor.pos_noise must lie in [0, 1)");
    }
    if (max_range < 0) {
      throw ValidationError("sensor.max_range must be nonnegative");
    }
  }
};

/// Network-wide unique measurement identifier; agents sense once per step.
struct MeasurementId {
  AgentId agent = 0;
  Timestep time = 0;

  friend constexpr auto operator<=>(const MeasurementId&, const MeasurementId&) = default;

  /// Single-scalar rendering used on the wire.
  [[nodiscard]] std::uint64_t token() const noexcept {
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(agent)) << 32 |
           static_cast<std::uint32_t>(time);
  }
};

inline std::string to_string(const MeasurementId& id) {
  return std::to_string(id.agent) + ":" + std::to_string(id.time);
}

/// One time-stamped sensor reading: the visible footprint plus an optional detection.
struct Measurement {
  MeasurementId id;
  AgentId agent = 0;
  Timestep time = 0;
  std::vector<Cell> visible;  ///< Sorted, duplicate free.
  std::optional<Cell> detection;

  [[nodiscard]] bool sees(Cell c) const { return std::binary_search(visible.begin(), visible.end(), c); }

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Same as `sense` but reusing a precomputed footprint (must equal visible_cells for the pose).
/**
 * Draw order: one uniform for detection, then (if detected) one uniform for the noise
 * branch and one index for the reported cell. Nothing is drawn when the target is out of view.
 */
inline Measurement sense_with_footprint(std::vector<Cell> footprint, const SensorParams& params, Cell target,
                                        Timestep time, AgentId agent, Rng& rng) {
  Measurement m;
  m.id = MeasurementId{agent, time};
  m.agent = agent;
  m.time = time;
  m.visible = std::move(footprint);
  if (!m.sees(target) || uniform01(rng) >= params.p_detect) {
    return m;
  }
  if (m.visible.size() > 1 && uniform01(rng) < params.pos_noise) {
    auto other = uniform_index(rng, m.visible.size() - 1);
    const auto self = static_cast<std::size_t>(
        std::lower_bound(m.visible.begin(), m.visible.end(), target) - m.visible.begin());
    if (other >= self) {
      ++other;
    }
    m.detection = m.visible[other];
  } else {
    m.detection = target;
  }
  return m;
}

/// Simulates one reading of `target` from `pose`.
inline Measurement sense(const GridMap& map, const AgentPose& pose, const SensorParams& params, Cell target,
                         Timestep time, AgentId agent, Rng& rng) {
  if (!map.is_free(target)) {
    throw DomainError("target on non-free cell " + to_string(target));
  }
  return sense_with_footprint(visible_cells(map, pose, params.max_range, params.fov), params, target, time, agent,
                              rng);
}

/// Exact probability of the measurement's detection outcome given the target at `x`.
inline double likelihood(const Measurement& m, Cell x, const SensorParams& params) {
  if (m.detection && !m.sees(*m.detection)) {
    throw MalformedMeasurementError("detection " + to_string(*m.detection) + " outside footprint of measurement " +
                                    to_string(m.id));
  }
  if (!m.sees(x)) {
    return m.detection ? 0.0 : 1.0;
  }
  if (!m.detection) {
    return 1.0 - params.p_detect;
  }
  const auto footprint = static_cast<double>(m.visible.size());
  if (*m.detection == x) {
    const double noise_back = m.visible.size() == 1 ? params.p_detect * params.pos_noise : 0.0;
    return params.p_detect * (1.0 - params.pos_noise) + noise_back;
  }
  return params.p_detect * params.pos_noise / (footprint - 1.0);
}

/// Canonical single-line record: `id agent time count x y ... detection`.
/**
 * Detection renders as `-` when absent, else as `x y`. Footprint cells are written in sorted
 * order, so equal measurements always serialize to equal bytes.
 */
inline std::string to_record(const Measurement& m) {
  std::ostringstream out;
  out << to_string(m.id) << ' ' << m.agent << ' ' << m.time << ' ' << m.visible.size();
  for (const Cell& c : m.visible) {
    out << ' ' << c.x << ' ' << c.y;
  }
  if (m.detection) {
    out << ' ' << m.detection->x << ' ' << m.detection->y;
  } else {
    out << " -";
  }
  return out.str();
}

inline Measurement parse_record(const std::string& line) {
  std::istringstream in(line);
  Measurement m;
  std::string id;
  std::size_t count = 0;
  if (!(in >> id >> m.agent >> m.time >> count)) {
    throw FormatError("bad measurement record header: " + line);
  }
  const auto colon = id.find(':');
  if (colon == std::string::npos) {
    throw FormatError("bad measurement id: " + id);
  }
  try {
    m.id = MeasurementId{std::stoi(id.substr(0, colon)), std::stoi(id.substr(colon + 1))};
  } catch (const std::exception&) {
    throw FormatError("bad measurement id: " + id);
  }
  m.visible.resize(count);
  for (auto& c : m.visible) {
    if (!(in >> c.x >> c.y)) {
      throw FormatError("truncated footprint in record: " + line);
    }
  }
  if (!std::is_sorted(m.visible.begin(), m.visible.end())) {
    throw FormatError("footprint not in canonical order: " + line);
  }
  std::string token;
  if (!(in >> token)) {
    throw FormatError("missing detection field: " + line);
  }
  if (token != "-") {
    Cell d;
    try {
      d.x = std::stoi(token);
    } catch (const std::exception&) {
      throw FormatError("bad detection field: " + line);
    }
    if (!(in >> d.y)) {
      throw FormatError("bad detection field: " + line);
    }
    m.detection = d;
  }
  if (in >> token) {
    throw FormatError("trailing data in record: " + line);
  }
  return m;
}

}  // namespace dpf

#endif
