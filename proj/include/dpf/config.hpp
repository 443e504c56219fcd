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


#ifndef DPF_CONFIG_HPP
#define DPF_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpf/engine.hpp"
#include "dpf/errors.hpp"

namespace dpf {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace detail {

using nlohmann::json;

class ConfigReader {
 public:
  explicit ConfigReader(std::vector<std::string>& errors) : errors_(errors) {}

  template <class T>
  T get(const json& obj, const std::string& key, const std::string& field, T fallback) {
    if (!obj.is_object() || !obj.contains(key)) {
      return fallback;
    }
    try {
      return obj.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.push_back(field + ": wrong type");
      return fallback;
    }
  }

  Cell cell(const json& value, const std::string& field) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() || !value[1].is_number_integer()) {
      errors_.push_back(field + ": expected [x, y]");
      return {};
    }
    return Cell{value[0].get<int>(), value[1].get<int>()};
  }

  std::vector<Cell> cells(const json& value, const std::string& field) {
    std::vector<Cell> out;
    if (!value.is_array()) {
      errors_.push_back(field + ": expected a list of [x, y]");
      return out;
    }
    for (std::size_t i = 0; i < value.size(); ++i) {
      out.push_back(cell(value[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  template <class Enum>
  Enum choice(const json& obj, const std::string& key, const std::string& field, Enum fallback,
              std::initializer_list<std::pair<const char*, Enum>> options) {
    const auto text = get<std::string>(obj, key, field, "");
    if (text.empty()) {
      return fallback;
    }
    for (const auto& [name, value] : options) {
      if (text == name) {
        return value;
      }
    }
    errors_.push_back(field + ": unknown value '" + text + "'");
    return fallback;
  }

  void error(std::string message) { errors_.push_back(std::move(message)); }

 private:
  std::vector<std::string>& errors_;
};

inline Heading parse_heading(ConfigReader& reader, const json& obj, const std::string& field) {
  return reader.choice(obj, "heading", field, Heading::kNorth,
                       {{"N", Heading::kNorth}, {"E", Heading::kEast}, {"S", Heading::kSouth}, {"W", Heading::kWest}});
}

}  // namespace detail

/// Parses a scenario document; the map path is resolved against `base_dir`.
/**
 * Every problem found (syntax, types, unknown enum values, violated invariants) is appended to
 * `errors`; the returned config is only meaningful when `errors` stays empty.
 */
inline ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                                   std::vector<std::string>& errors) {
  using detail::json;
  ScenarioConfig config;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    errors.push_back(std::string("syntax: ") + e.what());
    return config;
  }
  if (!doc.is_object()) {
    errors.emplace_back("syntax: top level must be an object");
    return config;
  }
  detail::ConfigReader r(errors);
  config.name = r.get<std::string>(doc, "name", "name", "");
  config.map_path = r.get<std::string>(doc, "map", "map", "");
  if (config.map_path.empty()) {
    errors.emplace_back("map: missing map path");
  } else {
    const auto path = base_dir / config.map_path;
    try {
      config.map = std::make_shared<const GridMap>(load_map(read_file(path)));
    } catch (const Error& e) {
      errors.push_back("map: " + path.string() + ": " + e.what());
    }
  }

  if (doc.contains("agents")) {
    const auto& list = doc["agents"];
    if (!list.is_array()) {
      errors.emplace_back("agents: expected a list");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string field = "agents[" + std::to_string(i) + "]";
        AgentSpec spec;
        if (!list[i].is_object() || !list[i].contains("cell")) {
          errors.push_back(field + ": expected an object with a cell");
          continue;
        }
        spec.pose.cell = r.cell(list[i]["cell"], field + ".cell");
        spec.pose.heading = detail::parse_heading(r, list[i], field + ".heading");
        if (list[i].contains("waypoints")) {
          spec.waypoints = r.cells(list[i]["waypoints"], field + ".waypoints");
        }
        config.agents.push_back(std::move(spec));
      }
    }
  }
  config.n_agents = r.get<int>(doc, "n_agents", "n_agents", static_cast<int>(config.agents.size()));
  config.placement_seed = r.get<std::uint64_t>(doc, "placement_seed", "placement_seed", 0);

  if (doc.contains("target")) {
    const auto& target = doc["target"];
    if (target.contains("start")) {
      if (target["start"].is_string()) {
        if (target["start"].get<std::string>() != "uniform") {
          errors.emplace_back("target.start: expected \"uniform\" or a list of cells");
        }
      } else {
        config.target_start = r.cells(target["start"], "target.start");
      }
    }
    if (target.contains("script")) {
      config.target_script = r.cells(target["script"], "target.script");
    }
  }

  const json empty = json::object();
  const json& motion = doc.contains("motion") ? doc["motion"] : empty;
  config.motion.p_stay = r.get<double>(motion, "p_stay", "motion.p_stay", config.motion.p_stay);

  const json& sensor = doc.contains("sensor") ? doc["sensor"] : empty;
  config.sensor.p_detect = r.get<double>(sensor, "p_detect", "sensor.p_detect", config.sensor.p_detect);
  config.sensor.pos_noise = r.get<double>(sensor, "pos_noise", "sensor.pos_noise", config.sensor.pos_noise);
  config.sensor.max_range = r.get<int>(sensor, "max_range", "sensor.max_range", config.sensor.max_range);
  config.sensor.fov =
      r.choice(sensor, "fov", "sensor.fov", Fov::kFull, {{"full", Fov::kFull}, {"frontal_half", Fov::kFrontalHalf}});

  const json& filter = doc.contains("filter") ? doc["filter"] : empty;
  const auto particles = r.get<long long>(filter, "n_particles", "filter.n_particles",
                                          static_cast<long long>(config.filter.n_particles));
  if (particles < 0) {
    errors.emplace_back("filter.n_particles: must be positive");
  } else {
    config.filter.n_particles = static_cast<std::size_t>(particles);
  }
  config.filter.window = r.get<int>(filter, "window", "filter.window", config.filter.window);
  config.filter.weight_floor = r.get<double>(filter, "weight_floor", "filter.weight_floor", config.filter.weight_floor);

  const json& comm = doc.contains("comm") ? doc["comm"] : empty;
  config.comm.strategy = r.choice(comm, "strategy", "comm.strategy", Strategy::kNone,
                                  {{"none", Strategy::kNone},
                                   {"selective", Strategy::kSelective},
                                   {"baseline", Strategy::kBaseline},
                                   {"full", Strategy::kFull}});
  const auto query_size = r.get<long long>(comm, "query_size", "comm.query_size",
                                           static_cast<long long>(config.comm.query_size));
  if (query_size < 0) {
    errors.emplace_back("comm.query_size: must be positive");
  } else {
    config.comm.query_size = static_cast<std::size_t>(query_size);
  }
  config.comm.rate = r.get<int>(comm, "rate", "comm.rate", config.comm.rate);
  config.comm.k = r.get<int>(comm, "k", "comm.k", config.comm.k);
  config.comm.latency = r.get<int>(comm, "latency", "comm.latency", config.comm.latency);

  config.k_nbr = r.get<int>(doc, "k_nbr", "k_nbr", config.k_nbr);
  config.horizon = r.get<int>(doc, "horizon", "horizon", config.horizon);
  config.seed = r.get<std::uint64_t>(doc, "seed", "seed", config.seed);
  config.oracle = r.choice(doc, "oracle", "oracle", OracleMode::kFullComm,
                           {{"off", OracleMode::kOff}, {"full_comm", OracleMode::kFullComm}, {"exact", OracleMode::kExact}});
  config.parallel = r.get<bool>(doc, "parallel", "parallel", false);

  if (errors.empty()) {
    const auto invariant_errors = config_errors(config);
    errors.insert(errors.end(), invariant_errors.begin(), invariant_errors.end());
  }
  return config;
}

/// Every problem with the scenario file at `path`; empty means it is runnable. Throws IoError if unreadable.
inline std::vector<std::string> validate_config(const std::filesystem::path& path) {
  std::vector<std::string> errors;
  parse_config(read_file(path), path.parent_path(), errors);
  return errors;
}

/// Loads and validates a scenario file, throwing ValidationError listing every problem.
inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::vector<std::string> errors;
  ScenarioConfig config = parse_config(read_file(path), path.parent_path(), errors);
  if (!errors.empty()) {
    std::string message = path.string() + ": invalid scenario:";
    for (const auto& e : errors) {
      message += "\n  " + e;
    }
    throw ValidationError(message);
  }
  return config;
}

}  // namespace dpf

#endif
