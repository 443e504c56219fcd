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


#ifndef DPF_CLI_HPP
#define DPF_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dpf/config.hpp"
#include "dpf/demo.hpp"
#include "dpf/engine.hpp"
#include "dpf/io.hpp"

namespace dpf {

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw IoError("error writing " + path);
  }
}

inline Strategy parse_strategy(const std::string& text) {
  if (text == "selective") return Strategy::kSelective;
  if (text == "baseline") return Strategy::kBaseline;
  if (text == "full") return Strategy::kFull;
  if (text == "none") return Strategy::kNone;
  throw ValidationError("unknown strategy '" + text + "'");
}

inline void apply_overrides(ScenarioConfig& config, const std::optional<std::uint64_t>& seed,
                            const std::string& oracle) {
  if (seed) {
    config.seed = *seed;
  }
  if (oracle == "off") {
    config.oracle = OracleMode::kOff;
  } else if (oracle == "on" && config.oracle == OracleMode::kOff) {
    config.oracle = OracleMode::kFullComm;
  }
}

inline std::string format_kl(double kl) {
  if (std::isnan(kl)) {
    return "NA";
  }
  std::ostringstream s;
  s << std::setprecision(6) << kl;
  return s.str();
}

}  // namespace detail

/// Command-line entry point; returns the process exit status.
/**
 * Subcommands: run, sweep, eval, demo-fig3, validate. Every failure prints a message to `err`
 * and returns nonzero; successful commands print a one-line summary to `out`.
 */
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized multi-agent tracking with distributed trajectory particle filters", "dpf"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string metrics_path;
  std::string format = "csv";
  std::string oracle = "config";
  std::optional<std::uint64_t> seed;
  std::vector<int> rates;
  std::vector<std::string> strategies;
  int repeats = 1;

  auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) {
      cmd->add_option("--config", config_path, "Scenario file (JSON)")->required();
    }
    cmd->add_option("--out", out_path, "Output file")->required();
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write its metrics log");
  add_common(run_cmd, true);
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--oracle", oracle, "Score agents against the oracle")->check(CLI::IsMember({"on", "off"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a strategy x rate x repeat grid and summarize it");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--seed", seed, "Override the base seed");
  sweep_cmd->add_option("--rates", rates, "Communication rates (steps between rounds)")->delimiter(',')->required();
  sweep_cmd->add_option("--strategies", strategies, "Strategies to compare")->delimiter(',')->required();
  sweep_cmd->add_option("--repeats", repeats, "Seeded repeats per point")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--oracle", oracle, "Score agents against the oracle")->check(CLI::IsMember({"on", "off"}));

  auto* eval_cmd = app.add_subcommand("eval", "Compare the full-communication filter and agents with the exact oracle");
  add_common(eval_cmd, true);
  eval_cmd->add_option("--metrics", metrics_path, "Per-agent metrics scored against the exact oracle")->required();
  eval_cmd->add_option("--seed", seed, "Override the scenario seed");

  auto* demo_cmd = app.add_subcommand("demo-fig3", "Corridor demonstration of momentary posterior combination");
  add_common(demo_cmd, false);
  demo_cmd->add_option("--config", config_path, "Corridor scenario file (defaults to the built-in one)");

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file without running it");
  validate_cmd->add_option("--config", config_path, "Scenario file (JSON)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const OutputFormat fmt = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
    if (*validate_cmd) {
      const auto errors = validate_config(config_path);
      if (errors.empty()) {
        out << config_path << ": ok\n";
        return 0;
      }
      for (const auto& e : errors) {
        err << config_path << ": " << e << '\n';
      }
      return 1;
    }
    if (*demo_cmd) {
      const auto demo = run_corridor_demo(config_path.empty() ? corridor_scenario() : load_config(config_path),
                                          corridor_far_side());
      auto file = detail::open_output(out_path);
      if (fmt == OutputFormat::kJson) {
        nlohmann::json doc;
        doc["exact_far_side"] = demo.exact_far_side;
        doc["product_far_side"] = demo.product_far_side;
        std::ostringstream csv;
        write_corridor_csv(csv, demo);
        doc["cells_csv"] = csv.str();
        file << doc.dump(1) << '\n';
      } else {
        write_corridor_csv(file, demo);
      }
      detail::finish_output(file, out_path);
      out << "far-side mass: exact=" << detail::format_kl(demo.exact_far_side)
          << " momentary_product=" << detail::format_kl(demo.product_far_side) << '\n';
      return 0;
    }

    ScenarioConfig config = load_config(config_path);
    detail::apply_overrides(config, seed, oracle);

    if (*run_cmd) {
      const MetricsLog log = run(config);
      auto file = detail::open_output(out_path);
      if (fmt == OutputFormat::kJson) {
        write_metrics_json(file, log);
      } else {
        write_metrics_csv(file, log);
      }
      detail::finish_output(file, out_path);
      out << "mean_kl=" << detail::format_kl(log.mean_kl()) << " total_bandwidth=" << log.total_scalars
          << " messages=" << log.total_messages << '\n';
      return 0;
    }
    if (*sweep_cmd) {
      std::vector<Strategy> parsed;
      for (const auto& s : strategies) {
        parsed.push_back(detail::parse_strategy(s));
      }
      for (int r : rates) {
        if (r < 1) {
          throw ValidationError("rates must be at least 1");
        }
      }
      const auto rows = sweep(config, rates, parsed, repeats);
      auto file = detail::open_output(out_path);
      if (fmt == OutputFormat::kJson) {
        write_sweep_json(file, rows);
      } else {
        write_sweep_csv(file, rows);
      }
      detail::finish_output(file, out_path);
      double kl = 0.0;
      double bandwidth = 0.0;
      for (const auto& r : rows) {
        kl += r.mean_kl;
        bandwidth += r.bandwidth;
      }
      out << "rows=" << rows.size() << " mean_kl=" << detail::format_kl(kl / static_cast<double>(rows.size()))
          << " mean_bandwidth=" << bandwidth / static_cast<double>(rows.size()) << '\n';
      return 0;
    }
    if (*eval_cmd) {
      config.oracle = OracleMode::kExact;
      const RunResult result = run_detailed(config);
      const auto report = oracle_comparison(config, result.measurements);
      auto file = detail::open_output(out_path);
      auto metrics = detail::open_output(metrics_path);
      if (fmt == OutputFormat::kJson) {
        write_oracle_report_json(file, report);
        write_metrics_json(metrics, result.metrics);
      } else {
        write_oracle_report_csv(file, report);
        write_metrics_csv(metrics, result.metrics);
      }
      detail::finish_output(file, out_path);
      detail::finish_output(metrics, metrics_path);
      double worst = 0.0;
      for (const auto& r : report) {
        worst = std::max(worst, r.kl);
      }
      out << "mean_kl=" << detail::format_kl(result.metrics.mean_kl())
          << " total_bandwidth=" << result.metrics.total_scalars << " reference_max_kl=" << detail::format_kl(worst)
          << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace dpf

#endif
