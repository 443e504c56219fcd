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


#ifndef DPF_IO_HPP
#define DPF_IO_HPP

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpf/engine.hpp"

namespace dpf {

enum class OutputFormat { kCsv, kJson };

inline constexpr int kOutputPrecision = 10;

/// `time,agent,kl_to_oracle,ess,scalars_sent_cum,msgs_sent_cum`; a missing KL is written as NA.
inline void write_metrics_csv(std::ostream& out, const MetricsLog& log) {
  out << std::setprecision(kOutputPrecision);
  out << "time,agent,kl_to_oracle,ess,scalars_sent_cum,msgs_sent_cum\n";
  for (const auto& r : log.rows) {
    out << r.time << ',' << r.agent << ',';
    if (r.kl_to_oracle) {
      out << *r.kl_to_oracle;
    } else {
      out << "NA";
    }
    out << ',' << r.ess << ',' << r.scalars_sent_cum << ',' << r.msgs_sent_cum << '\n';
  }
}

inline nlohmann::json summary_json(const MetricsLog& log) {
  nlohmann::json s;
  const double kl = log.mean_kl();
  s["mean_kl"] = std::isnan(kl) ? nlohmann::json(nullptr) : nlohmann::json(kl);
  s["total_scalars"] = log.total_scalars;
  s["total_messages"] = log.total_messages;
  s["queries"] = log.queries;
  s["responses"] = log.responses;
  s["broadcasts"] = log.broadcasts;
  s["n_agents"] = log.n_agents;
  s["horizon"] = log.horizon;
  return s;
}

inline void write_metrics_json(std::ostream& out, const MetricsLog& log) {
  nlohmann::json doc;
  doc["summary"] = summary_json(log);
  auto& rows = doc["rows"] = nlohmann::json::array();
  for (const auto& r : log.rows) {
    rows.push_back({{"time", r.time},
                    {"agent", r.agent},
                    {"kl_to_oracle", r.kl_to_oracle ? nlohmann::json(*r.kl_to_oracle) : nlohmann::json(nullptr)},
                    {"ess", r.ess},
                    {"scalars_sent_cum", r.scalars_sent_cum},
                    {"msgs_sent_cum", r.msgs_sent_cum}});
  }
  out << doc.dump(1) << '\n';
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << std::setprecision(kOutputPrecision);
  out << "strategy,rate,repeats,bandwidth,messages,mean_kl,std_kl\n";
  for (const auto& r : rows) {
    out << to_string(r.strategy) << ',' << r.rate << ',' << r.repeats << ',' << r.bandwidth << ',' << r.messages
        << ',' << r.mean_kl << ',' << r.std_kl << '\n';
  }
}

inline void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto doc = nlohmann::json::array();
  for (const auto& r : rows) {
    doc.push_back({{"strategy", to_string(r.strategy)},
                   {"rate", r.rate},
                   {"repeats", r.repeats},
                   {"bandwidth", r.bandwidth},
                   {"messages", r.messages},
                   {"mean_kl", r.mean_kl},
                   {"std_kl", r.std_kl}});
  }
  out << doc.dump(1) << '\n';
}

inline void write_oracle_report_csv(std::ostream& out, const std::vector<OracleReportRow>& rows) {
  out << std::setprecision(kOutputPrecision);
  out << "time,kl,ess\n";
  for (const auto& r : rows) {
    out << r.time << ',' << r.kl << ',' << r.ess << '\n';
  }
}

inline void write_oracle_report_json(std::ostream& out, const std::vector<OracleReportRow>& rows) {
  auto doc = nlohmann::json::array();
  for (const auto& r : rows) {
    doc.push_back({{"time", r.time}, {"kl", r.kl}, {"ess", r.ess}});
  }
  out << doc.dump(1) << '\n';
}

}  // namespace dpf

#endif
