// Copyright 2026 The socint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCINT_EXPERIMENTS_WRITERS_H_
#define SOCINT_EXPERIMENTS_WRITERS_H_

// Tidy CSV and JSON renderings of runner output.  Every artifact carries the
// config hash and master seed; nothing time-dependent is written except the
// timings sidecar.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "socint/errors.h"
#include "socint/experiments/config.h"
#include "socint/experiments/plot.h"
#include "socint/experiments/runner.h"
#include "socint/experiments/support.h"
#include "socint/metrics.h"

namespace socint::experiments {

using OrderedJson = nlohmann::ordered_json;

inline const char* kIcCsvHeader =
    "experiment_id,config_hash,master_seed,seed,k,imitation_horizon,horizon,"
    "ai_seat,partner_seat,population,eval_episodes,alt_regret_mean,"
    "alt_regret_ci_low,alt_regret_ci_high,alt_regret_q95,alt_regret_pos_mean,"
    "alt_regret_pos_q95,ext_regret_mean,partner_payoff_mean,ai_payoff_mean,tv,"
    "tv_method,lemma1_bound,lemma1_vacuous,theorem1_bound,bound_delta,"
    "bound_epsilon,bound_source,below_bound";

inline const char* kBoundsCsvHeader =
    "experiment_id,config_hash,master_seed,n_actions,imitation_horizon,horizon,"
    "n_types,k,delta,epsilon,lemma1_bound,lemma1_vacuous,theorem1_bound";

inline const char* kAblationACsvHeader =
    "experiment_id,config_hash,master_seed,arm,population,k,imitation_horizon,"
    "horizon,eval_episodes,partner_payoff_mean,partner_payoff_ci_low,"
    "partner_payoff_ci_high,alt_regret_mean";

inline const char* kAblationBCsvHeader =
    "experiment_id,config_hash,master_seed,check,subject,seed,horizon,samples,"
    "tv,coupled_difference,watchdog_fired,tolerance,pass";

namespace internal {

// Quotes a CSV field when it holds a separator or quote.
inline std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string Prefix(const ExperimentConfig& c) {
  return CsvField(c.experiment_id) + "," + c.config_hash + "," +
         std::to_string(c.master_seed);
}

inline const char* Bool(bool b) { return b ? "true" : "false"; }

inline OrderedJson Stamp(const ExperimentConfig& c) {
  OrderedJson j;
  j["experiment_id"] = c.experiment_id;
  j["config_hash"] = c.config_hash;
  j["master_seed"] = c.master_seed;
  return j;
}

// JSON has no NaN; missing measurements become null.
inline OrderedJson Number(double x) {
  return std::isnan(x) ? OrderedJson(nullptr) : OrderedJson(x);
}

}  // namespace internal

inline std::string IcCsv(const ExperimentConfig& c, const IcResults& r) {
  std::ostringstream o;
  o << kIcCsvHeader << '\n';
  for (const IcRow& x : r.rows) {
    o << internal::Prefix(c) << ',' << x.seed << ',' << x.k << ','
      << x.imitation_horizon << ',' << x.horizon << ',' << x.ai_seat << ','
      << x.partner_seat << ',' << internal::CsvField(x.population) << ','
      << x.eval_episodes << ',' << Fmt(x.alt_regret_mean) << ','
      << Fmt(x.alt_regret_ci_low) << ',' << Fmt(x.alt_regret_ci_high) << ','
      << Fmt(x.alt_regret_q95) << ',' << Fmt(x.alt_regret_pos_mean) << ','
      << Fmt(x.alt_regret_pos_q95) << ',' << Fmt(x.ext_regret_mean) << ','
      << Fmt(x.partner_payoff_mean) << ',' << Fmt(x.ai_payoff_mean) << ','
      << (std::isnan(x.tv) ? "" : Fmt(x.tv)) << ',' << x.tv_method << ','
      << Fmt(x.lemma1_bound) << ',' << internal::Bool(x.lemma1_vacuous) << ','
      << Fmt(x.theorem1_bound) << ',' << Fmt(x.bound_delta) << ','
      << Fmt(x.bound_epsilon) << ',' << x.bound_source << ','
      << internal::Bool(x.below_bound) << '\n';
  }
  return o.str();
}

inline OrderedJson IcJson(const ExperimentConfig& c, const IcResults& r) {
  OrderedJson j = internal::Stamp(c);
  j["bound_inputs"] = {
      {"delta", r.bound.delta},
      {"epsilon", r.bound.epsilon},
      {"source", r.bound.source},
      {"note",
       "theorem1_bound uses these (delta, epsilon); with a certification "
       "section they are measured values substituted for the population "
       "constants"}};
  j["rows"] = OrderedJson::array();
  for (const IcRow& x : r.rows) {
    j["rows"].push_back({{"seed", x.seed},
                         {"k", x.k},
                         {"imitation_horizon", x.imitation_horizon},
                         {"horizon", x.horizon},
                         {"ai_seat", x.ai_seat},
                         {"partner_seat", x.partner_seat},
                         {"population", x.population},
                         {"eval_episodes", x.eval_episodes},
                         {"alt_regret_mean", x.alt_regret_mean},
                         {"alt_regret_ci_low", x.alt_regret_ci_low},
                         {"alt_regret_ci_high", x.alt_regret_ci_high},
                         {"alt_regret_q95", x.alt_regret_q95},
                         {"alt_regret_pos_mean", x.alt_regret_pos_mean},
                         {"alt_regret_pos_q95", x.alt_regret_pos_q95},
                         {"ext_regret_mean", x.ext_regret_mean},
                         {"partner_payoff_mean", x.partner_payoff_mean},
                         {"ai_payoff_mean", x.ai_payoff_mean},
                         {"tv", internal::Number(x.tv)},
                         {"tv_method", x.tv_method},
                         {"lemma1_bound", x.lemma1_bound},
                         {"lemma1_vacuous", x.lemma1_vacuous},
                         {"theorem1_bound", x.theorem1_bound},
                         {"bound_delta", x.bound_delta},
                         {"bound_epsilon", x.bound_epsilon},
                         {"bound_source", x.bound_source},
                         {"below_bound", x.below_bound}});
  }
  return j;
}

inline std::string TimingsCsv(const ExperimentConfig& c, const IcResults& r) {
  std::ostringstream o;
  o << "experiment_id,config_hash,master_seed,seed,k,imitation_horizon,"
       "wall_seconds\n";
  for (const IcRow& x : r.rows) {
    o << internal::Prefix(c) << ',' << x.seed << ',' << x.k << ','
      << x.imitation_horizon << ',' << Fmt(x.wall_seconds) << '\n';
  }
  return o.str();
}

inline std::string BoundsCsv(const ExperimentConfig& c,
                             const std::vector<BoundRow>& rows) {
  std::ostringstream o;
  o << kBoundsCsvHeader << '\n';
  for (const BoundRow& b : rows) {
    o << internal::Prefix(c) << ',' << b.n_actions << ',' << b.imitation_horizon
      << ',' << b.horizon << ',' << b.n_types << ',' << b.k << ','
      << Fmt(b.delta) << ',' << Fmt(b.epsilon) << ',' << Fmt(b.lemma1_bound)
      << ',' << internal::Bool(b.lemma1_vacuous) << ',' << Fmt(b.theorem1_bound)
      << '\n';
  }
  return o.str();
}

inline OrderedJson BoundsJson(const ExperimentConfig& c,
                              const std::vector<BoundRow>& rows) {
  OrderedJson j = internal::Stamp(c);
  j["rows"] = OrderedJson::array();
  for (const BoundRow& b : rows) {
    j["rows"].push_back({{"n_actions", b.n_actions},
                         {"imitation_horizon", b.imitation_horizon},
                         {"horizon", b.horizon},
                         {"n_types", b.n_types},
                         {"k", b.k},
                         {"delta", b.delta},
                         {"epsilon", b.epsilon},
                         {"lemma1_bound", b.lemma1_bound},
                         {"lemma1_vacuous", b.lemma1_vacuous},
                         {"theorem1_bound", b.theorem1_bound}});
  }
  return j;
}

inline std::string AblationACsv(const ExperimentConfig& c,
                                const AblationAResult& r) {
  std::ostringstream o;
  o << kAblationACsvHeader << '\n';
  for (const AblationARow& x : r.rows) {
    o << internal::Prefix(c) << ',' << x.arm << ','
      << internal::CsvField(x.population) << ',' << x.k << ','
      << x.imitation_horizon << ',' << x.horizon << ',' << x.eval_episodes << ','
      << Fmt(x.partner_payoff_mean) << ',' << Fmt(x.partner_payoff_ci_low) << ','
      << Fmt(x.partner_payoff_ci_high) << ',' << Fmt(x.alt_regret_mean) << '\n';
  }
  return o.str();
}

inline OrderedJson AblationAJson(const ExperimentConfig& c,
                                 const AblationAResult& r) {
  OrderedJson j = internal::Stamp(c);
  j["ablation"] = "A_grim_trigger";
  j["drop"] = r.drop;
  j["required_drop"] = r.required_drop;
  j["pass"] = r.pass;
  j["rows"] = OrderedJson::array();
  for (const AblationARow& x : r.rows) {
    j["rows"].push_back({{"arm", x.arm},
                         {"population", x.population},
                         {"k", x.k},
                         {"imitation_horizon", x.imitation_horizon},
                         {"horizon", x.horizon},
                         {"eval_episodes", x.eval_episodes},
                         {"partner_payoff_mean", x.partner_payoff_mean},
                         {"partner_payoff_ci_low", x.partner_payoff_ci_low},
                         {"partner_payoff_ci_high", x.partner_payoff_ci_high},
                         {"alt_regret_mean", x.alt_regret_mean}});
  }
  return j;
}

inline std::string AblationBCsv(const ExperimentConfig& c,
                                const AblationBResult& r) {
  std::ostringstream o;
  o << kAblationBCsvHeader << '\n';
  for (const AblationBRow& x : r.rows) {
    o << internal::Prefix(c) << ',' << x.check << ','
      << internal::CsvField(x.subject) << ',' << x.seed << ',' << x.horizon
      << ',' << x.samples << ',' << Fmt(x.tv) << ','
      << Fmt(x.coupled_difference) << ',' << internal::Bool(x.watchdog_fired)
      << ',' << Fmt(x.tolerance) << ',' << internal::Bool(x.pass) << '\n';
  }
  return o.str();
}

inline OrderedJson AblationBJson(const ExperimentConfig& c,
                                 const AblationBResult& r) {
  OrderedJson j = internal::Stamp(c);
  j["ablation"] = "B_inefficient_cce";
  j["target"] = r.target;
  j["target_payoffs"] = {r.target_payoff1, r.target_payoff2};
  j["max_convergence_tv"] = r.max_convergence_tv;
  j["any_watchdog_fired"] = r.any_fired;
  j["max_type_signal_tv"] = r.max_signal_tv;
  j["pass"] = r.pass;
  j["note"] =
      "type_signal tv is the plug-in TV between histograms of coupled "
      "rollouts (same seeds under each joint type); it never exceeds "
      "coupled_difference";
  j["rows"] = OrderedJson::array();
  for (const AblationBRow& x : r.rows) {
    j["rows"].push_back({{"check", x.check},
                         {"subject", x.subject},
                         {"seed", x.seed},
                         {"horizon", x.horizon},
                         {"samples", x.samples},
                         {"tv", x.tv},
                         {"coupled_difference", x.coupled_difference},
                         {"watchdog_fired", x.watchdog_fired},
                         {"tolerance", x.tolerance},
                         {"pass", x.pass}});
  }
  return j;
}

inline OrderedJson CertificationJson(const ExperimentConfig& c,
                                     const CertificationReport& r) {
  OrderedJson j = internal::Stamp(c);
  j["report"] = ToJson(r);
  return j;
}

// Means over repetitions of one metric, one series per T~.
inline LineChart IcChart(const IcResults& r, const std::string& metric,
                         const std::string& title, const std::string& y_label) {
  std::map<int, std::map<long long, std::pair<double, int>>> acc;
  for (const IcRow& x : r.rows) {
    const double v = metric == "tv" ? x.tv : x.alt_regret_mean;
    if (std::isnan(v)) continue;
    auto& cell = acc[x.imitation_horizon][x.k];
    cell.first += v;
    cell.second += 1;
  }
  LineChart chart{title, "dataset size K", y_label, true, {}};
  for (const auto& [t, by_k] : acc) {
    PlotSeries s{"T~=" + std::to_string(t), {}};
    for (const auto& [k, sum] : by_k) {
      s.points.push_back({static_cast<double>(k), sum.first / sum.second});
    }
    chart.series.push_back(std::move(s));
  }
  return chart;
}

inline OrderedJson PlotManifest(const ExperimentConfig& c,
                                const std::string& csv_name) {
  OrderedJson j = internal::Stamp(c);
  j["plots"] = OrderedJson::array();
  j["plots"].push_back({{"file", "regret_vs_k.svg"},
                        {"data", csv_name},
                        {"kind", "line"},
                        {"x", "k"},
                        {"y", "alt_regret_mean"},
                        {"y_interval", {"alt_regret_ci_low", "alt_regret_ci_high"}},
                        {"series", "imitation_horizon"},
                        {"aggregate", "mean over seed"},
                        {"x_scale", "log"},
                        {"x_label", "dataset size K"},
                        {"y_label", "mean per-step altruistic regret"},
                        {"reference", "theorem1_bound"}});
  j["plots"].push_back({{"file", "tv_vs_k.svg"},
                        {"data", csv_name},
                        {"kind", "line"},
                        {"x", "k"},
                        {"y", "tv"},
                        {"series", "imitation_horizon"},
                        {"aggregate", "mean over seed"},
                        {"x_scale", "log"},
                        {"x_label", "dataset size K"},
                        {"y_label", "TV distance of imitation rollouts"},
                        {"reference", "lemma1_bound"}});
  return j;
}

// Writes `contents` to dir/name, creating dir; returns the path.
inline std::string WriteFile(const std::string& dir, const std::string& name,
                             const std::string& contents) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + dir +
                             "': " + ec.message());
  }
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
  return path;
}

}  // namespace socint::experiments

#endif  // SOCINT_EXPERIMENTS_WRITERS_H_
