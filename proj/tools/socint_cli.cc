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

// Command-line front end for the experiment pipeline.
//
//   socint_cli <command> --config cfg.json [--out dir] [--seed s]
//              [--threads n] [--format csv|json]
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or protocol error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "socint/dataset_io.h"
#include "socint/errors.h"
#include "socint/experiments/config.h"
#include "socint/experiments/plot.h"
#include "socint/experiments/runner.h"
#include "socint/experiments/writers.h"

namespace {

namespace ex = socint::experiments;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string format = "csv";
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "experiment config (JSON)")->required();
  cmd->add_option("--out", f.out, "output directory (default: config output_dir)");
  cmd->add_option("--seed", f.seed, "override the config master seed");
  cmd->add_option("--threads", f.threads, "worker threads")
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--format", f.format, "primary output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

struct Loaded {
  ex::ExperimentConfig config;
  std::string out_dir;
  ex::RunOptions options;
};

Loaded Load(const CommonFlags& f) {
  Loaded l;
  l.config = ex::LoadConfig(f.config);
  if (f.seed) l.config.master_seed = *f.seed;
  l.out_dir = f.out.empty() ? l.config.output_dir : f.out;
  l.options.threads = f.threads;
  return l;
}

std::string Dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void Say(const std::string& what, const std::string& path) {
  std::cout << what << ": " << path << "\n";
}

int CmdEquilibria(const CommonFlags& f, const std::string& joint_flag) {
  Loaded l = Load(f);
  const socint::GameClass game = ex::BuildGame(l.config.game);
  socint::JointType joint{0, game.n_types() > 1 ? 1 : 0};
  if (l.config.equilibria_joint_type) joint = *l.config.equilibria_joint_type;
  if (!joint_flag.empty()) {
    char comma = 0;
    std::istringstream in(joint_flag);
    if (!(in >> joint.theta1 >> comma >> joint.theta2) || comma != ',' ||
        !in.eof()) {
      throw socint::ConfigError("--joint-type must look like 0,1");
    }
  }
  nlohmann::ordered_json report = ex::EquilibriaReport(game, joint);
  nlohmann::ordered_json stamped;
  stamped["experiment_id"] = l.config.experiment_id;
  stamped["config_hash"] = l.config.config_hash;
  stamped["master_seed"] = l.config.master_seed;
  for (auto& [k, v] : report.items()) stamped[k] = v;
  if (f.format == "json") {
    std::cout << Dump(stamped);
  } else {
    std::cout << "kind,index,strategy1,strategy2,payoff1,payoff2\n";
    auto rows = [](const char* kind, const nlohmann::ordered_json& list) {
      int i = 0;
      for (const auto& e : list) {
        std::string s1, s2;
        for (double p : e["strategy1"]) s1 += (s1.empty() ? "" : " ") + ex::Fmt(p);
        for (double p : e["strategy2"]) s2 += (s2.empty() ? "" : " ") + ex::Fmt(p);
        std::cout << kind << ',' << i++ << ',' << s1 << ',' << s2 << ','
                  << ex::Fmt(e["payoff1"].get<double>()) << ','
                  << ex::Fmt(e["payoff2"].get<double>()) << '\n';
      }
    };
    rows("nash", stamped["nash"]);
    rows("pone", stamped["pone"]);
    if (stamped.contains("worst_pone_for_seat1")) {
      rows("worst_pone_seat1",
           nlohmann::ordered_json::array({stamped["worst_pone_for_seat1"]}));
      rows("worst_pone_seat2",
           nlohmann::ordered_json::array({stamped["worst_pone_for_seat2"]}));
    }
  }
  if (!f.out.empty()) {
    Say("report", ex::WriteFile(l.out_dir, "equilibria.json", Dump(stamped)));
  }
  return 0;
}

int CmdDataset(const CommonFlags& f, std::optional<int> k_flag) {
  Loaded l = Load(f);
  const ex::Context ctx = ex::BuildContext(l.config);
  const int k = k_flag ? *k_flag : l.config.dataset_k;
  if (k < 1) throw socint::ConfigError("--k must be >= 1");
  const socint::Dataset d = ex::GenerateDatasetParallel(
      ctx.population, ctx.type_dist, k, ctx.game, ex::DatasetSeed(l.config, 0),
      l.options.threads);
  const std::string text = socint::SerializeDataset(d);
  const std::string checksum = socint::HexDigest(socint::Fnv1a64(text));
  const std::string path = ex::WriteFile(l.out_dir, "dataset.jsonl", text);
  nlohmann::ordered_json side;
  side["experiment_id"] = l.config.experiment_id;
  side["config_hash"] = l.config.config_hash;
  side["master_seed"] = l.config.master_seed;
  side["dataset_seed"] = ex::DatasetSeed(l.config, 0);
  side["k"] = k;
  side["file"] = "dataset.jsonl";
  side["checksum_fnv1a64"] = checksum;
  ex::WriteFile(l.out_dir, "dataset.meta.json", Dump(side));
  std::cout << "k=" << k << " path=" << path << " checksum=fnv1a64:" << checksum
            << "\n";
  return 0;
}

void WriteIcOutputs(const Loaded& l, const std::string& format,
                    const ex::IcResults& r) {
  const auto& c = l.config;
  const std::string data_name = format == "json" ? "results.json" : "results.csv";
  if (format == "json") {
    Say("results", ex::WriteFile(l.out_dir, data_name, Dump(ex::IcJson(c, r))));
  } else {
    Say("results", ex::WriteFile(l.out_dir, data_name, ex::IcCsv(c, r)));
  }
  if (r.certification) {
    Say("certification",
        ex::WriteFile(l.out_dir, "certification.json",
                      Dump(ex::CertificationJson(c, *r.certification))));
  }
  ex::WriteFile(l.out_dir, "plot_manifest.json", Dump(ex::PlotManifest(c, data_name)));
  ex::WriteFile(l.out_dir, "regret_vs_k.svg",
                ex::RenderSvg(ex::IcChart(r, "alt_regret", "Altruistic regret vs K",
                                          "mean per-step altruistic regret")));
  ex::WriteFile(l.out_dir, "tv_vs_k.svg",
                ex::RenderSvg(ex::IcChart(r, "tv", "Imitation TV vs K",
                                          "TV distance")));
  ex::WriteFile(l.out_dir, "timings.csv", ex::TimingsCsv(c, r));
  if (r.bound.source != "requested") {
    std::cout << "note: theorem1_bound evaluated with " << r.bound.source
              << " (delta=" << ex::Fmt(r.bound.delta)
              << ", epsilon=" << ex::Fmt(r.bound.epsilon)
              << ") in place of the population constants\n";
  }
  for (const auto& row : r.rows) {
    std::cout << "seed=" << row.seed << " k=" << row.k
              << " T~=" << row.imitation_horizon
              << " alt_regret=" << ex::Fmt(row.alt_regret_mean)
              << " bound=" << ex::Fmt(row.theorem1_bound)
              << " tv=" << ex::Fmt(row.tv) << " (" << row.tv_method << ")\n";
  }
}

int CmdRunIc(const CommonFlags& f, const std::string& dataset) {
  Loaded l = Load(f);
  if (!dataset.empty()) l.options.dataset_path = dataset;
  WriteIcOutputs(l, f.format, ex::RunIc(l.config, l.options));
  return 0;
}

int CmdCertify(const CommonFlags& f) {
  Loaded l = Load(f);
  const ex::Context ctx = ex::BuildContext(l.config);
  const socint::CertificationReport r = ex::RunCertification(l.config, ctx);
  Say("certification", ex::WriteFile(l.out_dir, "certification.json",
                                     Dump(ex::CertificationJson(l.config, r))));
  std::cout << "pass=" << (r.pass ? "true" : "false")
            << " epsilon_measured=" << ex::Fmt(r.epsilon_measured)
            << " delta_measured=" << ex::Fmt(r.delta_measured)
            << " delta_upper=" << ex::Fmt(r.delta_upper)
            << " binding=" << r.binding << "\n";
  return 0;
}

int RunAblation(const Loaded& l, const std::string& format, const std::string& which) {
  if (which == "A_grim_trigger" || which == "A") {
    const ex::AblationAResult r = ex::RunAblationA(l.config, l.options);
    if (format == "json") {
      Say("results", ex::WriteFile(l.out_dir, "ablation_A.json",
                                   Dump(ex::AblationAJson(l.config, r))));
    } else {
      Say("results",
          ex::WriteFile(l.out_dir, "ablation_A.csv", ex::AblationACsv(l.config, r)));
      ex::WriteFile(l.out_dir, "ablation_A.json", Dump(ex::AblationAJson(l.config, r)));
    }
    std::cout << "ic_partner_payoff=" << ex::Fmt(r.rows[0].partner_payoff_mean)
              << " si_partner_payoff=" << ex::Fmt(r.rows[1].partner_payoff_mean)
              << " drop=" << ex::Fmt(r.drop) << " pass=" << (r.pass ? "true" : "false")
              << "\n";
    return 0;
  }
  if (which == "B_inefficient_cce" || which == "B") {
    const ex::AblationBResult r = ex::RunAblationB(l.config, l.options);
    if (format == "json") {
      Say("results", ex::WriteFile(l.out_dir, "ablation_B.json",
                                   Dump(ex::AblationBJson(l.config, r))));
    } else {
      Say("results",
          ex::WriteFile(l.out_dir, "ablation_B.csv", ex::AblationBCsv(l.config, r)));
      ex::WriteFile(l.out_dir, "ablation_B.json", Dump(ex::AblationBJson(l.config, r)));
    }
    std::cout << "max_convergence_tv=" << ex::Fmt(r.max_convergence_tv)
              << " watchdog_fired=" << (r.any_fired ? "true" : "false")
              << " max_type_signal_tv=" << ex::Fmt(r.max_signal_tv)
              << " pass=" << (r.pass ? "true" : "false") << "\n";
    return 0;
  }
  throw socint::ConfigError("unknown ablation '" + which +
                            "' (expected A_grim_trigger or B_inefficient_cce)");
}

int CmdBounds(const CommonFlags& f) {
  Loaded l = Load(f);
  const auto rows = ex::RunBounds(l.config);
  const std::string text = f.format == "json"
                               ? Dump(ex::BoundsJson(l.config, rows))
                               : ex::BoundsCsv(l.config, rows);
  std::cout << text;
  if (!f.out.empty()) {
    Say("bounds", ex::WriteFile(l.out_dir,
                                f.format == "json" ? "bounds.json" : "bounds.csv",
                                text));
  }
  return 0;
}

// certify (inside run-ic) + run-ic + bounds + any configured ablations.
int CmdSweep(const CommonFlags& f) {
  Loaded l = Load(f);
  WriteIcOutputs(l, f.format, ex::RunIc(l.config, l.options));
  const auto rows = ex::RunBounds(l.config);
  Say("bounds", f.format == "json"
                    ? ex::WriteFile(l.out_dir, "bounds.json",
                                    Dump(ex::BoundsJson(l.config, rows)))
                    : ex::WriteFile(l.out_dir, "bounds.csv",
                                    ex::BoundsCsv(l.config, rows)));
  if (l.config.source.contains("ablation_a")) RunAblation(l, f.format, "A");
  if (l.config.source.contains("ablation_b")) RunAblation(l, f.format, "B");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Socially intelligent cooperation experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string joint_type, dataset_path, which;
  std::optional<int> k_flag;

  auto* equilibria = app.add_subcommand("equilibria", "NE, PONE and worst PONE of one joint type");
  AddCommon(equilibria, flags);
  equilibria->add_option("--joint-type", joint_type, "joint type as theta1,theta2");

  auto* dataset = app.add_subcommand("dataset", "generate a self-play dataset");
  AddCommon(dataset, flags);
  dataset->add_option("--k", k_flag, "number of episodes (default: config dataset.k)");

  auto* run_ic = app.add_subcommand("run-ic", "evaluate imitate-then-commit over the K and T~ sweep");
  AddCommon(run_ic, flags);
  run_ic->add_option("--dataset", dataset_path,
                     "use this dataset file (first K episodes) instead of regenerating");

  auto* certify = app.add_subcommand("certify", "certify the population as an SI class");
  AddCommon(certify, flags);

  auto* ablation = app.add_subcommand("ablation", "run ablation A_grim_trigger or B_inefficient_cce");
  AddCommon(ablation, flags);
  ablation->add_option("which,--which", which, "A_grim_trigger | B_inefficient_cce")
      ->required();

  auto* bounds = app.add_subcommand("bounds", "tabulate the imitation and altruistic-regret bounds");
  AddCommon(bounds, flags);

  auto* sweep = app.add_subcommand("sweep", "run-ic, bounds and configured ablations");
  AddCommon(sweep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*equilibria) return CmdEquilibria(flags, joint_type);
    if (*dataset) return CmdDataset(flags, k_flag);
    if (*run_ic) return CmdRunIc(flags, dataset_path);
    if (*certify) return CmdCertify(flags);
    if (*ablation) return RunAblation(Load(flags), flags.format, which);
    if (*bounds) return CmdBounds(flags);
    if (*sweep) return CmdSweep(flags);
  } catch (const socint::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const socint::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
