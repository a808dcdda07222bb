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

#ifndef SOCINT_EXPERIMENTS_CONFIG_H_
#define SOCINT_EXPERIMENTS_CONFIG_H_

// One JSON document drives every CLI command.  Parsing is strict: unknown
// member kinds, out-of-range values and missing sections raise ConfigError
// with the offending path.

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "socint/agents.h"
#include "socint/dataset_io.h"
#include "socint/equilibrium.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/metrics.h"
#include "socint/population.h"

namespace socint::experiments {

using Json = nlohmann::json;

struct GameSpec {
  std::string family = "coordpref";
  int n_actions = 2;
  double off_peak = 0.6;
  int horizon = 100;
  std::vector<std::vector<std::vector<double>>> matrices;
};

struct MemberSpec {
  std::string name;
  std::string kind;
  double weight = 1.0;
  Json params = Json::object();
};

struct PopulationSpec {
  std::string name;
  std::vector<MemberSpec> members;
};

struct TypeDistributionSpec {
  std::string kind = "uniform";
  std::vector<double> weights;
  JointType joint_type;
};

struct CertificationSpec {
  int trials = 100;
  int consistency_horizon = 200;
  int compatibility_horizon = 10;
  std::vector<std::string> adversaries = {"constant_0", "constant_1", "uniform",
                                          "adversarial_flip"};
  // Feed certified values into the Theorem 1 bound instead of the
  // requested ones.
  bool use_for_bounds = true;
};

struct TvSpec {
  std::string method = "auto";  // auto | exact | mc | none
  int samples = 10000;
};

struct AblationASpec {
  std::optional<PopulationSpec> population;
  std::optional<PopulationSpec> reference_population;
  int k = 10;
  int imitation_horizon = 1;
  int eval_episodes = 500;
  double required_drop = 0.2;
};

struct AblationBSpec {
  JointType target_joint_type{0, 1};
  double watchdog_slack = 0.5;
  std::uint64_t shared_seed = 17;
  int convergence_horizon = 100000;
  int convergence_seeds = 5;
  int signal_history_length = 0;  // 0: the full game horizon
  int signal_samples = 10000;
  double tolerance = 0.05;
};

struct BoundsSpec {
  int n_actions = 2;
  int imitation_horizon = 2;
  int horizon = 100;
  int n_types = 2;
  std::vector<long long> k_values = {10, 100, 1000, 10000, 100000};
  double delta = 0.05;
  double epsilon = 0.01;
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  std::uint64_t master_seed = 0;
  GameSpec game;
  PopulationSpec population;
  TypeDistributionSpec type_distribution;
  Seat ai_seat = Seat::kTwo;
  std::vector<long long> k_values = {100};
  std::vector<int> imitation_horizons = {1};
  std::vector<std::uint64_t> seeds = {0};
  int eval_episodes = 100;
  double delta = 0.05;
  double epsilon = 0.15;
  TvSpec tv;
  std::optional<CertificationSpec> certification;
  int dataset_k = 100;
  std::optional<JointType> equilibria_joint_type;
  AblationASpec ablation_a;
  AblationBSpec ablation_b;
  std::vector<BoundsSpec> bounds = {BoundsSpec{}};
  std::string output_dir = "out";

  // FNV-1a of the canonical (sorted-key) dump of the source document.
  std::string config_hash;
  Json source;
};

namespace internal {

[[noreturn]] inline void Fail(const std::string& path, const std::string& what) {
  throw ConfigError("config " + path + ": " + what);
}

template <typename T>
T Get(const Json& obj, const std::string& path, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    Fail(path + "." + key, "has the wrong type");
  }
}

template <typename T>
T Require(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) Fail(path, std::string("missing '") + key + "'");
  return Get<T>(obj, path, key, T{});
}

inline JointType ParseJointType(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    Fail(path, "joint type must be [theta1, theta2]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

inline MemberSpec ParseMember(const Json& j, const std::string& path) {
  MemberSpec m;
  if (j.is_string()) {
    m.kind = j.get<std::string>();
  } else if (j.is_object()) {
    m.kind = Require<std::string>(j, path, "kind");
    m.weight = Get<double>(j, path, "weight", 1.0);
    m.params = j;
  } else {
    Fail(path, "member must be a name or an object");
  }
  // "always_<a>" and "constant_<a>" are shorthands for a constant member.
  for (const std::string prefix : {"always_", "constant_"}) {
    if (m.kind.rfind(prefix, 0) == 0 && m.kind.size() > prefix.size()) {
      try {
        m.params["action"] = std::stoi(m.kind.substr(prefix.size()));
      } catch (const std::exception&) {
        Fail(path, "unknown member kind '" + m.kind + "'");
      }
      m.name = m.kind;
      m.kind = "constant";
    }
  }
  if (j.is_object() && j.contains("name")) {
    m.name = Require<std::string>(j, path, "name");
  }
  if (m.name.empty()) {
    m.name = m.kind == "constant"
                 ? "constant_" + std::to_string(m.params.value("action", 0))
                 : m.kind;
  }
  if (!(m.weight >= 0.0)) Fail(path + ".weight", "must be >= 0");
  return m;
}

inline PopulationSpec ParsePopulation(const Json& j, const std::string& path) {
  PopulationSpec p;
  if (j.is_string()) {
    p.members.push_back(ParseMember(j, path));
    p.name = p.members.front().name;
    return p;
  }
  if (!j.is_object()) Fail(path, "population must be a name or an object");
  if (!j.contains("members") || !j["members"].is_array() || j["members"].empty()) {
    Fail(path, "population needs a non-empty 'members' list");
  }
  for (size_t i = 0; i < j["members"].size(); ++i) {
    p.members.push_back(
        ParseMember(j["members"][i], path + ".members[" + std::to_string(i) + "]"));
  }
  p.name = Get<std::string>(j, path, "name", p.members.front().name);
  return p;
}

inline TypeDistributionSpec ParseTypeDistribution(const Json& j,
                                                  const std::string& path) {
  TypeDistributionSpec t;
  if (j.is_string()) {
    t.kind = j.get<std::string>();
  } else if (j.is_object()) {
    t.kind = Require<std::string>(j, path, "kind");
    if (t.kind == "weights") {
      t.weights = Require<std::vector<double>>(j, path, "weights");
    } else if (t.kind == "point_mass") {
      if (!j.contains("joint_type")) Fail(path, "missing 'joint_type'");
      t.joint_type = ParseJointType(j["joint_type"], path + ".joint_type");
    }
  } else {
    Fail(path, "type distribution must be a name or an object");
  }
  if (t.kind != "uniform" && t.kind != "weights" && t.kind != "point_mass") {
    Fail(path, "unknown type distribution '" + t.kind + "'");
  }
  return t;
}

}  // namespace internal

inline ExperimentConfig ParseConfig(const Json& j) {
  using internal::Fail;
  using internal::Get;
  if (!j.is_object()) Fail("$", "document must be an object");
  ExperimentConfig c;
  c.source = j;
  c.config_hash = HexDigest(Fnv1a64(j.dump()));
  c.experiment_id = Get<std::string>(j, "$", "experiment_id", c.experiment_id);
  c.master_seed = Get<std::uint64_t>(j, "$", "master_seed", 0);
  c.output_dir = Get<std::string>(j, "$", "output_dir", c.output_dir);

  if (!j.contains("game")) Fail("$", "missing 'game'");
  const Json& g = j["game"];
  if (!g.is_object()) Fail("$.game", "must be an object");
  c.game.family = internal::Require<std::string>(g, "$.game", "family");
  c.game.horizon = Get<int>(g, "$.game", "horizon", c.game.horizon);
  c.game.n_actions = Get<int>(g, "$.game", "n_actions", c.game.n_actions);
  c.game.off_peak = Get<double>(g, "$.game", "off_peak", c.game.off_peak);
  if (c.game.family == "matrix") {
    c.game.matrices =
        internal::Require<std::vector<std::vector<std::vector<double>>>>(
            g, "$.game", "matrices");
  } else if (c.game.family != "coordpref" &&
             c.game.family != "matching_pennies") {
    Fail("$.game.family", "unknown game family '" + c.game.family + "'");
  }
  if (c.game.horizon < 2) Fail("$.game.horizon", "must be >= 2");

  if (j.contains("population")) {
    c.population = internal::ParsePopulation(j["population"], "$.population");
  } else {
    c.population = internal::ParsePopulation(Json("handshake_si"), "$.population");
  }
  if (j.contains("type_distribution")) {
    c.type_distribution = internal::ParseTypeDistribution(
        j["type_distribution"], "$.type_distribution");
  }
  const int seat = Get<int>(j, "$", "ai_seat", 2);
  if (seat != 1 && seat != 2) Fail("$.ai_seat", "must be 1 or 2");
  c.ai_seat = SeatFromNumber(seat);
  c.k_values = Get<std::vector<long long>>(j, "$", "k_values", c.k_values);
  c.imitation_horizons =
      Get<std::vector<int>>(j, "$", "imitation_horizons", c.imitation_horizons);
  c.seeds = Get<std::vector<std::uint64_t>>(j, "$", "seeds", c.seeds);
  c.eval_episodes = Get<int>(j, "$", "eval_episodes", c.eval_episodes);
  if (c.k_values.empty() || c.imitation_horizons.empty() || c.seeds.empty()) {
    Fail("$", "k_values, imitation_horizons and seeds must be non-empty");
  }
  for (long long k : c.k_values) {
    if (k < 2 || k > 100000000) Fail("$.k_values", "entries must lie in [2, 1e8]");
  }
  for (int t : c.imitation_horizons) {
    if (t < 1 || t >= c.game.horizon) {
      Fail("$.imitation_horizons", "entries must satisfy 1 <= T~ < horizon");
    }
  }
  if (c.eval_episodes < 1) Fail("$.eval_episodes", "must be >= 1");

  if (j.contains("requested")) {
    const Json& r = j["requested"];
    c.delta = Get<double>(r, "$.requested", "delta", c.delta);
    c.epsilon = Get<double>(r, "$.requested", "epsilon", c.epsilon);
  }
  if (!(c.delta >= 0 && c.delta <= 1)) Fail("$.requested.delta", "must lie in [0, 1]");
  if (!(c.epsilon >= 0)) Fail("$.requested.epsilon", "must be >= 0");

  if (j.contains("tv")) {
    const Json& t = j["tv"];
    c.tv.method = Get<std::string>(t, "$.tv", "method", c.tv.method);
    c.tv.samples = Get<int>(t, "$.tv", "samples", c.tv.samples);
    if (c.tv.method != "auto" && c.tv.method != "exact" &&
        c.tv.method != "mc" && c.tv.method != "none") {
      Fail("$.tv.method", "must be auto, exact, mc or none");
    }
    if (c.tv.samples < 1) Fail("$.tv.samples", "must be >= 1");
  }

  if (j.contains("certification")) {
    const Json& s = j["certification"];
    CertificationSpec cs;
    cs.trials = Get<int>(s, "$.certification", "trials", cs.trials);
    cs.consistency_horizon = Get<int>(s, "$.certification",
                                      "consistency_horizon", c.game.horizon);
    cs.compatibility_horizon =
        Get<int>(s, "$.certification", "compatibility_horizon",
                 c.imitation_horizons.front());
    cs.adversaries = Get<std::vector<std::string>>(s, "$.certification",
                                                   "adversaries", cs.adversaries);
    cs.use_for_bounds =
        Get<bool>(s, "$.certification", "use_for_bounds", cs.use_for_bounds);
    if (cs.trials < 30) Fail("$.certification.trials", "must be >= 30");
    if (cs.adversaries.empty()) Fail("$.certification.adversaries", "is empty");
    if (cs.consistency_horizon < 2 || cs.compatibility_horizon < 1) {
      Fail("$.certification", "horizons out of range");
    }
    c.certification = cs;
  }

  if (j.contains("dataset")) {
    c.dataset_k = Get<int>(j["dataset"], "$.dataset", "k", c.dataset_k);
  }
  if (c.dataset_k < 1) Fail("$.dataset.k", "must be >= 1");

  if (j.contains("equilibria") && j["equilibria"].contains("joint_type")) {
    c.equilibria_joint_type = internal::ParseJointType(
        j["equilibria"]["joint_type"], "$.equilibria.joint_type");
  }

  if (j.contains("ablation_a")) {
    const Json& a = j["ablation_a"];
    const std::string p = "$.ablation_a";
    if (a.contains("population")) {
      c.ablation_a.population =
          internal::ParsePopulation(a["population"], p + ".population");
    }
    if (a.contains("reference_population")) {
      c.ablation_a.reference_population = internal::ParsePopulation(
          a["reference_population"], p + ".reference_population");
    }
    c.ablation_a.k = Get<int>(a, p, "k", c.ablation_a.k);
    c.ablation_a.imitation_horizon =
        Get<int>(a, p, "imitation_horizon", c.ablation_a.imitation_horizon);
    c.ablation_a.eval_episodes =
        Get<int>(a, p, "eval_episodes", c.ablation_a.eval_episodes);
    c.ablation_a.required_drop =
        Get<double>(a, p, "required_drop", c.ablation_a.required_drop);
    if (c.ablation_a.k < 1 || c.ablation_a.eval_episodes < 1 ||
        c.ablation_a.imitation_horizon < 1 ||
        c.ablation_a.imitation_horizon >= c.game.horizon) {
      Fail(p, "k, eval_episodes and imitation_horizon out of range");
    }
  }
  if (j.contains("ablation_b")) {
    const Json& b = j["ablation_b"];
    const std::string p = "$.ablation_b";
    if (b.contains("target_joint_type")) {
      c.ablation_b.target_joint_type =
          internal::ParseJointType(b["target_joint_type"], p + ".target_joint_type");
    }
    c.ablation_b.watchdog_slack =
        Get<double>(b, p, "watchdog_slack", c.ablation_b.watchdog_slack);
    c.ablation_b.shared_seed =
        Get<std::uint64_t>(b, p, "shared_seed", c.ablation_b.shared_seed);
    c.ablation_b.convergence_horizon =
        Get<int>(b, p, "convergence_horizon", c.ablation_b.convergence_horizon);
    c.ablation_b.convergence_seeds =
        Get<int>(b, p, "convergence_seeds", c.ablation_b.convergence_seeds);
    c.ablation_b.signal_history_length = Get<int>(
        b, p, "signal_history_length", c.ablation_b.signal_history_length);
    c.ablation_b.signal_samples =
        Get<int>(b, p, "signal_samples", c.ablation_b.signal_samples);
    c.ablation_b.tolerance = Get<double>(b, p, "tolerance", c.ablation_b.tolerance);
    if (c.ablation_b.convergence_horizon < 1 || c.ablation_b.convergence_seeds < 1 ||
        c.ablation_b.signal_history_length < 0 ||
        c.ablation_b.signal_history_length > c.game.horizon ||
        c.ablation_b.signal_samples < 1) {
      Fail(p, "values out of range");
    }
  }
  if (j.contains("bounds")) {
    const Json& all = j["bounds"];
    if (!all.is_object() && !(all.is_array() && !all.empty())) {
      Fail("$.bounds", "must be an object or a non-empty list of objects");
    }
    c.bounds.clear();
    for (size_t i = 0; i < (all.is_array() ? all.size() : 1); ++i) {
      const Json& b = all.is_array() ? all[i] : all;
      const std::string p =
          all.is_array() ? "$.bounds[" + std::to_string(i) + "]" : "$.bounds";
      BoundsSpec bs;
      bs.n_actions = Get<int>(b, p, "n_actions", bs.n_actions);
      bs.imitation_horizon = Get<int>(b, p, "imitation_horizon", bs.imitation_horizon);
      bs.horizon = Get<int>(b, p, "horizon", bs.horizon);
      bs.n_types = Get<int>(b, p, "n_types", bs.n_types);
      bs.k_values = Get<std::vector<long long>>(b, p, "k_values", bs.k_values);
      bs.delta = Get<double>(b, p, "delta", bs.delta);
      bs.epsilon = Get<double>(b, p, "epsilon", bs.epsilon);
      if (bs.k_values.empty()) Fail(p + ".k_values", "is empty");
      c.bounds.push_back(bs);
    }
  }
  return c;
}

inline ExperimentConfig ParseConfigText(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return ParseConfig(j);
}

inline ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str());
}

// -- Building library objects --------------------------------------------------------

inline GameClass BuildGame(const GameSpec& spec) {
  try {
    if (spec.family == "coordpref") {
      return MakeCoordPrefGame(spec.n_actions, spec.off_peak, spec.horizon);
    }
    if (spec.family == "matching_pennies") {
      return MakeMatchingPenniesGame(spec.horizon);
    }
    std::vector<PayoffMatrix> mats;
    for (const auto& rows : spec.matrices) mats.push_back(PayoffMatrix::FromRows(rows));
    const int n = mats.empty() ? 0 : mats.front().n_actions();
    return GameClass("matrix", n, std::move(mats), spec.horizon);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config $.game: ") + e.what());
  }
}

inline TypeDistribution BuildTypeDistribution(const TypeDistributionSpec& spec,
                                              const GameClass& game) {
  try {
    if (spec.kind == "uniform") return TypeDistribution::Uniform(game.n_types());
    if (spec.kind == "point_mass") {
      game.CheckJointType(spec.joint_type);
      return TypeDistribution::PointMass(game.n_types(), spec.joint_type);
    }
    return TypeDistribution(game.n_types(), spec.weights);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config $.type_distribution: ") + e.what());
  }
}

// The mixed-or-pure NE of a joint type with the lowest payoff sum; the
// inefficient target of the CCE-tracking ablation.
inline JointDistribution LeastEfficientNeProduct(const JointType& joint,
                                                 const GameClass& game) {
  const auto ne = EnumerateNash(joint, game);
  if (ne.empty()) throw ConfigError("no Nash equilibrium for the CCE target");
  const EquilibriumProfile* worst = &ne.front();
  for (const auto& e : ne) {
    if (e.payoff1 + e.payoff2 < worst->payoff1 + worst->payoff2 - kPayoffTolerance) {
      worst = &e;
    }
  }
  return JointDistribution::Product(worst->strategy1, worst->strategy2);
}

inline StrategyFactory BuildMember(const MemberSpec& m, const GameClass& game,
                                   const TypeDistribution& type_dist) {
  const int n = game.n_actions();
  const Json& p = m.params;
  const std::string path = "population member '" + m.name + "'";
  try {
    if (m.kind == "constant") {
      const int a = p.value("action", 0);
      if (a < 0 || a >= n) throw ConfigError(path + ": action out of range");
      return [n, a] { return std::make_unique<ConstantAgent>(n, a); };
    }
    if (m.kind == "uniform") {
      return [n] { return std::make_unique<StationaryAgent>(UniformStrategy(n)); };
    }
    if (m.kind == "hedge") {
      const double lr = p.value("learning_rate",
                                DefaultHedgeLearningRate(n, game.horizon()));
      HedgeAgent probe(lr, game);
      return [lr, game] { return std::make_unique<HedgeAgent>(lr, game); };
    }
    if (m.kind == "regret_matching") {
      return [game] { return std::make_unique<RegretMatchingAgent>(game); };
    }
    if (m.kind == "handshake_si" || m.kind == "grim_trigger") {
      const HandshakeCodebook book(game);
      if (book.code_length() >= game.horizon()) {
        throw ConfigError(path + ": handshake longer than the horizon");
      }
      if (m.kind == "grim_trigger") {
        return [book, game] { return MakeGrimTriggerAgent(book, game); };
      }
      const double lr = p.value("fallback_learning_rate",
                                DefaultHedgeLearningRate(n, game.horizon()));
      return [book, game, lr] { return MakeHandshakeSiAgent(book, game, lr); };
    }
    if (m.kind == "cce_tracker") {
      const double slack = p.value("watchdog_slack", 0.5);
      const std::uint64_t shared = p.value("shared_seed", std::uint64_t{17});
      std::optional<JointDistribution> target;
      if (p.contains("target_weights")) {
        target.emplace(n, p["target_weights"].get<std::vector<double>>());
      } else {
        JointType joint{0, 1};
        if (p.contains("target_joint_type")) {
          joint = internal::ParseJointType(p["target_joint_type"],
                                           path + ".target_joint_type");
        }
        game.CheckJointType(joint);
        target = LeastEfficientNeProduct(joint, game);
      }
      const auto support = type_dist.Support();
      MakeCceTrackingPair(*target, game, slack, shared, support);
      const JointDistribution z = *target;
      return [z, game, slack, shared] {
        return std::make_unique<CceTrackingAgent>(z, game, slack, shared);
      };
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const InvalidPopulation& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": bad parameter: " + e.what());
  }
  throw ConfigError("unknown population member kind '" + m.kind + "' (member '" +
                    m.name + "')");
}

inline Population BuildPopulation(const PopulationSpec& spec,
                                  const GameClass& game,
                                  const TypeDistribution& type_dist) {
  std::vector<PopulationMember> members;
  for (const MemberSpec& m : spec.members) {
    members.push_back({m.name, BuildMember(m, game, type_dist), m.weight});
  }
  try {
    return Population(spec.name, std::move(members));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("population: ") + e.what());
  }
}

inline std::vector<Adversary> BuildAdversaries(const std::vector<std::string>& names,
                                               const GameClass& game) {
  std::vector<Adversary> suite;
  for (const std::string& name : names) {
    try {
      suite.push_back(MakeAdversary(name));
      suite.back().make(game, 0);
    } catch (const InvalidArgument& e) {
      throw ConfigError("adversary '" + name + "': " + e.what());
    }
  }
  return suite;
}

}  // namespace socint::experiments

#endif  // SOCINT_EXPERIMENTS_CONFIG_H_
