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

#ifndef SOCINT_EXPERIMENTS_RUNNER_H_
#define SOCINT_EXPERIMENTS_RUNNER_H_

// The experiment pipeline behind every CLI command.  Each runner returns
// plain rows; writers.h turns them into files.  All randomness is derived
// from the config's master seed through fixed stream tags, so outputs do not
// depend on thread count or scheduling.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "socint/agents.h"
#include "socint/dataset_io.h"
#include "socint/episode.h"
#include "socint/equilibrium.h"
#include "socint/errors.h"
#include "socint/experiments/config.h"
#include "socint/experiments/support.h"
#include "socint/game.h"
#include "socint/ic_strategy.h"
#include "socint/imitation.h"
#include "socint/metrics.h"
#include "socint/population.h"
#include "socint/rng.h"

namespace socint::experiments {

// Stream tags under the master seed.
inline constexpr std::uint64_t kDataStream = 0xda7a;
inline constexpr std::uint64_t kEvalStream = 0xe7a1;
inline constexpr std::uint64_t kTvStream = 0x7f;
inline constexpr std::uint64_t kBootStream = 0xb007;
inline constexpr std::uint64_t kCertStream = 0xce47;
inline constexpr std::uint64_t kAblationAStream = 0xab1a;
inline constexpr std::uint64_t kAblationBStream = 0xab1b;

inline constexpr double kCiLevel = 0.95;

struct RunOptions {
  int threads = 1;
  std::optional<std::string> dataset_path;
};

struct Context {
  GameClass game;
  TypeDistribution type_dist;
  Population population;
};

inline Context BuildContext(const ExperimentConfig& c) {
  GameClass game = BuildGame(c.game);
  TypeDistribution mu = BuildTypeDistribution(c.type_distribution, game);
  Population pop = BuildPopulation(c.population, game, mu);
  return {std::move(game), std::move(mu), std::move(pop)};
}

// -- equilibria ----------------------------------------------------------------------

inline nlohmann::ordered_json ProfileJson(const EquilibriumProfile& e) {
  return {{"strategy1", e.strategy1},
          {"strategy2", e.strategy2},
          {"payoff1", e.payoff1},
          {"payoff2", e.payoff2}};
}

inline nlohmann::ordered_json EquilibriaReport(const GameClass& game,
                                               const JointType& joint) {
  try {
    game.CheckJointType(joint);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("joint type: ") + e.what());
  }
  const auto ne = EnumerateNash(joint, game);
  const auto pone = ParetoOptimalNash(ne);
  nlohmann::ordered_json j;
  j["game"] = game.name();
  j["joint_type"] = {joint.theta1, joint.theta2};
  j["nash"] = nlohmann::ordered_json::array();
  for (const auto& e : ne) j["nash"].push_back(ProfileJson(e));
  j["pone"] = nlohmann::ordered_json::array();
  for (const auto& e : pone) j["pone"].push_back(ProfileJson(e));
  if (!pone.empty()) {
    j["worst_pone_for_seat1"] = ProfileJson(WorstPoneFor(Seat::kOne, pone));
    j["worst_pone_for_seat2"] = ProfileJson(WorstPoneFor(Seat::kTwo, pone));
  }
  return j;
}

// -- datasets ------------------------------------------------------------------------

// Same bytes as GenerateDataset; episodes are generated in parallel.
inline Dataset GenerateDatasetParallel(const Population& population,
                                       const TypeDistribution& type_dist, int k,
                                       const GameClass& game,
                                       std::uint64_t master_seed, int threads) {
  if (k < 1) throw InvalidArgument("dataset size K must be >= 1");
  Dataset d;
  d.meta = {game.n_actions(), game.horizon(), game.n_types(), master_seed,
            population.name(), k};
  d.episodes.resize(k);
  ParallelFor(k, threads, [&](int j) {
    d.episodes[j] = GenerateEpisode(population, type_dist, game,
                                    DeriveSeed(master_seed, j));
  });
  return d;
}

inline Dataset Prefix(const Dataset& d, int k) {
  Dataset out;
  out.meta = d.meta;
  out.meta.k = k;
  out.episodes.assign(d.episodes.begin(), d.episodes.begin() + k);
  return out;
}

// Dataset seed of repetition `rep`.  The dataset command writes repetition 0.
inline std::uint64_t DatasetSeed(const ExperimentConfig& c, std::uint64_t rep) {
  return DeriveSeed(c.master_seed, kDataStream, rep);
}

// -- certification -------------------------------------------------------------------

inline CertificationReport RunCertification(const ExperimentConfig& c,
                                            const Context& ctx) {
  if (!c.certification) {
    throw ConfigError("config has no 'certification' section");
  }
  const CertificationSpec& s = *c.certification;
  SiRequest request{c.delta, c.epsilon, s.consistency_horizon,
                    s.compatibility_horizon};
  return CertifySiClass(ctx.population, request, ctx.game, ctx.type_dist,
                        BuildAdversaries(s.adversaries, ctx.game), s.trials,
                        DeriveSeed(c.master_seed, kCertStream));
}

// The (delta, epsilon) fed into the Theorem 1 bound.  With a certification
// section the certified pair is used: delta is the Wilson upper bound of the
// worst cell failure rate at the requested epsilon.
struct BoundInputs {
  double delta = 0.0;
  double epsilon = 0.0;
  std::string source;  // requested | certified | certification_failed
};

inline BoundInputs ChooseBoundInputs(
    const ExperimentConfig& c, const std::optional<CertificationReport>& cert) {
  if (cert && c.certification && c.certification->use_for_bounds) {
    return {std::min(1.0, cert->delta_upper), cert->requested_epsilon,
            cert->pass ? "certified" : "certification_failed"};
  }
  return {c.delta, c.epsilon, "requested"};
}

// -- run-ic --------------------------------------------------------------------------

struct IcRow {
  std::uint64_t seed = 0;
  long long k = 0;
  int imitation_horizon = 0;
  int horizon = 0;
  int ai_seat = 2;
  int partner_seat = 1;
  std::string population;
  int eval_episodes = 0;
  double alt_regret_mean = 0.0;
  double alt_regret_ci_low = 0.0;
  double alt_regret_ci_high = 0.0;
  double alt_regret_q95 = 0.0;
  double alt_regret_pos_mean = 0.0;
  double alt_regret_pos_q95 = 0.0;
  double ext_regret_mean = 0.0;
  double partner_payoff_mean = 0.0;
  double ai_payoff_mean = 0.0;
  double tv = std::numeric_limits<double>::quiet_NaN();
  std::string tv_method;  // exact | mc_biased_upward | none
  double lemma1_bound = 0.0;
  bool lemma1_vacuous = false;
  double theorem1_bound = 0.0;
  double bound_delta = 0.0;
  double bound_epsilon = 0.0;
  std::string bound_source;
  bool below_bound = false;
  // Not part of the deterministic outputs.
  double wall_seconds = 0.0;
};

struct IcResults {
  std::vector<IcRow> rows;
  std::optional<CertificationReport> certification;
  BoundInputs bound;
};

struct EpisodeStats {
  double alt_regret = 0.0;
  double ext_regret = 0.0;
  double partner_payoff = 0.0;
  double ai_payoff = 0.0;
};

// One evaluation episode: a fresh pairing from (rho, mu) with `ai` in the AI
// seat.  Never reuses dataset episodes.
inline EpisodeStats EvaluateEpisode(MetaStrategy* ai, Seat ai_seat,
                                    const Context& ctx,
                                    std::uint64_t episode_seed) {
  Pairing pairing =
      SamplePairing(ctx.population, ctx.type_dist, DeriveSeed(episode_seed, 0));
  std::unique_ptr<MetaStrategy> owned;
  if (ai) {
    owned = ai->Clone();
    (ai_seat == Seat::kOne ? pairing.strategy1 : pairing.strategy2) =
        std::move(owned);
  }
  const EpisodeRecord rec =
      PlayEpisode(*pairing.strategy1, *pairing.strategy2, pairing.joint_type,
                  ctx.game, DeriveSeed(episode_seed, 1));
  const Seat partner_seat = OtherSeat(ai_seat);
  const JointType& joint = pairing.joint_type;
  const double h = static_cast<double>(rec.history.size());
  EpisodeStats s;
  s.alt_regret = AltruisticRegret(rec.history, joint.Of(partner_seat),
                                  partner_seat, joint, ctx.game)
                     .per_step;
  s.ext_regret =
      ExternalRegret(rec.history, joint.Of(ai_seat), ai_seat, ctx.game).per_step;
  s.partner_payoff = RealizedTotalPayoff(rec.history, joint.Of(partner_seat),
                                         partner_seat, ctx.game) /
                     h;
  s.ai_payoff =
      RealizedTotalPayoff(rec.history, joint.Of(ai_seat), ai_seat, ctx.game) / h;
  return s;
}

inline std::vector<EpisodeStats> EvaluateMany(MetaStrategy* ai, Seat ai_seat,
                                              const Context& ctx, int episodes,
                                              std::uint64_t stream_seed,
                                              int threads) {
  std::vector<EpisodeStats> out(episodes);
  ParallelFor(episodes, threads, [&](int e) {
    out[e] = EvaluateEpisode(ai, ai_seat, ctx, DeriveSeed(stream_seed, e));
  });
  return out;
}

inline bool ExactTvFeasible(int n_actions, int length) {
  return std::pow(static_cast<double>(n_actions), 2.0 * length) <=
         kExactEnumerationGuard;
}

inline IcResults RunIc(const ExperimentConfig& c, const RunOptions& opt = {}) {
  const Context ctx = BuildContext(c);
  IcResults out;
  if (c.certification) out.certification = RunCertification(c, ctx);
  out.bound = ChooseBoundInputs(c, out.certification);

  long long k_max = 0;
  for (long long k : c.k_values) k_max = std::max(k_max, k);
  std::optional<Dataset> from_file;
  if (opt.dataset_path) {
    from_file = ReadDatasetFile(*opt.dataset_path);
    CheckDatasetMatchesGame(from_file->meta, ctx.game);
    if (from_file->meta.k < k_max) {
      throw ConfigError("dataset '" + *opt.dataset_path + "' holds " +
                        std::to_string(from_file->meta.k) +
                        " episodes but the K sweep needs " + std::to_string(k_max));
    }
  }

  // Population-side exact rollout distributions, shared across K.
  std::map<int, HistoryDistribution> exact_reference;
  const Seat ai_seat = c.ai_seat;

  for (std::uint64_t rep : c.seeds) {
    // Datasets nest across K: the size-K set is the first K episodes.
    const Dataset full =
        from_file ? *from_file
                  : GenerateDatasetParallel(ctx.population, ctx.type_dist,
                                            static_cast<int>(k_max), ctx.game,
                                            DatasetSeed(c, rep), opt.threads);
    for (long long k : c.k_values) {
      const Dataset data = Prefix(full, static_cast<int>(k));
      for (int t_im : c.imitation_horizons) {
        const auto start = std::chrono::steady_clock::now();
        auto policy = std::make_shared<const EmpiricalPolicy>(
            FitImitation(data, t_im, ai_seat));
        ImitateThenCommitAgent ic(policy, {t_im, ctx.game.horizon(), ai_seat});
        // Evaluation seeds depend only on the repetition: common random
        // numbers across K and T~.
        const auto stats =
            EvaluateMany(&ic, ai_seat, ctx, c.eval_episodes,
                         DeriveSeed(c.master_seed, kEvalStream, rep), opt.threads);

        IcRow row;
        row.seed = rep;
        row.k = k;
        row.imitation_horizon = t_im;
        row.horizon = ctx.game.horizon();
        row.ai_seat = SeatNumber(ai_seat);
        row.partner_seat = SeatNumber(OtherSeat(ai_seat));
        row.population = ctx.population.name();
        row.eval_episodes = c.eval_episodes;
        std::vector<double> alt, pos, ext, partner, own;
        for (const auto& s : stats) {
          alt.push_back(s.alt_regret);
          pos.push_back(std::max(0.0, s.alt_regret));
          ext.push_back(s.ext_regret);
          partner.push_back(s.partner_payoff);
          own.push_back(s.ai_payoff);
        }
        row.alt_regret_mean = Mean(alt);
        const Interval ci = BootstrapMeanCi(
            alt, kCiLevel, DeriveSeed(c.master_seed, kBootStream, rep));
        row.alt_regret_ci_low = ci.low;
        row.alt_regret_ci_high = ci.high;
        row.alt_regret_q95 = Quantile(alt, 0.95);
        row.alt_regret_pos_mean = Mean(pos);
        row.alt_regret_pos_q95 = Quantile(pos, 0.95);
        row.ext_regret_mean = Mean(ext);
        row.partner_payoff_mean = Mean(partner);
        row.ai_payoff_mean = Mean(own);

        const bool exact =
            c.tv.method == "exact" ||
            (c.tv.method == "auto" && ExactTvFeasible(ctx.game.n_actions(), t_im));
        if (c.tv.method == "none") {
          row.tv_method = "none";
        } else if (exact) {
          if (!exact_reference.contains(t_im)) {
            exact_reference[t_im] = RolloutDistributionExact(
                nullptr, ctx.population, ctx.type_dist, ctx.game, t_im);
          }
          row.tv = TvDistance(exact_reference[t_im],
                              RolloutDistributionExact(policy.get(), ctx.population,
                                                       ctx.type_dist, ctx.game, t_im));
          row.tv_method = "exact";
        } else {
          row.tv = TvDistanceMc(*policy, ctx.population, ctx.type_dist, ctx.game,
                                t_im, c.tv.samples,
                                DeriveSeed(c.master_seed, kTvStream, rep))
                       .estimate;
          row.tv_method = "mc_biased_upward";
        }

        row.lemma1_bound = Lemma1Bound(ctx.game.n_actions(), t_im,
                                       ctx.game.n_types(), k);
        row.lemma1_vacuous = row.lemma1_bound >= t_im;
        row.bound_delta = out.bound.delta;
        row.bound_epsilon = out.bound.epsilon;
        row.bound_source = out.bound.source;
        row.theorem1_bound =
            Theorem1Bound(out.bound.delta, out.bound.epsilon, k,
                          ctx.game.n_actions(), t_im, ctx.game.horizon(),
                          ctx.game.n_types());
        row.below_bound = row.alt_regret_mean <= row.theorem1_bound;
        row.wall_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

// -- bounds --------------------------------------------------------------------------

struct BoundRow {
  int n_actions = 0;
  int imitation_horizon = 0;
  int horizon = 0;
  int n_types = 0;
  long long k = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double lemma1_bound = 0.0;
  bool lemma1_vacuous = false;
  double theorem1_bound = 0.0;
};

inline std::vector<BoundRow> RunBounds(const ExperimentConfig& c) {
  std::vector<BoundRow> rows;
  for (const BoundsSpec& b : c.bounds) {
    for (long long k : b.k_values) {
      BoundRow r{b.n_actions, b.imitation_horizon, b.horizon, b.n_types, k,
                 b.delta,     b.epsilon};
      try {
        r.lemma1_bound = Lemma1Bound(b.n_actions, b.imitation_horizon, b.n_types, k);
        r.theorem1_bound = Theorem1Bound(b.delta, b.epsilon, k, b.n_actions,
                                         b.imitation_horizon, b.horizon, b.n_types);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config $.bounds: ") + e.what());
      }
      r.lemma1_vacuous = r.lemma1_bound >= b.imitation_horizon;
      rows.push_back(r);
    }
  }
  return rows;
}

// -- ablation A: compatible but not consistent ---------------------------------------

struct AblationARow {
  std::string arm;  // imitate_then_commit | si_self_play
  std::string population;
  int k = 0;
  int imitation_horizon = 0;
  int horizon = 0;
  int eval_episodes = 0;
  double partner_payoff_mean = 0.0;
  double partner_payoff_ci_low = 0.0;
  double partner_payoff_ci_high = 0.0;
  double alt_regret_mean = 0.0;
};

struct AblationAResult {
  std::vector<AblationARow> rows;
  double drop = 0.0;
  double required_drop = 0.0;
  bool pass = false;
};

inline AblationAResult RunAblationA(const ExperimentConfig& c,
                                    const RunOptions& opt = {}) {
  const AblationASpec& a = c.ablation_a;
  const GameClass game = BuildGame(c.game);
  const TypeDistribution mu = BuildTypeDistribution(c.type_distribution, game);
  const PopulationSpec target_spec =
      a.population ? *a.population
                   : internal::ParsePopulation(Json("grim_trigger"), "$.ablation_a");
  const PopulationSpec ref_spec =
      a.reference_population
          ? *a.reference_population
          : internal::ParsePopulation(Json("handshake_si"), "$.ablation_a");
  const Context target{game, mu, BuildPopulation(target_spec, game, mu)};
  const Context reference{game, mu, BuildPopulation(ref_spec, game, mu)};
  const Seat ai_seat = c.ai_seat;

  const Dataset data = GenerateDatasetParallel(
      target.population, mu, a.k, game,
      DeriveSeed(c.master_seed, kAblationAStream, 0), opt.threads);
  auto policy = std::make_shared<const EmpiricalPolicy>(
      FitImitation(data, a.imitation_horizon, ai_seat));
  ImitateThenCommitAgent ic(policy, {a.imitation_horizon, game.horizon(), ai_seat});
  const std::uint64_t eval_seed = DeriveSeed(c.master_seed, kAblationAStream, 1);

  AblationAResult out;
  out.required_drop = a.required_drop;
  auto summarize = [&](const std::string& arm, const std::string& pop,
                       const std::vector<EpisodeStats>& stats, int k,
                       std::uint64_t boot) {
    std::vector<double> partner, alt;
    for (const auto& s : stats) {
      partner.push_back(s.partner_payoff);
      alt.push_back(s.alt_regret);
    }
    const Interval ci = BootstrapMeanCi(partner, kCiLevel, boot);
    out.rows.push_back({arm, pop, k, arm == "si_self_play" ? 0 : a.imitation_horizon,
                        game.horizon(), a.eval_episodes, Mean(partner), ci.low,
                        ci.high, Mean(alt)});
  };
  summarize("imitate_then_commit", target.population.name(),
            EvaluateMany(&ic, ai_seat, target, a.eval_episodes, eval_seed,
                         opt.threads),
            a.k, DeriveSeed(c.master_seed, kAblationAStream, 2));
  summarize("si_self_play", reference.population.name(),
            EvaluateMany(nullptr, ai_seat, reference, a.eval_episodes, eval_seed,
                         opt.threads),
            0, DeriveSeed(c.master_seed, kAblationAStream, 3));
  out.drop = out.rows[1].partner_payoff_mean - out.rows[0].partner_payoff_mean;
  out.pass = out.drop >= a.required_drop;
  return out;
}

// -- ablation B: consistent but not compatible ---------------------------------------

struct AblationBRow {
  std::string check;    // convergence | type_signal
  std::string subject;  // joint type(s)
  std::uint64_t seed = 0;
  int horizon = 0;
  int samples = 0;
  double tv = 0.0;
  // type_signal only: fraction of coupled rollouts whose histories differ.
  double coupled_difference = 0.0;
  bool watchdog_fired = false;
  double tolerance = 0.0;
  bool pass = false;
};

struct AblationBResult {
  std::vector<AblationBRow> rows;
  std::vector<double> target;
  double target_payoff1 = 0.0;
  double target_payoff2 = 0.0;
  double max_convergence_tv = 0.0;
  double max_signal_tv = 0.0;
  bool any_fired = false;
  bool pass = false;
};

inline std::string JointLabel(const JointType& j) {
  return "(" + std::to_string(j.theta1) + "," + std::to_string(j.theta2) + ")";
}

inline AblationBResult RunAblationB(const ExperimentConfig& c,
                                    const RunOptions& opt = {}) {
  const AblationBSpec& b = c.ablation_b;
  const GameClass game = BuildGame(c.game);
  const TypeDistribution mu = BuildTypeDistribution(c.type_distribution, game);
  try {
    game.CheckJointType(b.target_joint_type);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config $.ablation_b.target_joint_type: ") +
                      e.what());
  }
  const JointDistribution target =
      LeastEfficientNeProduct(b.target_joint_type, game);
  const auto support = mu.Support();
  try {
    MakeCceTrackingPair(target, game, b.watchdog_slack, b.shared_seed, support);
  } catch (const InvalidPopulation& e) {
    throw ConfigError(std::string("ablation B: ") + e.what());
  }

  AblationBResult out;
  out.target = target.weights();
  {
    const int n = game.n_actions();
    const PayoffMatrix& m1 = game.Payoffs(b.target_joint_type.theta1);
    const PayoffMatrix& m2 = game.Payoffs(b.target_joint_type.theta2);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        out.target_payoff1 += target(x, y) * m1(x, y);
        out.target_payoff2 += target(x, y) * m2(y, x);
      }
    }
  }

  // (i) self-play convergence to the target in the target's own joint type.
  const GameClass long_game = game.WithHorizon(b.convergence_horizon);
  std::vector<AblationBRow> conv(b.convergence_seeds);
  ParallelFor(b.convergence_seeds, opt.threads, [&](int i) {
    auto [s1, s2] = MakeCceTrackingPair(target, long_game, b.watchdog_slack,
                                        b.shared_seed, support);
    const EpisodeRecord rec =
        PlayEpisode(*s1, *s2, b.target_joint_type, long_game,
                    DeriveSeed(c.master_seed, kAblationBStream, 0, i));
    const JointEmpirical z = EmpiricalJointStrategy(
        rec.history, b.convergence_horizon, game.n_actions());
    double l1 = 0.0;
    for (size_t x = 0; x < target.weights().size(); ++x) {
      l1 += std::abs(z.distribution.weights()[x] - target.weights()[x]);
    }
    AblationBRow& r = conv[i];
    r.check = "convergence";
    r.subject = JointLabel(b.target_joint_type);
    r.seed = static_cast<std::uint64_t>(i);
    r.horizon = b.convergence_horizon;
    r.samples = 1;
    r.tv = 0.5 * l1;
    r.watchdog_fired = s1->fired() || s2->fired();
    r.tolerance = b.tolerance;
    r.pass = r.tv <= b.tolerance && !r.watchdog_fired;
  });

  // (ii) type signal: rollouts of the same seeds under each supported joint
  // type.  The strategies only see types through the watchdog, so coupled
  // rollouts differ only where it fires.
  const int length =
      b.signal_history_length > 0 ? b.signal_history_length : game.horizon();
  const int n_joint = static_cast<int>(support.size());
  std::vector<std::vector<History>> histories(
      n_joint, std::vector<History>(b.signal_samples));
  const std::uint64_t signal_seed = DeriveSeed(c.master_seed, kAblationBStream, 1);
  ParallelFor(b.signal_samples, opt.threads, [&](int i) {
    for (int j = 0; j < n_joint; ++j) {
      CceTrackingAgent s1(target, game, b.watchdog_slack, b.shared_seed);
      CceTrackingAgent s2(target, game, b.watchdog_slack, b.shared_seed);
      histories[j][i] =
          PlayStages(s1, s2, support[j], game, DeriveSeed(signal_seed, i), length);
    }
  });
  std::vector<HistoryDistribution> dists(n_joint);
  const double unit = 1.0 / b.signal_samples;
  for (int j = 0; j < n_joint; ++j) {
    for (const History& h : histories[j]) dists[j][h] += unit;
  }
  std::vector<AblationBRow> signal;
  for (int x = 0; x < n_joint; ++x) {
    for (int y = x + 1; y < n_joint; ++y) {
      AblationBRow r;
      r.check = "type_signal";
      r.subject = JointLabel(support[x]) + " vs " + JointLabel(support[y]);
      r.horizon = length;
      r.samples = b.signal_samples;
      r.tv = TvDistance(dists[x], dists[y]);
      int differ = 0;
      for (int i = 0; i < b.signal_samples; ++i) {
        differ += histories[x][i] != histories[y][i];
      }
      r.coupled_difference = differ * unit;
      r.tolerance = b.tolerance;
      r.pass = r.tv <= b.tolerance;
      signal.push_back(r);
    }
  }

  bool pass = true;
  for (const auto& r : conv) {
    out.max_convergence_tv = std::max(out.max_convergence_tv, r.tv);
    out.any_fired = out.any_fired || r.watchdog_fired;
    pass = pass && r.pass;
    out.rows.push_back(r);
  }
  for (const auto& r : signal) {
    out.max_signal_tv = std::max(out.max_signal_tv, r.tv);
    pass = pass && r.pass;
    out.rows.push_back(r);
  }
  out.pass = pass;
  return out;
}

}  // namespace socint::experiments

#endif  // SOCINT_EXPERIMENTS_RUNNER_H_
