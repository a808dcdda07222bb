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

#ifndef SOCINT_METRICS_H_
#define SOCINT_METRICS_H_

// External and altruistic regret, and statistical certification of
// consistency, compatibility and socially intelligent classes.
//
// Certification is necessary-condition testing: "any partner" is replaced by
// a finite adversary suite and "with probability 1 - delta" by a binomial
// confidence bound over seeded trials.  Worst case is taken over cells
// (types, adversaries, seats, joint types), never the average.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "socint/agents.h"
#include "socint/episode.h"
#include "socint/equilibrium.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/population.h"
#include "socint/rng.h"

namespace socint {

struct RegretReport {
  double total = 0.0;
  double per_step = 0.0;
  int horizon = 0;
  Seat seat = Seat::kOne;
};

// max over fixed own actions of sum_t [G(a, partner_t) - G(own_t, partner_t)].
inline RegretReport ExternalRegret(const History& history, int theta, Seat seat,
                                   const GameClass& game) {
  if (history.empty()) throw InvalidArgument("external regret needs a history");
  const PayoffMatrix& g = game.Payoffs(theta);
  const int n = game.n_actions();
  std::vector<double> counterfactual(n, 0.0);
  double realized = 0.0;
  for (const JointAction& step : history) {
    const int partner = step.Partner(seat);
    realized += g(step.Own(seat), partner);
    for (int a = 0; a < n; ++a) counterfactual[a] += g(a, partner);
  }
  const double total =
      *std::max_element(counterfactual.begin(), counterfactual.end()) - realized;
  const int h = static_cast<int>(history.size());
  return {total, total / h, h, seat};
}

// Per-step partner payoff under the PONE that is worst for the partner.
inline double AltruisticBaseline(const JointType& joint, Seat partner_seat,
                                 const GameClass& game) {
  const auto pone = ParetoOptimalNash(EnumerateNash(joint, game));
  if (pone.empty()) {
    throw NoPoneError("no PONE for joint type (" +
                      std::to_string(joint.theta1) + "," +
                      std::to_string(joint.theta2) + ")");
  }
  return WorstPoneFor(partner_seat, pone).PayoffOf(partner_seat);
}

// Regret of the agent opposite `partner_seat`, measured in the partner's
// payoffs against the partner's worst PONE.  May be negative.  The report's
// seat is the regret holder's seat.
inline RegretReport AltruisticRegret(const History& history, int partner_type,
                                     Seat partner_seat, const JointType& joint,
                                     const GameClass& game) {
  if (joint.Of(partner_seat) != partner_type) {
    throw InvalidArgument("partner type disagrees with the joint type");
  }
  if (history.empty()) throw InvalidArgument("altruistic regret needs a history");
  const double baseline = AltruisticBaseline(joint, partner_seat, game);
  const double realized =
      RealizedTotalPayoff(history, partner_type, partner_seat, game);
  const int h = static_cast<int>(history.size());
  const double total = baseline * h - realized;
  return {total, total / h, h, OtherSeat(partner_seat)};
}

// -- Certification ----------------------------------------------------------------

inline constexpr double kCertificationConfidence = 0.95;
inline constexpr double kNormalQuantile975 = 1.959963984540054;

struct BinomialInterval {
  double lower = 0.0;
  double upper = 1.0;
};

// Two-sided Wilson score interval.
inline BinomialInterval WilsonInterval(int failures, int trials,
                                       double z = kNormalQuantile975) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = trials;
  const double p = failures / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half =
      z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// Smallest sample value v with at least `level` of the samples <= v.
inline double EmpiricalQuantile(std::vector<double> samples, double level) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double rank = std::ceil(level * samples.size());
  const size_t index = static_cast<size_t>(
      std::clamp(rank - 1.0, 0.0, static_cast<double>(samples.size() - 1)));
  return samples[index];
}

struct CertificationCell {
  std::string label;
  int failures = 0;
  int trials = 0;
  double failure_rate = 0.0;
  // Empirical (1 - requested delta) quantile of the per-step statistic.
  double epsilon_quantile = 0.0;
  double mean_statistic = 0.0;
};

struct CertificationReport {
  std::string property;  // consistency | compatibility | si_class
  std::string subject;
  double requested_delta = 0.0;
  double requested_epsilon = 0.0;
  double epsilon_measured = 0.0;
  double delta_measured = 0.0;
  double delta_upper = 0.0;
  int trials = 0;
  int horizon = 0;
  double confidence = kCertificationConfidence;
  bool pass = false;
  std::string binding;
  std::vector<CertificationCell> cells;
  std::vector<CertificationReport> components;
};

// Builds an adversary that knows the victim's type.
struct Adversary {
  std::string name;
  std::function<std::unique_ptr<MetaStrategy>(const GameClass&, int)> make;
};

// constant_<a>, uniform, best_response_empirical, adversarial_flip.
inline Adversary MakeAdversary(const std::string& name) {
  if (name == "uniform") {
    return {name, [](const GameClass& g, int) {
              return std::make_unique<StationaryAgent>(
                  UniformStrategy(g.n_actions()));
            }};
  }
  if (name == "best_response_empirical") {
    return {name, [](const GameClass& g, int) {
              return std::make_unique<EmpiricalBestResponseAgent>(g);
            }};
  }
  if (name == "adversarial_flip") {
    return {name, [](const GameClass& g, int victim) {
              return std::make_unique<AdversarialFlipAgent>(g, victim);
            }};
  }
  const std::string prefix = "constant_";
  if (name.rfind(prefix, 0) == 0) {
    int action = -1;
    try {
      action = std::stoi(name.substr(prefix.size()));
    } catch (const std::exception&) {
    }
    if (action >= 0) {
      return {name, [action](const GameClass& g, int) {
                if (action >= g.n_actions()) {
                  throw InvalidArgument("constant adversary action out of range");
                }
                return std::make_unique<ConstantAgent>(g.n_actions(), action);
              }};
    }
  }
  throw InvalidArgument("unknown adversary '" + name + "'");
}

// The four-member suite used throughout: both constants (N = 2), uniform
// noise and the flip adversary.
inline std::vector<Adversary> StandardAdversarySuite(int n_actions) {
  std::vector<Adversary> suite;
  for (int a = 0; a < std::min(n_actions, 2); ++a) {
    suite.push_back(MakeAdversary("constant_" + std::to_string(a)));
  }
  suite.push_back(MakeAdversary("uniform"));
  suite.push_back(MakeAdversary("adversarial_flip"));
  return suite;
}

namespace internal {

inline CertificationCell SummarizeCell(std::string label,
                                       const std::vector<double>& stats,
                                       double epsilon, double delta) {
  CertificationCell cell;
  cell.label = std::move(label);
  cell.trials = static_cast<int>(stats.size());
  double sum = 0.0;
  for (double s : stats) {
    if (s > epsilon + kPayoffTolerance) ++cell.failures;
    sum += s;
  }
  cell.failure_rate = static_cast<double>(cell.failures) / cell.trials;
  cell.mean_statistic = sum / cell.trials;
  cell.epsilon_quantile = EmpiricalQuantile(stats, 1.0 - delta);
  return cell;
}

// Fills the worst-case summary fields from the cells.
inline void Aggregate(CertificationReport& report) {
  const CertificationCell* worst = nullptr;
  for (const auto& cell : report.cells) {
    report.epsilon_measured =
        std::max(report.epsilon_measured, cell.epsilon_quantile);
    if (!worst || cell.failure_rate > worst->failure_rate ||
        (cell.failure_rate == worst->failure_rate &&
         cell.epsilon_quantile > worst->epsilon_quantile)) {
      worst = &cell;
    }
  }
  if (worst) {
    report.delta_measured = worst->failure_rate;
    report.delta_upper = WilsonInterval(worst->failures, worst->trials).upper;
    report.binding = worst->label;
  }
  report.pass = report.delta_upper <= report.requested_delta;
}

}  // namespace internal

// Runs the agent in every (own type, adversary, seat) cell for `trials`
// seeded episodes of length game.horizon() and checks per-step external
// regret against `epsilon`.
inline CertificationReport CertifyConsistency(
    const StrategyFactory& agent, const std::string& subject, double delta,
    double epsilon, const GameClass& game,
    const std::vector<Adversary>& adversaries, int trials, std::uint64_t seed) {
  if (adversaries.empty()) throw InvalidArgument("adversary suite is empty");
  if (trials < 30) throw InvalidArgument("certification needs >= 30 trials");
  CertificationReport report;
  report.property = "consistency";
  report.subject = subject;
  report.requested_delta = delta;
  report.requested_epsilon = epsilon;
  report.trials = trials;
  report.horizon = game.horizon();

  std::uint64_t cell_index = 0;
  for (int theta = 0; theta < game.n_types(); ++theta) {
    for (const Adversary& adversary : adversaries) {
      for (Seat seat : {Seat::kOne, Seat::kTwo}) {
        auto subject_agent = agent();
        auto opponent = adversary.make(game, theta);
        std::vector<double> stats;
        stats.reserve(trials);
        for (int r = 0; r < trials; ++r) {
          const std::uint64_t episode_seed = DeriveSeed(seed, cell_index, r);
          MetaStrategy& s1 = seat == Seat::kOne ? *subject_agent : *opponent;
          MetaStrategy& s2 = seat == Seat::kOne ? *opponent : *subject_agent;
          const EpisodeRecord rec =
              PlayEpisode(s1, s2, {theta, theta}, game, episode_seed);
          stats.push_back(ExternalRegret(rec.history, theta, seat, game).per_step);
        }
        report.cells.push_back(internal::SummarizeCell(
            "type=" + std::to_string(theta) + ",adversary=" + adversary.name +
                ",seat=" + std::to_string(SeatNumber(seat)),
            stats, epsilon, delta));
        ++cell_index;
      }
    }
  }
  internal::Aggregate(report);
  return report;
}

// Plays agent a (seat 1) against agent b (seat 2) for `horizon` stages in
// every joint type of mu's support.  A trial succeeds when some single PONE
// has per-step payoff gap <= epsilon for both seats; the statistic is
// min over PONE of the larger of the two gaps.
inline CertificationReport CertifyCompatibility(
    const StrategyFactory& agent_a, const StrategyFactory& agent_b,
    const std::string& subject, double delta, double epsilon, int horizon,
    const TypeDistribution& type_dist, const GameClass& game, int trials,
    std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("certification needs trials >= 1");
  const GameClass played = game.WithHorizon(horizon);
  CertificationReport report;
  report.property = "compatibility";
  report.subject = subject;
  report.requested_delta = delta;
  report.requested_epsilon = epsilon;
  report.trials = trials;
  report.horizon = horizon;

  std::uint64_t cell_index = 0;
  for (const JointType& joint : type_dist.Support()) {
    const auto pone = ParetoOptimalNash(EnumerateNash(joint, game));
    if (pone.empty()) {
      throw NoPoneError("no PONE for joint type (" +
                        std::to_string(joint.theta1) + "," +
                        std::to_string(joint.theta2) + ")");
    }
    auto s1 = agent_a();
    auto s2 = agent_b();
    std::vector<double> stats;
    stats.reserve(trials);
    for (int r = 0; r < trials; ++r) {
      const EpisodeRecord rec = PlayEpisode(
          *s1, *s2, joint, played, DeriveSeed(seed, cell_index, r));
      const double r1 =
          RealizedTotalPayoff(rec.history, joint.theta1, Seat::kOne, game) /
          horizon;
      const double r2 =
          RealizedTotalPayoff(rec.history, joint.theta2, Seat::kTwo, game) /
          horizon;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& e : pone) {
        best = std::min(best, std::max(e.payoff1 - r1, e.payoff2 - r2));
      }
      stats.push_back(best);
    }
    report.cells.push_back(internal::SummarizeCell(
        "joint_type=(" + std::to_string(joint.theta1) + "," +
            std::to_string(joint.theta2) + ")",
        stats, epsilon, delta));
    ++cell_index;
  }
  internal::Aggregate(report);
  return report;
}

struct SiRequest {
  double delta = 0.05;
  double epsilon = 0.15;
  int consistency_horizon = 100;
  int compatibility_horizon = 10;
};

// Every member consistent at the consistency horizon and every ordered pair
// (self-pairs included) compatible at the compatibility horizon.
inline CertificationReport CertifySiClass(
    const Population& population, const SiRequest& request,
    const GameClass& game, const TypeDistribution& type_dist,
    const std::vector<Adversary>& adversaries, int trials, std::uint64_t seed) {
  if (adversaries.empty()) throw InvalidArgument("adversary suite is empty");
  CertificationReport report;
  report.property = "si_class";
  report.subject = population.name();
  report.requested_delta = request.delta;
  report.requested_epsilon = request.epsilon;
  report.trials = trials;
  report.horizon = request.consistency_horizon;

  const GameClass consistency_game =
      game.WithHorizon(request.consistency_horizon);
  const auto& members = population.members();
  for (size_t i = 0; i < members.size(); ++i) {
    report.components.push_back(CertifyConsistency(
        members[i].factory, members[i].name, request.delta, request.epsilon,
        consistency_game, adversaries, trials, DeriveSeed(seed, 0, i)));
  }
  for (size_t i = 0; i < members.size(); ++i) {
    for (size_t j = 0; j < members.size(); ++j) {
      report.components.push_back(CertifyCompatibility(
          members[i].factory, members[j].factory,
          members[i].name + " x " + members[j].name, request.delta,
          request.epsilon, request.compatibility_horizon, type_dist, game,
          trials, DeriveSeed(seed, 1, i, j)));
    }
  }
  report.pass = true;
  const CertificationReport* binding = nullptr;
  for (const auto& c : report.components) {
    report.pass = report.pass && c.pass;
    report.epsilon_measured = std::max(report.epsilon_measured, c.epsilon_measured);
    if (!binding || c.delta_upper > binding->delta_upper ||
        (c.delta_upper == binding->delta_upper &&
         c.epsilon_measured > binding->epsilon_measured)) {
      binding = &c;
    }
    report.delta_measured = std::max(report.delta_measured, c.delta_measured);
    report.delta_upper = std::max(report.delta_upper, c.delta_upper);
  }
  if (binding) {
    report.binding =
        binding->property + ":" + binding->subject + ":" + binding->binding;
  }
  return report;
}

inline nlohmann::ordered_json ToJson(const CertificationReport& r) {
  nlohmann::ordered_json j;
  j["property"] = r.property;
  j["subject"] = r.subject;
  j["requested_delta"] = r.requested_delta;
  j["requested_epsilon"] = r.requested_epsilon;
  j["epsilon_measured"] = r.epsilon_measured;
  j["delta_measured"] = r.delta_measured;
  j["delta_upper"] = r.delta_upper;
  j["trials"] = r.trials;
  j["horizon"] = r.horizon;
  j["confidence"] = r.confidence;
  j["pass"] = r.pass;
  j["binding"] = r.binding;
  j["note"] =
      "necessary-condition test: finite adversary suite; realized per-step "
      "averages compared with expected equilibrium payoffs, sampling noise "
      "absorbed into epsilon";
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"label", c.label},
                     {"failures", c.failures},
                     {"trials", c.trials},
                     {"failure_rate", c.failure_rate},
                     {"epsilon_quantile", c.epsilon_quantile},
                     {"mean_statistic", c.mean_statistic}});
  }
  j["cells"] = std::move(cells);
  if (!r.components.empty()) {
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const auto& c : r.components) comps.push_back(ToJson(c));
    j["components"] = std::move(comps);
  }
  return j;
}

}  // namespace socint

#endif  // SOCINT_METRICS_H_
