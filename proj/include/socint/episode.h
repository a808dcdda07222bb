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

#ifndef SOCINT_EPISODE_H_
#define SOCINT_EPISODE_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "socint/errors.h"
#include "socint/game.h"
#include "socint/rng.h"

namespace socint {

// Maps (own type, seat, history of joint play) to a distribution over the
// next action.
//
// Instances may keep per-episode state.  Within one episode, successive Act
// calls see successive extensions of the same history (one new stage per
// call), which lets implementations update incrementally.  Reset must bring
// the object back to its freshly constructed state; the episode seed is
// shared by both seats of an episode.  An instance serves one episode at a
// time.
class MetaStrategy {
 public:
  virtual ~MetaStrategy() = default;

  virtual std::string Name() const = 0;
  virtual void Reset(std::uint64_t episode_seed) = 0;
  virtual MixedStrategy Act(int own_type, Seat seat,
                            const History& history) = 0;
  // Deep copy including the per-episode state.
  virtual std::unique_ptr<MetaStrategy> Clone() const = 0;
};

using StrategyFactory = std::function<std::unique_ptr<MetaStrategy>()>;

struct EpisodeRecord {
  JointType joint_type;
  History history;
  std::uint64_t seed = 0;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

namespace internal {

inline int SampleSeatAction(const MixedStrategy& dist, std::uint64_t seed,
                            int stage, Seat seat) {
  Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(stage)));
  double u = rng.Uniform();
  if (seat == Seat::kTwo) u = rng.Uniform();
  return SampleIndex(dist, u);
}

inline void CheckEmitted(const MixedStrategy& dist, const GameClass& game,
                         const MetaStrategy& who, Seat seat, int stage) {
  if (!IsValidMixedStrategy(dist, game.n_actions())) {
    throw ProtocolViolation("stage " + std::to_string(stage + 1) + ": seat " +
                            std::to_string(SeatNumber(seat)) + " strategy '" +
                            who.Name() +
                            "' emitted an invalid action distribution");
  }
}

}  // namespace internal

// Plays `n_stages` stages after resetting both strategies with `seed`.  The
// action of seat s at stage t is drawn from a stream keyed by (seed, t), so
// the result is a pure function of the arguments.
inline History PlayStages(MetaStrategy& strategy1, MetaStrategy& strategy2,
                          const JointType& joint_type, const GameClass& game,
                          std::uint64_t seed, int n_stages) {
  game.CheckJointType(joint_type);
  strategy1.Reset(seed);
  strategy2.Reset(seed);
  History history;
  history.reserve(n_stages);
  for (int t = 0; t < n_stages; ++t) {
    const MixedStrategy d1 =
        strategy1.Act(joint_type.theta1, Seat::kOne, history);
    internal::CheckEmitted(d1, game, strategy1, Seat::kOne, t);
    const MixedStrategy d2 =
        strategy2.Act(joint_type.theta2, Seat::kTwo, history);
    internal::CheckEmitted(d2, game, strategy2, Seat::kTwo, t);
    history.push_back({internal::SampleSeatAction(d1, seed, t, Seat::kOne),
                       internal::SampleSeatAction(d2, seed, t, Seat::kTwo)});
  }
  return history;
}

inline EpisodeRecord PlayEpisode(MetaStrategy& strategy1,
                                 MetaStrategy& strategy2,
                                 const JointType& joint_type,
                                 const GameClass& game, std::uint64_t seed) {
  return {joint_type,
          PlayStages(strategy1, strategy2, joint_type, game, seed,
                     game.horizon()),
          seed};
}

// Realized total payoff of `seat` over a history.
inline double RealizedTotalPayoff(const History& history, int theta, Seat seat,
                                  const GameClass& game) {
  const PayoffMatrix& g = game.Payoffs(theta);
  double total = 0.0;
  for (const JointAction& step : history) {
    total += g(step.Own(seat), step.Partner(seat));
  }
  return total;
}

struct PayoffEstimate {
  double estimate = 0.0;
  // 95% normal-approximation half-width from the rollout variance.
  double half_width = 0.0;
};

// Monte Carlo estimate of seat `seat`'s expected total payoff.
inline PayoffEstimate ExpectedTotalPayoff(MetaStrategy& strategy1,
                                          MetaStrategy& strategy2,
                                          const JointType& joint_type,
                                          const GameClass& game,
                                          int n_rollouts, std::uint64_t seed,
                                          Seat seat = Seat::kOne) {
  if (n_rollouts < 1) throw InvalidArgument("n_rollouts must be >= 1");
  std::vector<double> totals;
  totals.reserve(n_rollouts);
  for (int r = 0; r < n_rollouts; ++r) {
    const EpisodeRecord rec = PlayEpisode(strategy1, strategy2, joint_type,
                                          game, DeriveSeed(seed, r));
    totals.push_back(
        RealizedTotalPayoff(rec.history, joint_type.Of(seat), seat, game));
  }
  bool constant = true;
  for (double v : totals) constant = constant && v == totals.front();
  if (constant) return {totals.front(), 0.0};

  double mean = 0.0;
  for (double v : totals) mean += v;
  mean /= n_rollouts;
  double ss = 0.0;
  for (double v : totals) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n_rollouts - 1));
  return {mean, 1.959963984540054 * sd / std::sqrt(n_rollouts)};
}

}  // namespace socint

#endif  // SOCINT_EPISODE_H_
