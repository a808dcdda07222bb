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

#ifndef SOCINT_AGENTS_H_
#define SOCINT_AGENTS_H_

// The agent zoo: fixed-behaviour agents, full-information no-regret learners
// (Hedge, regret matching), handshake convention agents (socially
// intelligent with a no-regret fallback, or grim trigger) and the
// CCE-tracking pair.  Also the adversaries used for consistency checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "socint/episode.h"
#include "socint/equilibrium.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/rng.h"

namespace socint {

// -- Fixed behaviour ---------------------------------------------------------

class ConstantAgent final : public MetaStrategy {
 public:
  ConstantAgent(int n_actions, int action)
      : strategy_(PureStrategy(n_actions, action)), action_(action) {}

  std::string Name() const override {
    return "constant_" + std::to_string(action_);
  }
  void Reset(std::uint64_t) override {}
  MixedStrategy Act(int, Seat, const History&) override { return strategy_; }
  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<ConstantAgent>(*this);
  }

 private:
  MixedStrategy strategy_;
  int action_;
};

// Plays a fixed mixed strategy every stage (uniform by default).
class StationaryAgent final : public MetaStrategy {
 public:
  explicit StationaryAgent(MixedStrategy strategy, std::string name = "uniform")
      : strategy_(std::move(strategy)), name_(std::move(name)) {}

  std::string Name() const override { return name_; }
  void Reset(std::uint64_t) override {}
  MixedStrategy Act(int, Seat, const History&) override { return strategy_; }
  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<StationaryAgent>(*this);
  }

 private:
  MixedStrategy strategy_;
  std::string name_;
};

// -- No-regret learners -------------------------------------------------------

// sqrt(8 ln N / T): the rate that minimizes Hedge's worst-case regret bound.
inline double DefaultHedgeLearningRate(int n_actions, int horizon) {
  return std::sqrt(8.0 * std::log(static_cast<double>(n_actions)) / horizon);
}

// Multiplicative weights over the counterfactual payoffs each own action
// would have earned against the partner's realized actions.
class HedgeAgent final : public MetaStrategy {
 public:
  HedgeAgent(double learning_rate, const GameClass& game)
      : learning_rate_(learning_rate),
        game_(std::make_shared<GameClass>(game)),
        cumulative_(game.n_actions(), 0.0) {
    if (!(learning_rate > 0.0)) {
      throw InvalidArgument("hedge learning rate must be positive");
    }
  }

  std::string Name() const override { return "hedge"; }
  void Reset(std::uint64_t) override {
    std::fill(cumulative_.begin(), cumulative_.end(), 0.0);
    consumed_ = 0;
  }

  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    const PayoffMatrix& g = game_->Payoffs(own_type);
    const int n = game_->n_actions();
    for (; consumed_ < history.size(); ++consumed_) {
      const int partner = history[consumed_].Partner(seat);
      for (int a = 0; a < n; ++a) cumulative_[a] += g(a, partner);
    }
    const double top = *std::max_element(cumulative_.begin(), cumulative_.end());
    MixedStrategy weights(n);
    double total = 0.0;
    for (int a = 0; a < n; ++a) {
      weights[a] = std::exp(learning_rate_ * (cumulative_[a] - top));
      total += weights[a];
    }
    for (double& w : weights) w /= total;
    return weights;
  }

  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<HedgeAgent>(*this);
  }

  double learning_rate() const { return learning_rate_; }

 private:
  double learning_rate_;
  std::shared_ptr<const GameClass> game_;
  std::vector<double> cumulative_;
  size_t consumed_ = 0;
};

// Plays proportionally to the positive parts of cumulative external regret.
class RegretMatchingAgent final : public MetaStrategy {
 public:
  explicit RegretMatchingAgent(const GameClass& game)
      : game_(std::make_shared<GameClass>(game)),
        regrets_(game.n_actions(), 0.0) {}

  std::string Name() const override { return "regret_matching"; }
  void Reset(std::uint64_t) override {
    std::fill(regrets_.begin(), regrets_.end(), 0.0);
    consumed_ = 0;
  }

  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    const PayoffMatrix& g = game_->Payoffs(own_type);
    const int n = game_->n_actions();
    for (; consumed_ < history.size(); ++consumed_) {
      const int own = history[consumed_].Own(seat);
      const int partner = history[consumed_].Partner(seat);
      const double realized = g(own, partner);
      for (int a = 0; a < n; ++a) regrets_[a] += g(a, partner) - realized;
    }
    return FromRegrets(regrets_);
  }

  // Normalized positive parts; uniform when no regret is positive.
  static MixedStrategy FromRegrets(std::span<const double> regrets) {
    const int n = static_cast<int>(regrets.size());
    double positive_sum = 0.0;
    for (double r : regrets) positive_sum += r > 0.0 ? r : 0.0;
    if (positive_sum <= 0.0) return UniformStrategy(n);
    MixedStrategy s(n);
    for (int a = 0; a < n; ++a) {
      s[a] = (regrets[a] > 0.0 ? regrets[a] : 0.0) / positive_sum;
    }
    return s;
  }

  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<RegretMatchingAgent>(*this);
  }

  const std::vector<double>& regrets() const { return regrets_; }

 private:
  std::shared_ptr<const GameClass> game_;
  std::vector<double> regrets_;
  size_t consumed_ = 0;
};

// -- Handshake conventions -----------------------------------------------------

// Fixed-length base-N encoding of types, most significant digit first.
class HandshakeCodebook {
 public:
  HandshakeCodebook(int n_actions, int n_types)
      : n_actions_(n_actions), n_types_(n_types) {
    if (n_actions < 2 && n_types > 1) {
      throw InvalidArgument("cannot encode several types with one action");
    }
    if (n_types < 1) throw InvalidArgument("type space must be non-empty");
    // Smallest L with N^L >= |Theta|.
    long long capacity = 1;
    while (capacity < n_types) {
      capacity *= n_actions;
      ++code_length_;
    }
  }

  explicit HandshakeCodebook(const GameClass& game)
      : HandshakeCodebook(game.n_actions(), game.n_types()) {}

  int code_length() const { return code_length_; }
  int n_types() const { return n_types_; }

  std::vector<int> Encode(int theta) const {
    if (theta < 0 || theta >= n_types_) {
      throw InvalidArgument("type outside codebook");
    }
    std::vector<int> digits(code_length_);
    for (int i = code_length_ - 1; i >= 0; --i) {
      digits[i] = theta % n_actions_;
      theta /= n_actions_;
    }
    return digits;
  }

  // True when `digits` can still be completed into some codeword.
  bool IsValidPrefix(std::span<const int> digits) const {
    if (static_cast<int>(digits.size()) > code_length_) return false;
    long long value = 0;
    for (int d : digits) {
      if (d < 0 || d >= n_actions_) return false;
      value = value * n_actions_ + d;
    }
    // Smallest completion is value * N^(remaining).
    for (size_t i = digits.size(); i < static_cast<size_t>(code_length_); ++i) {
      value *= n_actions_;
    }
    return value < n_types_;
  }

  int Decode(std::span<const int> digits) const {
    if (static_cast<int>(digits.size()) != code_length_ ||
        !IsValidPrefix(digits)) {
      throw InvalidArgument("not a codeword");
    }
    int value = 0;
    for (int d : digits) value = value * n_actions_ + d;
    return value;
  }

 private:
  int n_actions_;
  int n_types_;
  int code_length_ = 0;
};

// Utilitarian selection among PONE: highest payoff sum; ties go to the
// lexicographically greatest (strategy1, strategy2) probability vector, i.e.
// to profiles putting their mass on lower action indices.
inline EquilibriumProfile SelectConventionPone(
    const std::vector<EquilibriumProfile>& pone_set) {
  if (pone_set.empty()) throw NoPoneError("no PONE to select from");
  const EquilibriumProfile* best = &pone_set.front();
  for (const EquilibriumProfile& e : pone_set) {
    const double diff = (e.payoff1 + e.payoff2) - (best->payoff1 + best->payoff2);
    if (diff > kPayoffTolerance) {
      best = &e;
    } else if (std::abs(diff) <= kPayoffTolerance) {
      if (std::tie(e.strategy1, e.strategy2) >
          std::tie(best->strategy1, best->strategy2)) {
        best = &e;
      }
    }
  }
  return *best;
}

// The PONE both members of a convention agree on for a joint type, or
// nothing when the stage game has none.
inline std::optional<EquilibriumProfile> ConventionPone(const JointType& joint,
                                                        const GameClass& game) {
  const auto pone = ParetoOptimalNash(EnumerateNash(joint, game));
  if (pone.empty()) return std::nullopt;
  return SelectConventionPone(pone);
}

// Own pure action minimizing the best payoff a partner of `partner_type`
// can reach against it; over all types when the type is unknown.  Ties go to
// the lowest index.
inline int MinimaxPunishment(std::optional<int> partner_type,
                             const GameClass& game) {
  const int n = game.n_actions();
  int best_action = 0;
  double best_cap = std::numeric_limits<double>::infinity();
  for (int own = 0; own < n; ++own) {
    double cap = -1.0;
    for (int theta = 0; theta < game.n_types(); ++theta) {
      if (partner_type && theta != *partner_type) continue;
      const PayoffMatrix& g = game.Payoffs(theta);
      for (int reply = 0; reply < n; ++reply) cap = std::max(cap, g(reply, own));
    }
    if (cap < best_cap - kPayoffTolerance) {
      best_cap = cap;
      best_action = own;
    }
  }
  return best_action;
}

// Plays its type's codeword, decodes the partner's, then plays its side of
// the agreed PONE.  An observed partner action with zero probability under
// the convention is a deviation.  After a deviation the agent either falls
// back to Hedge run on the whole history (socially intelligent variant) or
// punishes with the minimax action until the end (grim trigger).
class HandshakeAgent final : public MetaStrategy {
 public:
  enum class OnDeviation { kNoRegretFallback, kGrimTrigger };
  enum class Phase { kHandshake, kConvention, kFallback, kPunish };

  HandshakeAgent(const HandshakeCodebook& codebook, const GameClass& game,
                 double fallback_learning_rate, OnDeviation on_deviation)
      : codebook_(codebook),
        game_(std::make_shared<GameClass>(game)),
        on_deviation_(on_deviation),
        fallback_(fallback_learning_rate, game) {
    if (codebook.code_length() >= game.horizon()) {
      throw InvalidArgument("handshake must be shorter than the horizon");
    }
  }

  std::string Name() const override {
    return on_deviation_ == OnDeviation::kGrimTrigger ? "grim_trigger"
                                                      : "handshake_si";
  }

  void Reset(std::uint64_t seed) override {
    phase_ = Phase::kHandshake;
    partner_digits_.clear();
    agreed_.reset();
    partner_type_.reset();
    punish_action_ = 0;
    deviation_stage_ = -1;
    consumed_ = 0;
    fallback_.Reset(seed);
  }

  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    if (consumed_ == 0 && codebook_.code_length() == 0 &&
        phase_ == Phase::kHandshake) {
      FinishHandshake(own_type, seat);
    }
    for (; consumed_ < history.size(); ++consumed_) {
      Observe(own_type, seat, history[consumed_],
              static_cast<int>(consumed_));
    }
    switch (phase_) {
      case Phase::kHandshake:
        return PureStrategy(game_->n_actions(),
                            codebook_.Encode(own_type)[history.size()]);
      case Phase::kConvention:
        return agreed_->StrategyOf(seat);
      case Phase::kFallback:
        return fallback_.Act(own_type, seat, history);
      case Phase::kPunish:
        return PureStrategy(game_->n_actions(), punish_action_);
    }
    return {};
  }

  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<HandshakeAgent>(*this);
  }

  Phase phase() const { return phase_; }
  const std::optional<EquilibriumProfile>& agreed() const { return agreed_; }
  std::optional<int> decoded_partner_type() const { return partner_type_; }
  // Zero-based stage of the first detected deviation, -1 if none.
  int deviation_stage() const { return deviation_stage_; }

 private:
  void Observe(int own_type, Seat seat, const JointAction& step, int stage) {
    const int partner_action = step.Partner(seat);
    if (phase_ == Phase::kHandshake) {
      partner_digits_.push_back(partner_action);
      if (!codebook_.IsValidPrefix(partner_digits_)) {
        Deviate(stage);
        return;
      }
      if (static_cast<int>(partner_digits_.size()) == codebook_.code_length()) {
        FinishHandshake(own_type, seat);
      }
    } else if (phase_ == Phase::kConvention) {
      if (agreed_->StrategyOf(OtherSeat(seat))[partner_action] <= 0.0) {
        Deviate(stage);
      }
    }
  }

  void FinishHandshake(int own_type, Seat seat) {
    partner_type_ = codebook_.Decode(partner_digits_);
    const JointType joint = seat == Seat::kOne
                                ? JointType{own_type, *partner_type_}
                                : JointType{*partner_type_, own_type};
    agreed_ = ConventionPone(joint, *game_);
    // Nothing to agree on: behave as a plain no-regret learner.
    phase_ = agreed_ ? Phase::kConvention : Phase::kFallback;
  }

  void Deviate(int stage) {
    deviation_stage_ = stage;
    if (on_deviation_ == OnDeviation::kGrimTrigger) {
      phase_ = Phase::kPunish;
      punish_action_ = MinimaxPunishment(partner_type_, *game_);
    } else {
      phase_ = Phase::kFallback;
    }
  }

  HandshakeCodebook codebook_;
  std::shared_ptr<const GameClass> game_;
  OnDeviation on_deviation_;
  HedgeAgent fallback_;

  Phase phase_ = Phase::kHandshake;
  std::vector<int> partner_digits_;
  std::optional<EquilibriumProfile> agreed_;
  std::optional<int> partner_type_;
  int punish_action_ = 0;
  int deviation_stage_ = -1;
  size_t consumed_ = 0;
};

inline std::unique_ptr<HandshakeAgent> MakeHandshakeSiAgent(
    const HandshakeCodebook& codebook, const GameClass& game,
    double fallback_learning_rate) {
  return std::make_unique<HandshakeAgent>(
      codebook, game, fallback_learning_rate,
      HandshakeAgent::OnDeviation::kNoRegretFallback);
}

// The punishment phase never learns, so the fallback rate is unused.
inline std::unique_ptr<HandshakeAgent> MakeGrimTriggerAgent(
    const HandshakeCodebook& codebook, const GameClass& game) {
  return std::make_unique<HandshakeAgent>(
      codebook, game, DefaultHedgeLearningRate(game.n_actions(), game.horizon()),
      HandshakeAgent::OnDeviation::kGrimTrigger);
}

// -- CCE tracking ---------------------------------------------------------------

inline constexpr double kWatchdogScale = 1.0;

// One seat of a recommendation-following pair.  Both seats regenerate the
// same i.i.d. stream of joint actions drawn from `target`, keyed by
// (shared seed, episode seed, stage), and play their own component.  A seat
// whose realized per-step external regret after t stages exceeds
// slack + 1/sqrt(t) switches to regret matching for good.
class CceTrackingAgent final : public MetaStrategy {
 public:
  CceTrackingAgent(JointDistribution target, const GameClass& game,
                   double watchdog_slack, std::uint64_t shared_seed)
      : target_(std::move(target)),
        game_(std::make_shared<GameClass>(game)),
        watchdog_slack_(watchdog_slack),
        shared_seed_(shared_seed),
        counterfactual_(game.n_actions(), 0.0),
        fallback_(game) {
    if (target_.n_actions() != game.n_actions()) {
      throw InvalidArgument("target size does not match N");
    }
  }

  std::string Name() const override { return "cce_tracker"; }

  void Reset(std::uint64_t episode_seed) override {
    episode_seed_ = episode_seed;
    std::fill(counterfactual_.begin(), counterfactual_.end(), 0.0);
    realized_ = 0.0;
    fired_stage_ = -1;
    consumed_ = 0;
    fallback_.Reset(episode_seed);
  }

  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    const PayoffMatrix& g = game_->Payoffs(own_type);
    const int n = game_->n_actions();
    for (; consumed_ < history.size(); ++consumed_) {
      const int own = history[consumed_].Own(seat);
      const int partner = history[consumed_].Partner(seat);
      realized_ += g(own, partner);
      for (int a = 0; a < n; ++a) counterfactual_[a] += g(a, partner);
      if (fired_stage_ < 0) {
        const double t = static_cast<double>(consumed_ + 1);
        const double regret =
            *std::max_element(counterfactual_.begin(), counterfactual_.end()) -
            realized_;
        if (regret / t > watchdog_slack_ + kWatchdogScale / std::sqrt(t)) {
          fired_stage_ = static_cast<int>(consumed_);
        }
      }
    }
    if (fired_stage_ >= 0) return fallback_.Act(own_type, seat, history);
    const JointAction rec = Recommendation(static_cast<int>(history.size()));
    return PureStrategy(n, rec.Own(seat));
  }

  JointAction Recommendation(int stage) const {
    Rng rng(DeriveSeed(shared_seed_, episode_seed_,
                       static_cast<std::uint64_t>(stage)));
    const int flat = SampleIndex(target_.weights(), rng.Uniform());
    const int n = game_->n_actions();
    return {flat / n, flat % n};
  }

  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<CceTrackingAgent>(*this);
  }

  bool fired() const { return fired_stage_ >= 0; }
  // Zero-based stage after which the watchdog fired, -1 if it has not.
  int fired_stage() const { return fired_stage_; }

 private:
  JointDistribution target_;
  std::shared_ptr<const GameClass> game_;
  double watchdog_slack_;
  std::uint64_t shared_seed_;
  std::uint64_t episode_seed_ = 0;
  std::vector<double> counterfactual_;
  double realized_ = 0.0;
  int fired_stage_ = -1;
  size_t consumed_ = 0;
  RegretMatchingAgent fallback_;
};

// Builds the two seats of a CCE-tracking pair.  The target must be a
// watchdog_slack-approximate CCE for every joint type in `support`;
// otherwise the watchdog would be expected to fire in self-play.
inline std::pair<std::unique_ptr<CceTrackingAgent>,
                 std::unique_ptr<CceTrackingAgent>>
MakeCceTrackingPair(const JointDistribution& target, const GameClass& game,
                    double watchdog_slack, std::uint64_t shared_seed,
                    std::span<const JointType> support) {
  for (const JointType& joint : support) {
    const CceCheck check = IsCce(target, joint, game, watchdog_slack);
    if (!check.verdict) {
      throw InvalidPopulation(
          "target is not a CCE (tolerance " + std::to_string(watchdog_slack) +
          ") for joint type (" + std::to_string(joint.theta1) + "," +
          std::to_string(joint.theta2) + "): deviation gain " +
          std::to_string(check.max_violation));
    }
  }
  return {std::make_unique<CceTrackingAgent>(target, game, watchdog_slack,
                                             shared_seed),
          std::make_unique<CceTrackingAgent>(target, game, watchdog_slack,
                                             shared_seed)};
}

// -- Adversaries ------------------------------------------------------------------

// Best response (own type's matrix) to the partner's empirical action
// frequencies; the first stage answers the uniform strategy.
class EmpiricalBestResponseAgent final : public MetaStrategy {
 public:
  explicit EmpiricalBestResponseAgent(const GameClass& game)
      : game_(std::make_shared<GameClass>(game)),
        counts_(game.n_actions(), 0.0) {}

  std::string Name() const override { return "best_response_empirical"; }
  void Reset(std::uint64_t) override {
    std::fill(counts_.begin(), counts_.end(), 0.0);
    consumed_ = 0;
  }
  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    for (; consumed_ < history.size(); ++consumed_) {
      counts_[history[consumed_].Partner(seat)] += 1.0;
    }
    const int n = game_->n_actions();
    MixedStrategy freq = UniformStrategy(n);
    if (!history.empty()) {
      for (int a = 0; a < n; ++a) freq[a] = counts_[a] / history.size();
    }
    return PureStrategy(n, BestResponseTo(freq, own_type, seat, *game_).action);
  }
  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<EmpiricalBestResponseAgent>(*this);
  }

 private:
  std::shared_ptr<const GameClass> game_;
  std::vector<double> counts_;
  size_t consumed_ = 0;
};

// Knows the victim's type and answers the victim's most recent action with
// the reply that pays the victim least (against uniform at stage 1).  The
// reply flips whenever the victim switches.
class AdversarialFlipAgent final : public MetaStrategy {
 public:
  AdversarialFlipAgent(const GameClass& game, int victim_type)
      : game_(std::make_shared<GameClass>(game)), victim_type_(victim_type) {
    game.Payoffs(victim_type);
  }

  std::string Name() const override { return "adversarial_flip"; }
  void Reset(std::uint64_t) override {}
  MixedStrategy Act(int, Seat seat, const History& history) override {
    const int n = game_->n_actions();
    const MixedStrategy victim =
        history.empty() ? UniformStrategy(n)
                        : PureStrategy(n, history.back().Partner(seat));
    const PayoffMatrix& g = game_->Payoffs(victim_type_);
    int worst = 0;
    double worst_value = std::numeric_limits<double>::infinity();
    for (int reply = 0; reply < n; ++reply) {
      double value = 0.0;
      for (int a = 0; a < n; ++a) value += victim[a] * g(a, reply);
      if (value < worst_value - kPayoffTolerance) {
        worst_value = value;
        worst = reply;
      }
    }
    return PureStrategy(n, worst);
  }
  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<AdversarialFlipAgent>(*this);
  }

 private:
  std::shared_ptr<const GameClass> game_;
  int victim_type_;
};

}  // namespace socint

#endif  // SOCINT_AGENTS_H_
