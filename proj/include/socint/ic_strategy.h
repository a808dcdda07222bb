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

#ifndef SOCINT_IC_STRATEGY_H_
#define SOCINT_IC_STRATEGY_H_

// Imitate-then-commit: follow an imitation policy for the first T~ stages,
// summarize the observed joint play, draw one mixed strategy from a mixture
// built from that summary and play it i.i.d. for the rest of the episode.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "socint/episode.h"
#include "socint/equilibrium.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/imitation.h"
#include "socint/rng.h"

namespace socint {

struct JointEmpirical {
  JointDistribution distribution;
  int prefix_length = 0;
};

// Frequencies of joint actions over the first `prefix_length` stages.
inline JointEmpirical EmpiricalJointStrategy(const History& history,
                                             int prefix_length,
                                             int n_actions) {
  if (prefix_length < 1) throw InvalidArgument("prefix length must be >= 1");
  if (static_cast<int>(history.size()) < prefix_length) {
    throw InvalidArgument("history shorter than the requested prefix");
  }
  std::vector<double> w(n_actions * n_actions, 0.0);
  for (int t = 0; t < prefix_length; ++t) {
    w[history[t].first * n_actions + history[t].second] += 1.0;
  }
  for (double& v : w) v /= prefix_length;
  return {JointDistribution(n_actions, std::move(w)), prefix_length};
}

struct CommitComponent {
  MixedStrategy strategy;
  double weight = 0.0;
};

using CommitMixture = std::vector<CommitComponent>;

// Pure own-seat strategies weighted by the own-seat marginal of z_hat.
// For any partner payoff matrix B, E_nu[max_b B(x, b)] >= E_z[B], because a
// best reply to each pure own action does at least as well as the partner's
// realized reply to it.
inline CommitMixture MakeCommitMixture(const JointEmpirical& z_hat,
                                       Seat own_seat) {
  const int n = z_hat.distribution.n_actions();
  const MixedStrategy marginal = z_hat.distribution.Marginal(own_seat);
  CommitMixture nu;
  for (int a = 0; a < n; ++a) {
    if (marginal[a] > 0.0) nu.push_back({PureStrategy(n, a), marginal[a]});
  }
  return nu;
}

// E over nu of the partner's best-response value.
inline double ExpectedPartnerBestResponse(const CommitMixture& nu,
                                          int partner_type, Seat partner_seat,
                                          const GameClass& game) {
  double value = 0.0;
  for (const CommitComponent& c : nu) {
    value += c.weight *
             BestResponseTo(c.strategy, partner_type, partner_seat, game).value;
  }
  return value;
}

struct IcConfig {
  int imitation_horizon = 1;
  int total_horizon = 2;
  Seat seat = Seat::kTwo;
};

class ImitateThenCommitAgent final : public MetaStrategy {
 public:
  ImitateThenCommitAgent(std::shared_ptr<const EmpiricalPolicy> policy,
                         IcConfig config)
      : policy_(std::move(policy)), config_(config) {
    if (config_.imitation_horizon < 1 ||
        config_.imitation_horizon >= config_.total_horizon) {
      throw InvalidArgument("IC needs 0 < T~ < T");
    }
    if (policy_->imitation_horizon() != config_.imitation_horizon) {
      throw InvalidArgument("policy horizon does not match the IC config");
    }
    if (policy_->seat() != config_.seat) {
      throw InvalidArgument("policy seat does not match the IC config");
    }
  }

  std::string Name() const override { return "imitate_then_commit"; }

  void Reset(std::uint64_t episode_seed) override {
    episode_seed_ = episode_seed;
    committed_.reset();
  }

  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    const int t = static_cast<int>(history.size());
    if (t >= config_.total_horizon) {
      throw ProtocolViolation("IC agent asked to act past the horizon");
    }
    if (seat != config_.seat) {
      throw ProtocolViolation("IC agent configured for seat " +
                              std::to_string(SeatNumber(config_.seat)));
    }
    if (t < config_.imitation_horizon) return policy_->Lookup(own_type, history);
    if (!committed_) {
      const JointEmpirical z_hat = EmpiricalJointStrategy(
          history, config_.imitation_horizon, policy_->n_actions());
      const CommitMixture nu = MakeCommitMixture(z_hat, seat);
      std::vector<double> weights;
      for (const auto& c : nu) weights.push_back(c.weight);
      Rng rng(DeriveSeed(episode_seed_, kCommitStream));
      committed_ = nu[SampleIndex(weights, rng.Uniform())].strategy;
    }
    return *committed_;
  }

  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<ImitateThenCommitAgent>(*this);
  }

  const std::optional<MixedStrategy>& committed() const { return committed_; }
  const IcConfig& config() const { return config_; }

 private:
  static constexpr std::uint64_t kCommitStream = 0x1c;

  std::shared_ptr<const EmpiricalPolicy> policy_;
  IcConfig config_;
  std::uint64_t episode_seed_ = 0;
  std::optional<MixedStrategy> committed_;
};

// 2 delta + delta(K) + (2 (T - T~) / T + 1) epsilon, with delta(K) the
// imitation bound.
inline double Theorem1Bound(double delta, double epsilon, long long k,
                            int n_actions, int imitation_horizon, int horizon,
                            int n_types) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in [0, 1]");
  }
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  if (imitation_horizon < 1 || imitation_horizon >= horizon) {
    throw InvalidArgument("bound needs 0 < T~ < T");
  }
  const double tail =
      static_cast<double>(horizon - imitation_horizon) / horizon;
  return 2.0 * delta + Lemma1Bound(n_actions, imitation_horizon, n_types, k) +
         (2.0 * tail + 1.0) * epsilon;
}

}  // namespace socint

#endif  // SOCINT_IC_STRATEGY_H_
