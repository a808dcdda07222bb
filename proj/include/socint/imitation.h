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

#ifndef SOCINT_IMITATION_H_
#define SOCINT_IMITATION_H_

// Learning from population self-play: dataset generation, the tabular
// history-conditioned imitation policy, distributions over partial histories
// (exact and sampled), total variation and the imitation error bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "socint/episode.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/population.h"
#include "socint/rng.h"

namespace socint {

struct DatasetMeta {
  int n_actions = 0;
  int horizon = 0;
  int n_types = 0;
  std::uint64_t master_seed = 0;
  std::string population;
  int k = 0;

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

struct Dataset {
  DatasetMeta meta;
  std::vector<EpisodeRecord> episodes;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Episode j uses seed DeriveSeed(master_seed, j): its pairing is drawn with
// child key 0 and play uses child key 1, so episodes are independent of each
// other and of generation order.
inline EpisodeRecord GenerateEpisode(const Population& population,
                                     const TypeDistribution& type_dist,
                                     const GameClass& game,
                                     std::uint64_t episode_seed) {
  Pairing pairing =
      SamplePairing(population, type_dist, DeriveSeed(episode_seed, 0));
  return PlayEpisode(*pairing.strategy1, *pairing.strategy2,
                     pairing.joint_type, game, DeriveSeed(episode_seed, 1));
}

inline Dataset GenerateDataset(const Population& population,
                               const TypeDistribution& type_dist, int k,
                               const GameClass& game,
                               std::uint64_t master_seed) {
  if (k < 1) throw InvalidArgument("dataset size K must be >= 1");
  if (type_dist.n_types() != game.n_types()) {
    throw InvalidArgument("type distribution does not match the game");
  }
  Dataset d;
  d.meta = {game.n_actions(), game.horizon(), game.n_types(), master_seed,
            population.name(), k};
  d.episodes.reserve(k);
  for (int j = 0; j < k; ++j) {
    d.episodes.push_back(
        GenerateEpisode(population, type_dist, game, DeriveSeed(master_seed, j)));
  }
  return d;
}

// Key of the imitation table: own type followed by the flattened prefix.
using PrefixKey = std::vector<int>;

struct PrefixKeyHash {
  size_t operator()(const PrefixKey& key) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : key) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
      h *= 0x100000001b3ULL;
    }
    return static_cast<size_t>(h);
  }
};

inline PrefixKey MakePrefixKey(int own_type, const History& history,
                               size_t length) {
  PrefixKey key;
  key.reserve(1 + 2 * length);
  key.push_back(own_type);
  for (size_t t = 0; t < length; ++t) {
    key.push_back(history[t].first);
    key.push_back(history[t].second);
  }
  return key;
}

class EmpiricalPolicy;
inline EmpiricalPolicy FitImitation(const Dataset& dataset,
                                    int imitation_horizon, Seat seat);

// Empirical next-action frequencies of one seat for every (own type, prefix)
// seen in the data with prefix length below the imitation horizon.  Absent
// keys map to the uniform distribution.
class EmpiricalPolicy {
 public:
  EmpiricalPolicy(int n_actions, int imitation_horizon, Seat seat)
      : n_actions_(n_actions), imitation_horizon_(imitation_horizon),
        seat_(seat) {}

  int n_actions() const { return n_actions_; }
  int imitation_horizon() const { return imitation_horizon_; }
  Seat seat() const { return seat_; }
  size_t table_size() const { return table_.size(); }
  bool warned_empty() const { return warned_empty_; }

  bool Contains(int own_type, const History& prefix) const {
    return table_.contains(MakePrefixKey(own_type, prefix, prefix.size()));
  }

  MixedStrategy Lookup(int own_type, const History& prefix) const {
    if (static_cast<int>(prefix.size()) >= imitation_horizon_) {
      return UniformStrategy(n_actions_);
    }
    auto it = table_.find(MakePrefixKey(own_type, prefix, prefix.size()));
    if (it == table_.end()) return UniformStrategy(n_actions_);
    return it->second;
  }

 private:
  friend EmpiricalPolicy FitImitation(const Dataset& dataset,
                                      int imitation_horizon, Seat seat);

  int n_actions_;
  int imitation_horizon_;
  Seat seat_;
  bool warned_empty_ = false;
  std::unordered_map<PrefixKey, MixedStrategy, PrefixKeyHash> table_;
};

inline EmpiricalPolicy FitImitation(const Dataset& dataset,
                                    int imitation_horizon, Seat seat) {
  const int horizon = dataset.meta.horizon;
  if (imitation_horizon < 1 || imitation_horizon >= horizon) {
    throw InvalidArgument("imitation horizon must satisfy 1 <= T~ < T");
  }
  const int n = dataset.meta.n_actions;
  EmpiricalPolicy policy(n, imitation_horizon, seat);
  if (dataset.episodes.empty()) {
    policy.warned_empty_ = true;
    return policy;
  }
  std::unordered_map<PrefixKey, std::vector<double>, PrefixKeyHash> counts;
  for (const EpisodeRecord& ep : dataset.episodes) {
    const int own_type = ep.joint_type.Of(seat);
    const size_t stop =
        std::min<size_t>(imitation_horizon, ep.history.size());
    PrefixKey key{own_type};
    for (size_t t = 0; t < stop; ++t) {
      auto [it, inserted] = counts.try_emplace(key, n, 0.0);
      it->second[ep.history[t].Own(seat)] += 1.0;
      key.push_back(ep.history[t].first);
      key.push_back(ep.history[t].second);
    }
  }
  for (auto& [key, c] : counts) {
    double total = 0.0;
    for (double v : c) total += v;
    for (double& v : c) v /= total;
    policy.table_.emplace(key, std::move(c));
  }
  return policy;
}

// Plays an EmpiricalPolicy from its own seat.
class ImitationAgent final : public MetaStrategy {
 public:
  explicit ImitationAgent(std::shared_ptr<const EmpiricalPolicy> policy)
      : policy_(std::move(policy)) {}

  std::string Name() const override { return "imitation"; }
  void Reset(std::uint64_t) override {}
  MixedStrategy Act(int own_type, Seat seat, const History& history) override {
    if (seat != policy_->seat()) {
      throw ProtocolViolation("imitation policy fit for seat " +
                              std::to_string(SeatNumber(policy_->seat())) +
                              " played from seat " +
                              std::to_string(SeatNumber(seat)));
    }
    return policy_->Lookup(own_type, history);
  }
  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<ImitationAgent>(*this);
  }

 private:
  std::shared_ptr<const EmpiricalPolicy> policy_;
};

// Distribution over histories of one fixed length.
using HistoryDistribution = std::map<History, double>;

inline constexpr double kExactEnumerationGuard = 1e6;

namespace internal {

inline void EnumerateRollouts(MetaStrategy& s1, MetaStrategy& s2,
                              const JointType& joint, History& history,
                              int length, double mass,
                              HistoryDistribution& out) {
  if (static_cast<int>(history.size()) == length) {
    out[history] += mass;
    return;
  }
  const MixedStrategy d1 = s1.Act(joint.theta1, Seat::kOne, history);
  const MixedStrategy d2 = s2.Act(joint.theta2, Seat::kTwo, history);
  const int n = static_cast<int>(d1.size());
  for (int a = 0; a < n; ++a) {
    if (d1[a] <= 0.0) continue;
    for (int b = 0; b < n; ++b) {
      if (d2[b] <= 0.0) continue;
      auto c1 = s1.Clone();
      auto c2 = s2.Clone();
      history.push_back({a, b});
      EnumerateRollouts(*c1, *c2, joint, history, length, mass * d1[a] * d2[b],
                        out);
      history.pop_back();
    }
  }
}

inline void CheckEnumerationGuard(int n_actions, int length) {
  const double support = std::pow(static_cast<double>(n_actions), 2.0 * length);
  if (support > kExactEnumerationGuard) {
    throw UnsupportedSize(
        "exact history enumeration needs N^(2T~) <= 1e6; use the Monte Carlo "
        "estimator");
  }
}

}  // namespace internal

// Exact distribution of h_{T~}: joint types from mu, each seat's strategy
// from rho, or the given policy in the policy's seat.  Zero-probability
// branches are pruned.
inline HistoryDistribution RolloutDistributionExact(
    const EmpiricalPolicy* seat_policy, const Population& population,
    const TypeDistribution& type_dist, const GameClass& game, int length) {
  internal::CheckEnumerationGuard(game.n_actions(), length);
  std::shared_ptr<const EmpiricalPolicy> policy;
  if (seat_policy) policy = std::make_shared<EmpiricalPolicy>(*seat_policy);

  HistoryDistribution out;
  History history;
  for (const JointType& joint : type_dist.Support()) {
    const double pj = type_dist.Probability(joint);
    for (int i = 0; i < population.size(); ++i) {
      for (int j = 0; j < population.size(); ++j) {
        double mass = pj;
        std::unique_ptr<MetaStrategy> s1, s2;
        if (policy && policy->seat() == Seat::kOne) {
          if (i > 0) continue;
          s1 = std::make_unique<ImitationAgent>(policy);
        } else {
          s1 = population.members()[i].factory();
          mass *= population.members()[i].weight;
        }
        if (policy && policy->seat() == Seat::kTwo) {
          if (j > 0) continue;
          s2 = std::make_unique<ImitationAgent>(policy);
        } else {
          s2 = population.members()[j].factory();
          mass *= population.members()[j].weight;
        }
        if (mass <= 0.0) continue;
        s1->Reset(0);
        s2->Reset(0);
        internal::EnumerateRollouts(*s1, *s2, joint, history, length, mass,
                                    out);
      }
    }
  }
  return out;
}

// Half the L1 distance over the union of supports.
inline double TvDistance(const HistoryDistribution& p,
                         const HistoryDistribution& q) {
  double l1 = 0.0;
  for (const auto& [h, mass] : p) {
    auto it = q.find(h);
    l1 += std::abs(mass - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [h, mass] : q) {
    if (!p.contains(h)) l1 += mass;
  }
  return std::min(1.0, 0.5 * l1);
}

// Empirical distribution of h_{length} from n_samples seeded rollouts.
// Sample i uses DeriveSeed(seed, i) exactly like dataset episodes do.
inline HistoryDistribution SampleHistoryDistribution(
    const EmpiricalPolicy* seat_policy, const Population& population,
    const TypeDistribution& type_dist, const GameClass& game, int length,
    int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
  std::shared_ptr<const EmpiricalPolicy> policy;
  if (seat_policy) policy = std::make_shared<EmpiricalPolicy>(*seat_policy);
  HistoryDistribution out;
  const double unit = 1.0 / n_samples;
  for (int i = 0; i < n_samples; ++i) {
    const std::uint64_t episode_seed = DeriveSeed(seed, i);
    Pairing pairing =
        SamplePairing(population, type_dist, DeriveSeed(episode_seed, 0));
    if (policy) {
      auto agent = std::make_unique<ImitationAgent>(policy);
      (policy->seat() == Seat::kOne ? pairing.strategy1 : pairing.strategy2) =
          std::move(agent);
    }
    out[PlayStages(*pairing.strategy1, *pairing.strategy2, pairing.joint_type,
                   game, DeriveSeed(episode_seed, 1), length)] += unit;
  }
  return out;
}

struct TvEstimate {
  double estimate = 0.0;
  // Plug-in TV between empirical histograms overestimates the true distance.
  bool biased_upward = true;
};

// Plug-in TV between population self-play and policy-in-seat rollouts.  Both
// sides use the same sample seeds (common random numbers).
inline TvEstimate TvDistanceMc(const EmpiricalPolicy& policy,
                               const Population& population,
                               const TypeDistribution& type_dist,
                               const GameClass& game, int length,
                               int n_samples, std::uint64_t seed) {
  const HistoryDistribution p = SampleHistoryDistribution(
      nullptr, population, type_dist, game, length, n_samples, seed);
  const HistoryDistribution q = SampleHistoryDistribution(
      &policy, population, type_dist, game, length, n_samples, seed);
  return {TvDistance(p, q), true};
}

// min{ T~, N^(2(T~+1)) |Theta| T~^2 ln(K) / K }, natural logarithm.
inline double Lemma1Bound(int n_actions, int imitation_horizon, int n_types,
                          long long k) {
  if (k < 2) throw InvalidArgument("imitation bound needs K >= 2");
  if (n_actions < 1 || imitation_horizon < 1 || n_types < 1) {
    throw InvalidArgument("imitation bound needs positive N, T~, |Theta|");
  }
  const double t = imitation_horizon;
  const double second = std::pow(static_cast<double>(n_actions),
                                 2.0 * (imitation_horizon + 1)) *
                        n_types * t * t * std::log(static_cast<double>(k)) /
                        static_cast<double>(k);
  return std::min(t, second);
}

}  // namespace socint

#endif  // SOCINT_IMITATION_H_
