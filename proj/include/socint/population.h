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

#ifndef SOCINT_POPULATION_H_
#define SOCINT_POPULATION_H_

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "socint/episode.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/rng.h"

namespace socint {

struct PopulationMember {
  std::string name;
  StrategyFactory factory;
  double weight = 1.0;
};

// A finite mixture over meta-strategies (rho).
class Population {
 public:
  Population(std::string name, std::vector<PopulationMember> members)
      : name_(std::move(name)), members_(std::move(members)) {
    if (members_.empty()) throw InvalidArgument("population is empty");
    double total = 0.0;
    for (const auto& m : members_) {
      if (!(m.weight >= 0.0)) {
        throw InvalidArgument("population weights must be non-negative");
      }
      if (!m.factory) throw InvalidArgument("member '" + m.name + "' has no factory");
      total += m.weight;
    }
    if (!(total > 0.0)) throw InvalidArgument("population weights sum to 0");
    for (auto& m : members_) m.weight /= total;
  }

  static Population Singleton(std::string name, StrategyFactory factory) {
    std::string member = name;
    return Population(std::move(name),
                      {{std::move(member), std::move(factory), 1.0}});
  }

  const std::string& name() const { return name_; }
  const std::vector<PopulationMember>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }

  std::vector<double> Weights() const {
    std::vector<double> w;
    for (const auto& m : members_) w.push_back(m.weight);
    return w;
  }

  int SampleIndex(double u) const { return socint::SampleIndex(Weights(), u); }

 private:
  std::string name_;
  std::vector<PopulationMember> members_;
};

// A distribution over joint types (mu), row = theta1.
class TypeDistribution {
 public:
  TypeDistribution(int n_types, std::vector<double> weights)
      : n_types_(n_types), weights_(std::move(weights)) {
    if (static_cast<int>(weights_.size()) != n_types_ * n_types_) {
      throw InvalidArgument("type distribution needs |Theta|^2 weights");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw InvalidArgument("type weights must be >= 0");
      total += w;
    }
    if (std::abs(total - 1.0) > kPayoffTolerance) {
      throw InvalidArgument("type weights must sum to 1");
    }
  }

  static TypeDistribution Uniform(int n_types) {
    return TypeDistribution(
        n_types, std::vector<double>(n_types * n_types,
                                     1.0 / (n_types * n_types)));
  }

  static TypeDistribution PointMass(int n_types, const JointType& joint) {
    std::vector<double> w(n_types * n_types, 0.0);
    w.at(joint.theta1 * n_types + joint.theta2) = 1.0;
    return TypeDistribution(n_types, std::move(w));
  }

  int n_types() const { return n_types_; }
  double Probability(const JointType& joint) const {
    return weights_[joint.theta1 * n_types_ + joint.theta2];
  }
  const std::vector<double>& weights() const { return weights_; }

  std::vector<JointType> Support() const {
    std::vector<JointType> support;
    for (int i = 0; i < n_types_; ++i) {
      for (int j = 0; j < n_types_; ++j) {
        if (weights_[i * n_types_ + j] > 0.0) support.push_back({i, j});
      }
    }
    return support;
  }

  JointType Sample(double u) const {
    const int flat = socint::SampleIndex(weights_, u);
    return {flat / n_types_, flat % n_types_};
  }

 private:
  int n_types_;
  std::vector<double> weights_;
};

struct Pairing {
  std::unique_ptr<MetaStrategy> strategy1;
  std::unique_ptr<MetaStrategy> strategy2;
  JointType joint_type;
  int member1 = 0;
  int member2 = 0;
};

// Two independent draws from rho and one from mu, all from `seed`.
inline Pairing SamplePairing(const Population& population,
                             const TypeDistribution& type_dist,
                             std::uint64_t seed) {
  Rng rng(seed);
  Pairing p;
  p.member1 = population.SampleIndex(rng.Uniform());
  p.member2 = population.SampleIndex(rng.Uniform());
  p.joint_type = type_dist.Sample(rng.Uniform());
  p.strategy1 = population.members()[p.member1].factory();
  p.strategy2 = population.members()[p.member2].factory();
  return p;
}

}  // namespace socint

#endif  // SOCINT_POPULATION_H_
