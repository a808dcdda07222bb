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

#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "socint/agents.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/metrics.h"
#include "socint/population.h"

namespace socint {
namespace {

StrategyFactory Constant(int a) {
  return [a] { return std::make_unique<ConstantAgent>(2, a); };
}

StrategyFactory HandshakeSi(const GameClass& g) {
  const HandshakeCodebook book(g);
  const double lr = DefaultHedgeLearningRate(g.n_actions(), g.horizon());
  return [book, g, lr] { return MakeHandshakeSiAgent(book, g, lr); };
}

StrategyFactory GrimTrigger(const GameClass& g) {
  const HandshakeCodebook book(g);
  return [book, g] { return MakeGrimTriggerAgent(book, g); };
}

TEST(ExternalRegretTest, Examples) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 2);
  const RegretReport r = ExternalRegret({{0, 0}, {1, 0}}, 0, Seat::kOne, g);
  EXPECT_DOUBLE_EQ(r.total, 1.0);
  EXPECT_DOUBLE_EQ(r.per_step, 0.5);
  EXPECT_EQ(r.horizon, 2);
  EXPECT_EQ(r.seat, Seat::kOne);
  EXPECT_DOUBLE_EQ(
      ExternalRegret({{1, 0}, {0, 1}}, 0, Seat::kOne, g).total, 1.0);
  // Best fixed response to a constant partner.
  EXPECT_DOUBLE_EQ(
      ExternalRegret({{1, 1}, {1, 1}}, 1, Seat::kTwo, g).total, 0.0);
  EXPECT_NEAR(ExternalRegret({{0, 1}, {0, 1}}, 1, Seat::kTwo, g).total, 1.2,
              1e-12);
}

TEST(ExternalRegretTest, CanBeNegative) {
  // Realized play beats every fixed action.
  const GameClass g("identity", 2, {PayoffMatrix::FromRows({{1, 0}, {0, 1}})}, 2);
  EXPECT_DOUBLE_EQ(
      ExternalRegret({{0, 0}, {1, 1}}, 0, Seat::kOne, g).total, -1.0);
}

TEST(ExternalRegretTest, ConstantBestActionHasZeroRegret) {
  // Exhaustive over 2x2 matrices with entries in {0, 1/4, ..., 1}.
  const double grid[] = {0, 0.25, 0.5, 0.75, 1};
  for (double a : grid) for (double b : grid) for (double c : grid) for (double d : grid) {
    const GameClass g("grid", 2, {PayoffMatrix::FromRows({{a, b}, {c, d}})}, 3);
    for (int mask = 0; mask < 8; ++mask) {
      History partner_seq;
      for (int t = 0; t < 3; ++t) partner_seq.push_back({0, (mask >> t) & 1});
      double v0 = 0, v1 = 0;
      for (const auto& s : partner_seq) {
        v0 += g.Payoffs(0)(0, s.second);
        v1 += g.Payoffs(0)(1, s.second);
      }
      const int best = v1 > v0 ? 1 : 0;
      for (auto& s : partner_seq) s.first = best;
      EXPECT_EQ(ExternalRegret(partner_seq, 0, Seat::kOne, g).total, 0.0);
    }
  }
}

TEST(AltruisticRegretTest, Examples) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  const JointType joint{0, 1};
  EXPECT_NEAR(AltruisticRegret(History(10, {0, 0}), 1, Seat::kTwo, joint, g).total,
              0.0, 1e-12);
  const RegretReport good =
      AltruisticRegret(History(10, {1, 1}), 1, Seat::kTwo, joint, g);
  EXPECT_NEAR(good.total, -4.0, 1e-12);
  EXPECT_EQ(good.seat, Seat::kOne);
  EXPECT_NEAR(AltruisticRegret(History(10, {0, 1}), 1, Seat::kTwo, joint, g).total,
              6.0, 1e-12);
  EXPECT_THROW(AltruisticRegret(History(10, {0, 1}), 0, Seat::kTwo, joint, g),
               InvalidArgument);
}

TEST(AltruisticRegretTest, BaselineMatchesWorstPone) {
  const GameClass g = MakeCoordPrefGame(3, 0.4, 5);
  for (int t1 = 0; t1 < 3; ++t1) {
    for (int t2 = 0; t2 < 3; ++t2) {
      for (Seat s : {Seat::kOne, Seat::kTwo}) {
        const auto pone = ParetoOptimalNash(EnumerateNash({t1, t2}, g));
        EXPECT_DOUBLE_EQ(AltruisticBaseline({t1, t2}, s, g),
                         WorstPoneFor(s, pone).PayoffOf(s));
      }
    }
  }
}

TEST(AltruisticRegretTest, InvariantToAiPayoffs) {
  // The AI (seat 1) has type 0; an affine rescaling of its matrix keeps
  // every equilibrium and the partner's payoffs.
  const PayoffMatrix partner = PayoffMatrix::FromRows({{0.3, 0.1}, {0.0, 0.9}});
  const GameClass base("base", 2,
                       {PayoffMatrix::FromRows({{0.9, 0.2}, {0.1, 0.7}}), partner},
                       6);
  const GameClass scaled(
      "scaled", 2,
      {PayoffMatrix::FromRows({{0.1 + 0.5 * 0.9, 0.1 + 0.5 * 0.2},
                               {0.1 + 0.5 * 0.1, 0.1 + 0.5 * 0.7}}),
       partner},
      6);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    History h;
    for (int t = 0; t < 6; ++t) {
      h.push_back({static_cast<int>(rng.UniformInt(2)),
                   static_cast<int>(rng.UniformInt(2))});
    }
    const RegretReport a = AltruisticRegret(h, 1, Seat::kTwo, {0, 1}, base);
    const RegretReport b = AltruisticRegret(h, 1, Seat::kTwo, {0, 1}, scaled);
    EXPECT_NEAR(a.total, b.total, 1e-12);
  }
}

TEST(WilsonTest, KnownValues) {
  const BinomialInterval zero = WilsonInterval(0, 30);
  EXPECT_DOUBLE_EQ(zero.lower, 0.0);
  const double z2 = kNormalQuantile975 * kNormalQuantile975;
  EXPECT_NEAR(zero.upper, z2 / (30 + z2), 1e-12);
  const BinomialInterval half = WilsonInterval(50, 100);
  EXPECT_NEAR(half.lower + half.upper, 1.0, 1e-12);
  EXPECT_NEAR(half.upper, 0.596168, 1e-6);
}

TEST(CertifyConsistencyTest, ConstantBestResponderPasses) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 20);
  const CertificationReport r = CertifyConsistency(
      Constant(0), "constant_0", 0.05, 0.0, g, {MakeAdversary("constant_0")},
      100, 1);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.delta_measured, 0.0);
  EXPECT_EQ(r.epsilon_measured, 0.0);
  EXPECT_EQ(r.cells.size(), 4u);  // 2 types x 1 adversary x 2 seats
}

TEST(CertifyConsistencyTest, ConstantAgentIsExploited) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 50);
  const CertificationReport r = CertifyConsistency(
      Constant(0), "constant_0", 0.05, 0.1, g,
      {MakeAdversary("adversarial_flip")}, 30, 1);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.delta_measured, 1.0);
  EXPECT_GE(r.epsilon_measured, 0.5);
}

TEST(CertifyConsistencyTest, Validation) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  EXPECT_THROW(CertifyConsistency(Constant(0), "c", 0.05, 0.1, g, {}, 30, 1),
               InvalidArgument);
  EXPECT_THROW(CertifyConsistency(Constant(0), "c", 0.05, 0.1, g,
                                  StandardAdversarySuite(2), 29, 1),
               InvalidArgument);
  EXPECT_THROW(MakeAdversary("nope"), InvalidArgument);
}

TEST(CertifyConsistencyTest, HandshakeSiIsConsistent) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 400);
  const CertificationReport r = CertifyConsistency(
      HandshakeSi(g), "handshake_si", 0.05, 0.15, g,
      StandardAdversarySuite(2), 100, 2);
  EXPECT_TRUE(r.pass) << ToJson(r).dump(2);
}

TEST(CertifyConsistencyTest, GrimTriggerIsNot) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 200);
  const CertificationReport r = CertifyConsistency(
      GrimTrigger(g), "grim_trigger", 0.05, 0.15, g,
      StandardAdversarySuite(2), 50, 2);
  EXPECT_FALSE(r.pass);
}

TEST(CertifyConsistencyTest, ReplayIsByteIdentical) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 100);
  auto run = [&] {
    return ToJson(CertifyConsistency(
                      [g] {
                        return std::make_unique<HedgeAgent>(
                            DefaultHedgeLearningRate(2, 100), g);
                      },
                      "hedge", 0.05, 0.1, g, StandardAdversarySuite(2), 30, 9))
        .dump();
  };
  EXPECT_EQ(run(), run());
}

TEST(CertifyCompatibilityTest, HandshakePairPasses) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  const CertificationReport r = CertifyCompatibility(
      HandshakeSi(g), HandshakeSi(g), "si x si", 0.05, 0.15, 10,
      TypeDistribution::Uniform(2), g, 100, 3);
  EXPECT_TRUE(r.pass) << ToJson(r).dump(2);
  EXPECT_EQ(r.cells.size(), 4u);
  EXPECT_NEAR(r.epsilon_measured, 0.1, 1e-12);
}

TEST(CertifyCompatibilityTest, HandshakeAgainstNoiseFails) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  const CertificationReport r = CertifyCompatibility(
      HandshakeSi(g),
      [] { return std::make_unique<StationaryAgent>(UniformStrategy(2)); },
      "si x uniform", 0.05, 0.15, 10, TypeDistribution::Uniform(2), g, 100, 3);
  EXPECT_FALSE(r.pass);
}

TEST(CertifyCompatibilityTest, FixedPonePairHasZeroGap) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  const CertificationReport r = CertifyCompatibility(
      Constant(0), Constant(0), "c0 x c0", 0.05, 0.0, 10,
      TypeDistribution::PointMass(2, {0, 1}), g, 100, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.epsilon_measured, 0.0, 1e-12);
}

TEST(CertifySiClassTest, HandshakeSingletonPasses) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 400);
  const Population pop = Population::Singleton("handshake_si", HandshakeSi(g));
  const CertificationReport r =
      CertifySiClass(pop, {0.05, 0.15, 400, 10}, g, TypeDistribution::Uniform(2),
                     StandardAdversarySuite(2), 100, 4);
  EXPECT_TRUE(r.pass) << ToJson(r).dump(2);
  EXPECT_EQ(r.components.size(), 2u);
  EXPECT_FALSE(r.binding.empty());
}

TEST(CertifySiClassTest, GrimTriggerPopulationFailsConsistency) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 200);
  const Population pop = Population::Singleton("grim_trigger", GrimTrigger(g));
  const CertificationReport r =
      CertifySiClass(pop, {0.05, 0.15, 200, 10}, g, TypeDistribution::Uniform(2),
                     StandardAdversarySuite(2), 100, 4);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.components[0].pass);
  EXPECT_EQ(r.components[0].property, "consistency");
  EXPECT_TRUE(r.components[1].pass);
  EXPECT_THROW(CertifySiClass(pop, {0.05, 0.15, 200, 10}, g,
                              TypeDistribution::Uniform(2), {}, 50, 4),
               InvalidArgument);
}

}  // namespace
}  // namespace socint
