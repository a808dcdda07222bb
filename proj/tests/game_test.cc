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
#include <map>

#include <gtest/gtest.h>

#include "socint/agents.h"
#include "socint/episode.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/rng.h"

namespace socint {
namespace {

TEST(PayoffTest, PureAgainstPureReadsOneEntry) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  EXPECT_DOUBLE_EQ(Payoff(PureStrategy(2, 0), PureStrategy(2, 1), 0, g), 0.0);
}

TEST(PayoffTest, UniformOnIdentityCoordination) {
  const GameClass g("identity", 2, {PayoffMatrix::FromRows({{1, 0}, {0, 1}})},
                    1);
  EXPECT_DOUBLE_EQ(Payoff(UniformStrategy(2), UniformStrategy(2), 0, g), 0.5);
}

TEST(PayoffTest, PureAgainstMixed) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  EXPECT_NEAR(Payoff(PureStrategy(2, 0), MixedStrategy{0.375, 0.625}, 0, g), 0.375, 1e-12);
}

TEST(PayoffTest, DimensionMismatchThrows) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  EXPECT_THROW(Payoff(MixedStrategy{0.5, 0.5, 0.0}, UniformStrategy(2), 0, g),
               InvalidArgument);
}

TEST(PayoffTest, Bilinear) {
  const GameClass g = MakeCoordPrefGame(3, 0.4, 1);
  Rng rng(7);
  auto random_mix = [&] {
    MixedStrategy s(3);
    double total = 0.0;
    for (double& p : s) total += (p = rng.Uniform());
    for (double& p : s) p /= total;
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const MixedStrategy x = random_mix(), y = random_mix(), o = random_mix();
    const double alpha = rng.Uniform();
    MixedStrategy mix(3);
    for (int i = 0; i < 3; ++i) mix[i] = alpha * x[i] + (1 - alpha) * y[i];
    const int theta = trial % 3;
    EXPECT_NEAR(Payoff(mix, o, theta, g),
                alpha * Payoff(x, o, theta, g) +
                    (1 - alpha) * Payoff(y, o, theta, g),
                1e-9);
  }
}

TEST(GameTest, CoordPrefMatrices) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  EXPECT_EQ(g.Payoffs(0), PayoffMatrix::FromRows({{1, 0}, {0, 0.6}}));
  EXPECT_EQ(g.Payoffs(1), PayoffMatrix::FromRows({{0.6, 0}, {0, 1}}));
  EXPECT_DOUBLE_EQ(MakeCoordPrefGame(3, 0.5, 1).Payoffs(2)(2, 2), 1.0);
  EXPECT_EQ(g.n_types(), 2);
  EXPECT_EQ(g.horizon(), 5);
}

TEST(GameTest, RejectsBadParameters) {
  EXPECT_THROW(MakeCoordPrefGame(1, 0.6, 1), InvalidArgument);
  EXPECT_THROW(MakeCoordPrefGame(2, 1.0, 1), InvalidArgument);
  EXPECT_THROW(MakeCoordPrefGame(2, 0.6, 0), InvalidArgument);
  EXPECT_THROW(PayoffMatrix::FromRows({{1.5, 0}, {0, 0}}), InvalidArgument);
  EXPECT_THROW(PayoffMatrix::FromRows({{1, 0}}), InvalidArgument);
  EXPECT_THROW(MakeCoordPrefGame(2, 0.6, 1).Payoffs(2), InvalidArgument);
}

TEST(EpisodeTest, ConstantAgentsProduceConstantHistory) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 3);
  ConstantAgent a(2, 0), b(2, 0);
  const EpisodeRecord rec = PlayEpisode(a, b, {0, 1}, g, 42);
  EXPECT_EQ(rec.history, (History{{0, 0}, {0, 0}, {0, 0}}));
  EXPECT_EQ(rec.seed, 42u);
}

TEST(EpisodeTest, ReplayIsIdentical) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 50);
  StationaryAgent a(UniformStrategy(2)), b(UniformStrategy(2));
  const EpisodeRecord first = PlayEpisode(a, b, {0, 1}, g, 9);
  const EpisodeRecord second = PlayEpisode(a, b, {0, 1}, g, 9);
  EXPECT_EQ(first, second);
  EXPECT_NE(first, PlayEpisode(a, b, {0, 1}, g, 10));
}

TEST(EpisodeTest, UniformJointFrequencies) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10000);
  StationaryAgent a(UniformStrategy(2)), b(UniformStrategy(2));
  const EpisodeRecord rec = PlayEpisode(a, b, {0, 0}, g, 123);
  std::map<JointAction, int> counts;
  for (const JointAction& step : rec.history) ++counts[step];
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      EXPECT_NEAR(counts[(JointAction{x, y})] / 10000.0, 0.25, 0.02);
    }
  }
}

class BadStrategy final : public MetaStrategy {
 public:
  std::string Name() const override { return "bad"; }
  void Reset(std::uint64_t) override {}
  MixedStrategy Act(int, Seat, const History& history) override {
    if (history.size() == 2) return {0.7, 0.7};
    return {1.0, 0.0};
  }
  std::unique_ptr<MetaStrategy> Clone() const override {
    return std::make_unique<BadStrategy>(*this);
  }
};

TEST(EpisodeTest, InvalidDistributionNamesStage) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  BadStrategy bad;
  ConstantAgent c(2, 0);
  try {
    PlayEpisode(c, bad, {0, 0}, g, 1);
    FAIL() << "expected a protocol violation";
  } catch (const ProtocolViolation& e) {
    EXPECT_NE(std::string(e.what()).find("stage 3"), std::string::npos)
        << e.what();
  }
}

TEST(EpisodeTest, HistoriesStayInRange) {
  const GameClass g = MakeCoordPrefGame(3, 0.5, 40);
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    MixedStrategy s1(3), s2(3);
    double t1 = 0, t2 = 0;
    for (int i = 0; i < 3; ++i) {
      t1 += (s1[i] = rng.Uniform());
      t2 += (s2[i] = rng.Uniform());
    }
    for (int i = 0; i < 3; ++i) {
      s1[i] /= t1;
      s2[i] /= t2;
    }
    StationaryAgent a(s1, "r1"), b(s2, "r2");
    const EpisodeRecord rec =
        PlayEpisode(a, b, {trial % 3, (trial + 1) % 3}, g, rng.NextU64());
    ASSERT_EQ(rec.history.size(), 40u);
    for (const JointAction& step : rec.history) {
      EXPECT_TRUE(step.first >= 0 && step.first < 3);
      EXPECT_TRUE(step.second >= 0 && step.second < 3);
    }
  }
}

TEST(ExpectedPayoffTest, DeterministicPairs) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  ConstantAgent zero(2, 0), zero_b(2, 0), one(2, 1);
  const PayoffEstimate coord = ExpectedTotalPayoff(zero, zero_b, {0, 0}, g, 5, 1);
  EXPECT_EQ(coord.estimate, 10.0);
  EXPECT_EQ(coord.half_width, 0.0);
  const PayoffEstimate miss = ExpectedTotalPayoff(zero, one, {0, 0}, g, 5, 1);
  EXPECT_EQ(miss.estimate, 0.0);
  EXPECT_EQ(miss.half_width, 0.0);
}

TEST(ExpectedPayoffTest, UniformPair) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 100);
  StationaryAgent a(UniformStrategy(2)), b(UniformStrategy(2));
  const PayoffEstimate est = ExpectedTotalPayoff(a, b, {0, 0}, g, 10000, 5);
  EXPECT_LT(est.half_width, 1.0);
  EXPECT_NEAR(est.estimate, 40.0, est.half_width);
}

TEST(RngTest, DerivedStreamsAreStable) {
  EXPECT_EQ(DeriveSeed(1, 2, 3), DeriveSeed(1, 2, 3));
  EXPECT_NE(DeriveSeed(1, 2, 3), DeriveSeed(1, 3, 2));
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
  const std::vector<double> probs = {0.0, 0.5, 0.0, 0.5};
  EXPECT_EQ(SampleIndex(probs, 0.0), 1);
  EXPECT_EQ(SampleIndex(probs, 0.75), 3);
  EXPECT_EQ(SampleIndex(probs, 0.9999999999), 3);
}

}  // namespace
}  // namespace socint
