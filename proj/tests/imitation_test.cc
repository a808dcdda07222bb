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
#include <sstream>

#include <gtest/gtest.h>

#include "socint/agents.h"
#include "socint/dataset_io.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/imitation.h"
#include "socint/population.h"

namespace socint {
namespace {

Population AlwaysZero() {
  return Population::Singleton(
      "always0", [] { return std::make_unique<ConstantAgent>(2, 0); });
}

Population UniformPop() {
  return Population::Singleton("uniform", [] {
    return std::make_unique<StationaryAgent>(UniformStrategy(2));
  });
}

Population HandshakePop(const GameClass& g) {
  const HandshakeCodebook book(g);
  const double lr = DefaultHedgeLearningRate(g.n_actions(), g.horizon());
  return Population::Singleton("handshake_si", [book, g, lr] {
    return MakeHandshakeSiAgent(book, g, lr);
  });
}

Dataset OneEpisode(int theta1, History h, int n_types = 2) {
  Dataset d;
  d.meta = {2, static_cast<int>(h.size()), n_types, 0, "manual", 1};
  d.episodes.push_back({{theta1, 0}, std::move(h), 0});
  return d;
}

TEST(DatasetTest, CardinalityAndLength) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 7);
  const Dataset d =
      GenerateDataset(UniformPop(), TypeDistribution::Uniform(2), 5, g, 1);
  ASSERT_EQ(d.episodes.size(), 5u);
  for (const auto& ep : d.episodes) EXPECT_EQ(ep.history.size(), 7u);
}

TEST(DatasetTest, DeterministicSerialization) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 12);
  const auto mu = TypeDistribution::Uniform(2);
  const std::string a = SerializeDataset(GenerateDataset(HandshakePop(g), mu, 30, g, 8));
  const std::string b = SerializeDataset(GenerateDataset(HandshakePop(g), mu, 30, g, 8));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, SerializeDataset(GenerateDataset(UniformPop(), mu, 30, g, 9)));
}

TEST(DatasetTest, DeterministicPopulationGivesConstantHistories) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 6);
  const Dataset d = GenerateDataset(
      AlwaysZero(), TypeDistribution::PointMass(2, {1, 1}), 4, g, 3);
  for (const auto& ep : d.episodes) {
    for (const auto& s : ep.history) EXPECT_EQ(s, (JointAction{0, 0}));
  }
}

TEST(DatasetIoTest, RoundTrip) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 9);
  const Dataset d =
      GenerateDataset(UniformPop(), TypeDistribution::Uniform(2), 20, g, 4);
  const std::string text = SerializeDataset(d);
  std::istringstream in(text);
  const Dataset back = ReadDataset(in);
  EXPECT_EQ(back.meta, d.meta);
  ASSERT_EQ(back.episodes.size(), d.episodes.size());
  for (size_t i = 0; i < d.episodes.size(); ++i) {
    EXPECT_EQ(back.episodes[i].joint_type, d.episodes[i].joint_type);
    EXPECT_EQ(back.episodes[i].history, d.episodes[i].history);
  }
  EXPECT_EQ(SerializeDataset(back), text);
  // 1 header + K lines.
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21);
}

TEST(DatasetIoTest, HeaderFormat) {
  const Dataset d = OneEpisode(0, {{0, 1}, {1, 1}});
  EXPECT_EQ(SerializeDataset(d),
            "{\"meta\": {\"n_actions\": 2, \"horizon\": 2, \"n_types\": 2, "
            "\"master_seed\": 0, \"population\": \"manual\", \"k\": 1}}\n"
            "{\"theta1\": 0, \"theta2\": 0, \"actions\": [[0,1],[1,1]]}\n");
}

TEST(DatasetIoTest, RejectsMalformedFiles) {
  const std::string header =
      "{\"meta\": {\"n_actions\": 2, \"horizon\": 2, \"n_types\": 2, "
      "\"master_seed\": 0, \"population\": \"x\", \"k\": 1}}\n";
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return ReadDataset(in);
  };
  EXPECT_THROW(parse(""), ConfigError);
  EXPECT_THROW(parse(header), ConfigError);  // k mismatch
  EXPECT_THROW(parse(header + "{\"theta1\": 0, \"theta2\": 0, \"actions\": "
                              "[[0,2],[0,0]]}\n"),
               ConfigError);
  EXPECT_THROW(parse(header + "{\"theta1\": 5, \"theta2\": 0, \"actions\": "
                              "[[0,1],[0,0]]}\n"),
               ConfigError);
  EXPECT_THROW(parse(header + "{\"theta1\": 0, \"theta2\": 0, \"actions\": "
                              "[[0,1]]}\n"),
               ConfigError);
  EXPECT_THROW(parse(header + "not json\n"), ConfigError);
  EXPECT_NO_THROW(parse(header + "{\"theta1\": 0, \"theta2\": 1, \"actions\": "
                                 "[[0,1],[1,0]]}\n"));
}

TEST(DatasetIoTest, GameMismatch) {
  const DatasetMeta meta{2, 10, 2, 0, "x", 1};
  EXPECT_NO_THROW(CheckDatasetMatchesGame(meta, MakeCoordPrefGame(2, 0.6, 10)));
  EXPECT_THROW(CheckDatasetMatchesGame(meta, MakeCoordPrefGame(2, 0.6, 11)),
               ConfigError);
  EXPECT_THROW(CheckDatasetMatchesGame(meta, MakeCoordPrefGame(3, 0.6, 10)),
               ConfigError);
}

TEST(FitImitationTest, SingleObservation) {
  const Dataset d = OneEpisode(0, {{0, 0}, {0, 0}, {0, 0}});
  const EmpiricalPolicy p = FitImitation(d, 2, Seat::kOne);
  EXPECT_EQ(p.table_size(), 2u);
  EXPECT_EQ(p.Lookup(0, {}), PureStrategy(2, 0));
  EXPECT_EQ(p.Lookup(0, {{0, 0}}), PureStrategy(2, 0));
  EXPECT_EQ(p.Lookup(1, {}), UniformStrategy(2));
  EXPECT_FALSE(p.Contains(0, {{0, 0}, {0, 0}}));
}

TEST(FitImitationTest, EmpiricalFrequencies) {
  Dataset d = OneEpisode(0, {{0, 0}, {0, 0}});
  d.episodes.push_back({{0, 1}, {{1, 0}, {0, 0}}, 0});
  d.meta.k = 2;
  const EmpiricalPolicy p = FitImitation(d, 1, Seat::kOne);
  EXPECT_EQ(p.Lookup(0, {}), (MixedStrategy{0.5, 0.5}));
  // Seat 2 keys on its own type (theta2).
  const EmpiricalPolicy p2 = FitImitation(d, 1, Seat::kTwo);
  EXPECT_EQ(p2.Lookup(0, {}), PureStrategy(2, 0));
  EXPECT_EQ(p2.Lookup(1, {}), PureStrategy(2, 0));
}

TEST(FitImitationTest, EmptyDatasetIsUniformAndWarned) {
  Dataset d;
  d.meta = {2, 5, 2, 0, "empty", 0};
  const EmpiricalPolicy p = FitImitation(d, 2, Seat::kOne);
  EXPECT_TRUE(p.warned_empty());
  EXPECT_EQ(p.Lookup(0, {}), UniformStrategy(2));
}

TEST(FitImitationTest, HorizonValidation) {
  const Dataset d = OneEpisode(0, {{0, 0}, {0, 0}});
  EXPECT_THROW(FitImitation(d, 0, Seat::kOne), InvalidArgument);
  EXPECT_THROW(FitImitation(d, 2, Seat::kOne), InvalidArgument);
}

TEST(FitImitationTest, LookupsAreValidDistributions) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 8);
  const Dataset d =
      GenerateDataset(UniformPop(), TypeDistribution::Uniform(2), 50, g, 2);
  const EmpiricalPolicy p = FitImitation(d, 4, Seat::kOne);
  Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    History h;
    const int len = static_cast<int>(rng.UniformInt(6));
    for (int t = 0; t < len; ++t) {
      h.push_back({static_cast<int>(rng.UniformInt(2)),
                   static_cast<int>(rng.UniformInt(2))});
    }
    EXPECT_TRUE(IsValidMixedStrategy(p.Lookup(static_cast<int>(rng.UniformInt(2)), h), 2));
  }
}

TEST(ImitationAgentTest, SeatMismatch) {
  const auto p = std::make_shared<EmpiricalPolicy>(
      FitImitation(OneEpisode(0, {{0, 0}, {0, 0}}), 1, Seat::kOne));
  ImitationAgent agent(p);
  EXPECT_THROW(agent.Act(0, Seat::kTwo, {}), ProtocolViolation);
}

TEST(RolloutExactTest, DeterministicPointMass) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  const auto dist = RolloutDistributionExact(
      nullptr, AlwaysZero(), TypeDistribution::Uniform(2), g, 2);
  ASSERT_EQ(dist.size(), 1u);
  EXPECT_NEAR(dist.begin()->second, 1.0, 1e-12);
  EXPECT_EQ(dist.begin()->first, (History{{0, 0}, {0, 0}}));
}

TEST(RolloutExactTest, UniformProduct) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  const auto dist = RolloutDistributionExact(
      nullptr, UniformPop(), TypeDistribution::Uniform(2), g, 1);
  ASSERT_EQ(dist.size(), 4u);
  for (const auto& [h, p] : dist) EXPECT_NEAR(p, 0.25, 1e-12);
}

TEST(RolloutExactTest, ImitationOfDeterministicPopulationMatches) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  const auto mu = TypeDistribution::PointMass(2, {0, 0});
  const Dataset d = GenerateDataset(AlwaysZero(), mu, 1, g, 3);
  const EmpiricalPolicy p = FitImitation(d, 3, Seat::kOne);
  const auto a = RolloutDistributionExact(nullptr, AlwaysZero(), mu, g, 3);
  const auto b = RolloutDistributionExact(&p, AlwaysZero(), mu, g, 3);
  EXPECT_EQ(TvDistance(a, b), 0.0);
}

TEST(RolloutExactTest, FullCoverageHandshakeReproducesSelfPlay) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  const auto mu = TypeDistribution::Uniform(2);
  const Population pop = HandshakePop(g);
  const Dataset d = GenerateDataset(pop, mu, 200, g, 5);
  for (Seat seat : {Seat::kOne, Seat::kTwo}) {
    const EmpiricalPolicy p = FitImitation(d, 3, seat);
    const auto a = RolloutDistributionExact(nullptr, pop, mu, g, 3);
    const auto b = RolloutDistributionExact(&p, pop, mu, g, 3);
    double total = 0.0;
    for (const auto& [h, m] : b) total += m;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_NEAR(TvDistance(a, b), 0.0, 1e-12);
  }
}

TEST(RolloutExactTest, Guard) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 20);
  EXPECT_THROW(RolloutDistributionExact(nullptr, UniformPop(),
                                        TypeDistribution::Uniform(2), g, 10),
               UnsupportedSize);
}

TEST(TvTest, Examples) {
  HistoryDistribution p{{{{0, 0}}, 0.5}, {{{0, 1}}, 0.5}};
  HistoryDistribution q{{{{0, 0}}, 0.25},
                        {{{0, 1}}, 0.25},
                        {{{1, 0}}, 0.25},
                        {{{1, 1}}, 0.25}};
  EXPECT_DOUBLE_EQ(TvDistance(p, p), 0.0);
  EXPECT_DOUBLE_EQ(TvDistance(p, q), 0.5);
  HistoryDistribution a{{{{0, 0}}, 1.0}}, b{{{{1, 1}}, 1.0}};
  EXPECT_DOUBLE_EQ(TvDistance(a, b), 1.0);
}

TEST(TvMcTest, IdenticalDeterministicGeneratorsGiveZero) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  const auto mu = TypeDistribution::Uniform(2);
  const Dataset d = GenerateDataset(AlwaysZero(), mu, 10, g, 3);
  const EmpiricalPolicy p = FitImitation(d, 2, Seat::kOne);
  const TvEstimate tv = TvDistanceMc(p, AlwaysZero(), mu, g, 2, 100, 1);
  EXPECT_EQ(tv.estimate, 0.0);
  EXPECT_TRUE(tv.biased_upward);
}

TEST(TvMcTest, SingleSampleOfDifferentGenerators) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 5);
  const auto mu = TypeDistribution::PointMass(2, {0, 0});
  // Policy from an always-1 dataset against an always-0 population.
  const Population ones = Population::Singleton(
      "always1", [] { return std::make_unique<ConstantAgent>(2, 1); });
  const EmpiricalPolicy p =
      FitImitation(GenerateDataset(ones, mu, 1, g, 1), 2, Seat::kOne);
  EXPECT_EQ(TvDistanceMc(p, AlwaysZero(), mu, g, 2, 1, 4).estimate, 1.0);
}

TEST(TvMcTest, AgreesWithExact) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 10);
  const auto mu = TypeDistribution::Uniform(2);
  const Population pop = UniformPop();
  // A sparse dataset leaves many uniform fallbacks; behaviour differs from
  // the population only through the fitted frequencies.
  const Population hs = HandshakePop(g);
  const EmpiricalPolicy p =
      FitImitation(GenerateDataset(hs, mu, 3, g, 2), 2, Seat::kOne);
  const double exact = TvDistance(RolloutDistributionExact(nullptr, pop, mu, g, 2),
                                  RolloutDistributionExact(&p, pop, mu, g, 2));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double mc = TvDistanceMc(p, pop, mu, g, 2, 100000, seed).estimate;
    EXPECT_NEAR(mc, exact, 0.03) << seed;
  }
}

TEST(Lemma1BoundTest, Examples) {
  EXPECT_DOUBLE_EQ(Lemma1Bound(2, 2, 2, 10), 2.0);
  EXPECT_NEAR(Lemma1Bound(2, 2, 2, 100000), 512 * std::log(1e5) / 1e5, 1e-15);
  EXPECT_NEAR(Lemma1Bound(2, 2, 2, 100000), 0.0590, 1e-4);
  EXPECT_DOUBLE_EQ(Lemma1Bound(4, 5, 9, 1000), 5.0);
  EXPECT_THROW(Lemma1Bound(2, 2, 2, 1), InvalidArgument);
}

}  // namespace
}  // namespace socint
