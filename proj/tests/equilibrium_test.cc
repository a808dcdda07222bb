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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "socint/equilibrium.h"
#include "socint/errors.h"
#include "socint/game.h"
#include "socint/rng.h"

namespace socint {
namespace {

// Largest gain from a pure deviation, computed from the raw matrices without
// touching the solver's helpers.
double DeviationGain(const EquilibriumProfile& e, const PayoffMatrix& g1,
                     const PayoffMatrix& g2) {
  const int n = g1.n_actions();
  double u1 = 0, u2 = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double w = e.strategy1[a] * e.strategy2[b];
      u1 += w * g1(a, b);
      u2 += w * g2(b, a);
    }
  }
  double gain = 0;
  for (int d = 0; d < n; ++d) {
    double v1 = 0, v2 = 0;
    for (int x = 0; x < n; ++x) {
      v1 += e.strategy2[x] * g1(d, x);
      v2 += e.strategy1[x] * g2(d, x);
    }
    gain = std::max({gain, v1 - u1, v2 - u2});
  }
  return gain;
}

GameClass RandomGame(int n, Rng& rng) {
  std::vector<PayoffMatrix> mats;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> e(n * n);
    for (double& v : e) v = rng.Uniform();
    mats.emplace_back(n, std::move(e));
  }
  return GameClass("random", n, std::move(mats), 1);
}

bool Near(const MixedStrategy& a, const MixedStrategy& b, double tol = 1e-6) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

TEST(BestResponseTest, CoordPrefExamples) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  BestResponse br = BestResponseTo(PureStrategy(2, 0), 1, Seat::kTwo, g);
  EXPECT_EQ(br.action, 0);
  EXPECT_DOUBLE_EQ(br.value, 0.6);
  br = BestResponseTo(PureStrategy(2, 1), 1, Seat::kTwo, g);
  EXPECT_EQ(br.action, 1);
  EXPECT_DOUBLE_EQ(br.value, 1.0);
}

TEST(BestResponseTest, TieBreaksLow) {
  const GameClass g("identity", 2, {PayoffMatrix::FromRows({{1, 0}, {0, 1}})},
                    1);
  const BestResponse br = BestResponseTo(UniformStrategy(2), 0, Seat::kOne, g);
  EXPECT_EQ(br.action, 0);
  EXPECT_DOUBLE_EQ(br.value, 0.5);
}

TEST(EnumerateNashTest, MatchingPenniesHasUniqueUniformNe) {
  const GameClass g = MakeMatchingPenniesGame(1);
  const auto ne = EnumerateNash({0, 1}, g);
  ASSERT_EQ(ne.size(), 1u);
  EXPECT_TRUE(Near(ne[0].strategy1, {0.5, 0.5}));
  EXPECT_TRUE(Near(ne[0].strategy2, {0.5, 0.5}));
}

TEST(EnumerateNashTest, CoordPrefMixedTypes) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  const auto ne = EnumerateNash({0, 1}, g);
  ASSERT_EQ(ne.size(), 3u);
  int found = 0;
  for (const auto& e : ne) {
    if (Near(e.strategy1, {1, 0}) && Near(e.strategy2, {1, 0})) {
      EXPECT_NEAR(e.payoff1, 1.0, 1e-9);
      EXPECT_NEAR(e.payoff2, 0.6, 1e-9);
      ++found;
    } else if (Near(e.strategy1, {0, 1}) && Near(e.strategy2, {0, 1})) {
      EXPECT_NEAR(e.payoff1, 0.6, 1e-9);
      EXPECT_NEAR(e.payoff2, 1.0, 1e-9);
      ++found;
    } else if (Near(e.strategy1, {0.625, 0.375}) &&
               Near(e.strategy2, {0.375, 0.625})) {
      EXPECT_NEAR(e.payoff1, 0.375, 1e-9);
      EXPECT_NEAR(e.payoff2, 0.375, 1e-9);
      ++found;
    }
  }
  EXPECT_EQ(found, 3);
}

TEST(EnumerateNashTest, CoordPrefSameTypeContainsPureZero) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  const auto ne = EnumerateNash({0, 0}, g);
  EXPECT_TRUE(std::any_of(ne.begin(), ne.end(), [](const auto& e) {
    return Near(e.strategy1, {1, 0}) && Near(e.strategy2, {1, 0}) &&
           std::abs(e.payoff1 - 1) < 1e-9 && std::abs(e.payoff2 - 1) < 1e-9;
  }));
}

TEST(EnumerateNashTest, SizeGuard) {
  const GameClass g = MakeCoordPrefGame(6, 0.5, 1);
  EXPECT_THROW(EnumerateNash({0, 1}, g), UnsupportedSize);
}

TEST(EnumerateNashTest, RandomGamesPassIndependentCheck) {
  Rng rng(2024);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 60; ++trial) {
      const GameClass g = RandomGame(n, rng);
      const auto ne = EnumerateNash({0, 1}, g);
      ASSERT_FALSE(ne.empty());
      for (const auto& e : ne) {
        EXPECT_LE(DeviationGain(e, g.Payoffs(0), g.Payoffs(1)), 1e-9);
        EXPECT_TRUE(IsValidMixedStrategy(e.strategy1, n));
        EXPECT_TRUE(IsValidMixedStrategy(e.strategy2, n));
        EXPECT_NEAR(e.payoff1, Payoff(e.strategy1, e.strategy2, 0, g), 1e-9);
        EXPECT_NEAR(e.payoff2, Payoff(e.strategy2, e.strategy1, 1, g), 1e-9);
      }
      // Generic games have an odd number of equilibria.
      EXPECT_EQ(ne.size() % 2, 1u);
    }
  }
}

// Closed-form 2x2 oracle: a fully mixed NE exists iff both indifference
// solutions lie strictly inside (0, 1).
TEST(EnumerateNashTest, TwoByTwoMixedMatchesClosedForm) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const GameClass g = RandomGame(2, rng);
    const PayoffMatrix& A = g.Payoffs(0);
    const PayoffMatrix& B = g.Payoffs(1);  // B(own col action, row action)
    // q = P(col plays 0) makes row indifferent.
    const double dq = A(0, 0) - A(0, 1) - A(1, 0) + A(1, 1);
    const double dp = B(0, 0) - B(0, 1) - B(1, 0) + B(1, 1);
    const double q = (A(1, 1) - A(0, 1)) / dq;
    const double p = (B(1, 1) - B(0, 1)) / dp;
    const bool interior = q > 1e-6 && q < 1 - 1e-6 && p > 1e-6 && p < 1 - 1e-6;
    const auto ne = EnumerateNash({0, 1}, g);
    const bool found = std::any_of(ne.begin(), ne.end(), [&](const auto& e) {
      return Near(e.strategy1, {p, 1 - p}, 1e-7) &&
             Near(e.strategy2, {q, 1 - q}, 1e-7);
    });
    EXPECT_EQ(found, interior) << "trial " << trial;
  }
}

TEST(ParetoTest, CoordPrefDropsMixed) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  const auto pone = ParetoOptimalNash(EnumerateNash({0, 1}, g));
  ASSERT_EQ(pone.size(), 2u);
  for (const auto& e : pone) EXPECT_GT(e.payoff1 + e.payoff2, 1.5);
}

TEST(ParetoTest, NoStrongDominationKeepsBoth) {
  std::vector<EquilibriumProfile> set = {
      {{1, 0}, {1, 0}, 0.5, 0.7}, {{0, 1}, {0, 1}, 0.7, 0.5}};
  EXPECT_EQ(ParetoOptimalNash(set).size(), 2u);
  EXPECT_EQ(ParetoOptimalNash({set[0]}).size(), 1u);
  EXPECT_TRUE(ParetoOptimalNash({}).empty());
}

TEST(ParetoTest, OutputIsAntichain) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const GameClass g = RandomGame(3, rng);
    const auto pone = ParetoOptimalNash(EnumerateNash({0, 1}, g));
    for (const auto& x : pone) {
      for (const auto& y : pone) {
        EXPECT_FALSE(x.payoff1 > y.payoff1 + 1e-9 &&
                     x.payoff2 > y.payoff2 + 1e-9);
      }
    }
  }
}

TEST(WorstPoneTest, CoordPrefBothSeats) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  const auto pone = ParetoOptimalNash(EnumerateNash({0, 1}, g));
  const EquilibriumProfile w2 = WorstPoneFor(Seat::kTwo, pone);
  EXPECT_TRUE(Near(w2.strategy1, {1, 0}) && Near(w2.strategy2, {1, 0}));
  EXPECT_NEAR(w2.payoff2, 0.6, 1e-9);
  const EquilibriumProfile w1 = WorstPoneFor(Seat::kOne, pone);
  EXPECT_TRUE(Near(w1.strategy1, {0, 1}) && Near(w1.strategy2, {0, 1}));
  EXPECT_NEAR(w1.payoff1, 0.6, 1e-9);
  EXPECT_THROW(WorstPoneFor(Seat::kOne, {}), NoPoneError);
}

TEST(CceTest, ProductOfMatchingPenniesNe) {
  const GameClass g = MakeMatchingPenniesGame(1);
  const auto z = JointDistribution::Product(UniformStrategy(2), UniformStrategy(2));
  const CceCheck c = IsCce(z, {0, 1}, g);
  EXPECT_TRUE(c.verdict);
  EXPECT_LE(c.max_violation, 1e-12);
}

TEST(CceTest, CorrelatedCoordination) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  const JointDistribution z(2, {0.5, 0, 0, 0.5});
  const CceCheck c = IsCce(z, {0, 1}, g);
  EXPECT_TRUE(c.verdict);
  EXPECT_NEAR(c.max_violation, 0.5 - 0.8, 1e-12);
}

TEST(CceTest, MiscoordinationPointMassFails) {
  const GameClass g = MakeCoordPrefGame(2, 0.6, 1);
  const CceCheck c = IsCce(JointDistribution::PointMass(2, 0, 1), {0, 0}, g);
  EXPECT_FALSE(c.verdict);
  EXPECT_NEAR(c.max_violation, 1.0, 1e-12);
}

TEST(CceTest, EveryNeProductIsCce) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const GameClass g = RandomGame(2 + trial % 3, rng);
    for (const auto& e : EnumerateNash({0, 1}, g)) {
      const auto z = JointDistribution::Product(e.strategy1, e.strategy2);
      EXPECT_TRUE(IsCce(z, {0, 1}, g, 1e-9).verdict);
    }
  }
}

}  // namespace
}  // namespace socint
