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

#ifndef SOCINT_EQUILIBRIUM_H_
#define SOCINT_EQUILIBRIUM_H_

// Exact analysis of the bimatrix stage game G(theta1, theta2): Nash
// equilibria by support enumeration, Pareto filtering, worst-PONE selection,
// best responses and coarse correlated equilibrium membership.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "socint/errors.h"
#include "socint/game.h"

namespace socint {

inline constexpr int kMaxSupportEnumerationActions = 5;
inline constexpr double kStrongDominationMargin = 1e-9;
inline constexpr double kEquilibriumDedupDistance = 1e-6;

struct EquilibriumProfile {
  MixedStrategy strategy1;
  MixedStrategy strategy2;
  double payoff1 = 0.0;
  double payoff2 = 0.0;

  const MixedStrategy& StrategyOf(Seat seat) const {
    return seat == Seat::kOne ? strategy1 : strategy2;
  }
  double PayoffOf(Seat seat) const {
    return seat == Seat::kOne ? payoff1 : payoff2;
  }
};

inline EquilibriumProfile MakeProfile(MixedStrategy s1, MixedStrategy s2,
                                      const JointType& joint,
                                      const GameClass& game) {
  const double p1 = Payoff(s1, s2, joint.theta1, game);
  const double p2 = Payoff(s2, s1, joint.theta2, game);
  return {std::move(s1), std::move(s2), p1, p2};
}

struct BestResponse {
  int action = 0;
  double value = 0.0;
};

// Best pure reply of a `role` agent of type `theta` to the opponent's mixed
// strategy.  Ties go to the lowest action index.  Matrices are owner-indexed,
// so the role only matters for bookkeeping.
inline BestResponse BestResponseTo(std::span<const double> opponent_strategy,
                                   int theta, Seat /*role*/,
                                   const GameClass& game) {
  const int n = game.n_actions();
  if (static_cast<int>(opponent_strategy.size()) != n) {
    throw InvalidArgument("opponent strategy length does not match N");
  }
  const PayoffMatrix& g = game.Payoffs(theta);
  BestResponse best{0, -1.0};
  for (int a = 0; a < n; ++a) {
    double value = 0.0;
    for (int b = 0; b < n; ++b) value += g(a, b) * opponent_strategy[b];
    if (value > best.value + kPayoffTolerance) best = {a, value};
  }
  return best;
}

struct NashEnumeration {
  std::vector<EquilibriumProfile> profiles;
  // Support pairs whose indifference system was singular.
  int degenerate_supports_skipped = 0;
};

namespace internal {

// Largest gain any single agent obtains from a pure deviation.
inline double NashGap(const EquilibriumProfile& e, const JointType& joint,
                      const GameClass& game) {
  const double br1 =
      BestResponseTo(e.strategy2, joint.theta1, Seat::kOne, game).value;
  const double br2 =
      BestResponseTo(e.strategy1, joint.theta2, Seat::kTwo, game).value;
  return std::max(br1 - e.payoff1, br2 - e.payoff2);
}

inline double LInfDistance(const EquilibriumProfile& x,
                           const EquilibriumProfile& y) {
  double d = 0.0;
  for (size_t i = 0; i < x.strategy1.size(); ++i) {
    d = std::max(d, std::abs(x.strategy1[i] - y.strategy1[i]));
    d = std::max(d, std::abs(x.strategy2[i] - y.strategy2[i]));
  }
  return d;
}

inline std::vector<int> SupportFromMask(unsigned mask, int n) {
  std::vector<int> support;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) support.push_back(i);
  }
  return support;
}

// Finds y over `cols` making every row in `rows` indifferent against y under
// `payoff(row, col)`.  Returns false when the system is singular.
template <typename PayoffFn>
bool SolveIndifference(const std::vector<int>& rows,
                       const std::vector<int>& cols, PayoffFn payoff, int n,
                       std::vector<double>& mix) {
  const int k = static_cast<int>(rows.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) system(r, c) = payoff(rows[r], cols[c]);
    system(r, k) = -1.0;
  }
  for (int c = 0; c < k; ++c) system(k, c) = 1.0;
  rhs(k) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-12);
  if (lu.rank() < k + 1) return false;
  const Eigen::VectorXd solution = lu.solve(rhs);
  mix.assign(n, 0.0);
  for (int c = 0; c < k; ++c) mix[cols[c]] = solution(c);
  return true;
}

// Clamps tiny negative round-off to zero and renormalizes.  Returns false for
// a genuinely negative entry.
inline bool CleanMix(std::vector<double>& mix, double tol) {
  double total = 0.0;
  for (double& p : mix) {
    if (p < -tol) return false;
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (total <= 0.0) return false;
  for (double& p : mix) p /= total;
  return true;
}

}  // namespace internal

// All Nash equilibria found by enumerating equal-size support pairs of the
// stage game G(theta1, theta2).  Supports whose indifference system is
// singular (degenerate games) are skipped and counted.
inline NashEnumeration EnumerateNashWithStats(const JointType& joint,
                                              const GameClass& game,
                                              double tol = 1e-9) {
  const int n = game.n_actions();
  if (n > kMaxSupportEnumerationActions) {
    throw UnsupportedSize("support enumeration is limited to N <= " +
                          std::to_string(kMaxSupportEnumerationActions) +
                          ", got N = " + std::to_string(n));
  }
  game.CheckJointType(joint);
  const PayoffMatrix& g1 = game.Payoffs(joint.theta1);
  const PayoffMatrix& g2 = game.Payoffs(joint.theta2);
  // Agent 1 payoff at (row a, column b) is g1(a, b); agent 2's is g2(b, a).
  auto row_payoff = [&](int a, int b) { return g1(a, b); };
  auto col_payoff = [&](int b, int a) { return g2(b, a); };

  NashEnumeration result;
  std::vector<double> p, q;
  for (int k = 1; k <= n; ++k) {
    for (unsigned rmask = 1; rmask < (1u << n); ++rmask) {
      if (std::popcount(rmask) != k) continue;
      const std::vector<int> rows = internal::SupportFromMask(rmask, n);
      for (unsigned cmask = 1; cmask < (1u << n); ++cmask) {
        if (std::popcount(cmask) != k) continue;
        const std::vector<int> cols = internal::SupportFromMask(cmask, n);
        // q makes agent 1 indifferent over `rows`; p does the same for
        // agent 2 over `cols`.
        const bool q_ok =
            internal::SolveIndifference(rows, cols, row_payoff, n, q);
        const bool p_ok =
            internal::SolveIndifference(cols, rows, col_payoff, n, p);
        if (!q_ok || !p_ok) {
          ++result.degenerate_supports_skipped;
          continue;
        }
        if (!internal::CleanMix(p, tol) || !internal::CleanMix(q, tol)) {
          continue;
        }
        EquilibriumProfile candidate = MakeProfile(p, q, joint, game);
        if (internal::NashGap(candidate, joint, game) > tol) continue;
        const bool duplicate = std::any_of(
            result.profiles.begin(), result.profiles.end(),
            [&](const EquilibriumProfile& e) {
              return internal::LInfDistance(e, candidate) <=
                     kEquilibriumDedupDistance;
            });
        if (!duplicate) result.profiles.push_back(std::move(candidate));
      }
    }
  }
  return result;
}

inline std::vector<EquilibriumProfile> EnumerateNash(const JointType& joint,
                                                     const GameClass& game,
                                                     double tol = 1e-9) {
  return EnumerateNashWithStats(joint, game, tol).profiles;
}

// Drops every profile strongly Pareto-dominated (both payoffs strictly higher
// by more than the margin) by another member of the set.
inline std::vector<EquilibriumProfile> ParetoOptimalNash(
    const std::vector<EquilibriumProfile>& ne_set) {
  std::vector<EquilibriumProfile> kept;
  for (const EquilibriumProfile& e : ne_set) {
    const bool dominated =
        std::any_of(ne_set.begin(), ne_set.end(), [&](const auto& other) {
          return other.payoff1 > e.payoff1 + kStrongDominationMargin &&
                 other.payoff2 > e.payoff2 + kStrongDominationMargin;
        });
    if (!dominated) kept.push_back(e);
  }
  return kept;
}

// The PONE paying the partner seat the least.  Ties: lower payoff of the
// other seat first, then lexicographically smaller strategy vectors.
inline EquilibriumProfile WorstPoneFor(
    Seat partner_role, const std::vector<EquilibriumProfile>& pone_set) {
  if (pone_set.empty()) {
    throw NoPoneError("empty PONE set: degenerate game instance");
  }
  const Seat other = OtherSeat(partner_role);
  auto less = [&](const EquilibriumProfile& x, const EquilibriumProfile& y) {
    const double dp = x.PayoffOf(partner_role) - y.PayoffOf(partner_role);
    if (std::abs(dp) > kPayoffTolerance) return dp < 0;
    const double dq = x.PayoffOf(other) - y.PayoffOf(other);
    if (std::abs(dq) > kPayoffTolerance) return dq < 0;
    if (x.strategy1 != y.strategy1) return x.strategy1 < y.strategy1;
    return x.strategy2 < y.strategy2;
  };
  return *std::min_element(pone_set.begin(), pone_set.end(), less);
}

// A distribution over joint actions, row = agent 1 action.
class JointDistribution {
 public:
  JointDistribution(int n_actions, std::vector<double> weights)
      : n_(n_actions), weights_(std::move(weights)) {
    if (static_cast<int>(weights_.size()) != n_ * n_) {
      throw InvalidArgument("joint distribution must have N*N weights");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) {
        throw InvalidArgument("joint distribution weights must be >= 0");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > kPayoffTolerance) {
      throw InvalidArgument("joint distribution weights must sum to 1");
    }
  }

  static JointDistribution Product(std::span<const double> s1,
                                   std::span<const double> s2) {
    const int n = static_cast<int>(s1.size());
    std::vector<double> w(n * n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) w[a * n + b] = s1[a] * s2[b];
    }
    return JointDistribution(n, std::move(w));
  }

  static JointDistribution PointMass(int n_actions, int a1, int a2) {
    std::vector<double> w(n_actions * n_actions, 0.0);
    w.at(a1 * n_actions + a2) = 1.0;
    return JointDistribution(n_actions, std::move(w));
  }

  int n_actions() const { return n_; }
  double operator()(int a1, int a2) const { return weights_[a1 * n_ + a2]; }
  const std::vector<double>& weights() const { return weights_; }

  // Marginal of the given seat.
  MixedStrategy Marginal(Seat seat) const {
    MixedStrategy m(n_, 0.0);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        m[seat == Seat::kOne ? a : b] += (*this)(a, b);
      }
    }
    return m;
  }

 private:
  int n_;
  std::vector<double> weights_;
};

struct CceCheck {
  bool verdict = false;
  // Largest gain from committing to a fixed action instead of following z;
  // negative when every deviation strictly loses.
  double max_violation = 0.0;
};

inline CceCheck IsCce(const JointDistribution& z, const JointType& joint,
                      const GameClass& game, double tol = 1e-9) {
  const int n = game.n_actions();
  if (z.n_actions() != n) throw InvalidArgument("z size does not match N");
  const PayoffMatrix& g1 = game.Payoffs(joint.theta1);
  const PayoffMatrix& g2 = game.Payoffs(joint.theta2);
  double u1 = 0.0, u2 = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      u1 += z(a, b) * g1(a, b);
      u2 += z(a, b) * g2(b, a);
    }
  }
  const MixedStrategy m1 = z.Marginal(Seat::kOne);
  const MixedStrategy m2 = z.Marginal(Seat::kTwo);
  double worst = -std::numeric_limits<double>::infinity();
  for (int dev = 0; dev < n; ++dev) {
    double d1 = 0.0, d2 = 0.0;
    for (int x = 0; x < n; ++x) {
      d1 += m2[x] * g1(dev, x);
      d2 += m1[x] * g2(dev, x);
    }
    worst = std::max({worst, d1 - u1, d2 - u2});
  }
  return {worst <= tol, worst};
}

}  // namespace socint

#endif  // SOCINT_EQUILIBRIUM_H_
