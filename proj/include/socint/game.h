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

#ifndef SOCINT_GAME_H_
#define SOCINT_GAME_H_

// Repeated two-player matrix games with private types.
//
// A GameClass bundles N actions, a finite type space {0, ..., |Theta|-1},
// one payoff matrix per type and a horizon T.  Matrices are always indexed
// from the owner's point of view: row = own action, column = partner action,
// so the same matrix serves either seat.

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "socint/errors.h"

namespace socint {

inline constexpr double kPayoffTolerance = 1e-9;

enum class Seat : int { kOne = 1, kTwo = 2 };

constexpr Seat OtherSeat(Seat seat) {
  return seat == Seat::kOne ? Seat::kTwo : Seat::kOne;
}
constexpr int SeatNumber(Seat seat) { return static_cast<int>(seat); }

inline Seat SeatFromNumber(int number) {
  if (number == 1) return Seat::kOne;
  if (number == 2) return Seat::kTwo;
  throw InvalidArgument("seat must be 1 or 2, got " + std::to_string(number));
}

// One stage of play, in seat order.
struct JointAction {
  int first = 0;
  int second = 0;

  constexpr int Own(Seat seat) const {
    return seat == Seat::kOne ? first : second;
  }
  constexpr int Partner(Seat seat) const { return Own(OtherSeat(seat)); }

  friend constexpr auto operator<=>(const JointAction&,
                                    const JointAction&) = default;
};

using History = std::vector<JointAction>;

struct JointType {
  int theta1 = 0;
  int theta2 = 0;

  constexpr int Of(Seat seat) const {
    return seat == Seat::kOne ? theta1 : theta2;
  }
  friend constexpr auto operator<=>(const JointType&,
                                    const JointType&) = default;
};

// A distribution over actions.  Pure actions are the one-hot vectors.
using MixedStrategy = std::vector<double>;

inline MixedStrategy PureStrategy(int n_actions, int action) {
  MixedStrategy s(n_actions, 0.0);
  s.at(action) = 1.0;
  return s;
}

inline MixedStrategy UniformStrategy(int n_actions) {
  return MixedStrategy(n_actions, 1.0 / n_actions);
}

inline bool IsValidMixedStrategy(std::span<const double> s, int n_actions,
                                 double tol = kPayoffTolerance) {
  if (static_cast<int>(s.size()) != n_actions) return false;
  double total = 0.0;
  for (double p : s) {
    if (!std::isfinite(p) || p < 0.0) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= tol;
}

class PayoffMatrix {
 public:
  PayoffMatrix() = default;

  // Row-major entries; validated square with all entries in [0, 1].
  PayoffMatrix(int n_actions, std::vector<double> entries)
      : n_(n_actions), entries_(std::move(entries)) {
    if (n_ <= 0) throw InvalidArgument("payoff matrix needs N >= 1");
    if (static_cast<int>(entries_.size()) != n_ * n_) {
      throw InvalidArgument("payoff matrix must be N x N");
    }
    for (double v : entries_) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("payoff entries must lie in [0, 1]");
      }
    }
  }

  static PayoffMatrix FromRows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n) {
        throw InvalidArgument("payoff matrix must be square");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return PayoffMatrix(n, std::move(flat));
  }

  int n_actions() const { return n_; }
  double operator()(int own, int partner) const {
    return entries_[own * n_ + partner];
  }
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> entries_;
};

class GameClass {
 public:
  GameClass(std::string name, int n_actions, std::vector<PayoffMatrix> by_type,
            int horizon)
      : name_(std::move(name)),
        n_actions_(n_actions),
        by_type_(std::move(by_type)),
        horizon_(horizon) {
    if (n_actions_ < 1) throw InvalidArgument("N must be positive");
    if (horizon_ < 1) throw InvalidArgument("horizon must be positive");
    if (by_type_.empty()) throw InvalidArgument("type space must be non-empty");
    for (const auto& m : by_type_) {
      if (m.n_actions() != n_actions_) {
        throw InvalidArgument("payoff matrix size does not match N");
      }
    }
  }

  const std::string& name() const { return name_; }
  int n_actions() const { return n_actions_; }
  int n_types() const { return static_cast<int>(by_type_.size()); }
  int horizon() const { return horizon_; }

  const PayoffMatrix& Payoffs(int theta) const {
    if (theta < 0 || theta >= n_types()) {
      throw InvalidArgument("type " + std::to_string(theta) +
                            " outside the type space");
    }
    return by_type_[theta];
  }

  bool IsValidType(int theta) const { return theta >= 0 && theta < n_types(); }
  void CheckJointType(const JointType& joint) const {
    Payoffs(joint.theta1);
    Payoffs(joint.theta2);
  }

  // Same stage games, different number of stages.
  GameClass WithHorizon(int horizon) const {
    return GameClass(name_, n_actions_, by_type_, horizon);
  }

 private:
  std::string name_;
  int n_actions_;
  std::vector<PayoffMatrix> by_type_;
  int horizon_;
};

// sigma^T G(theta) sigma'.
inline double Payoff(std::span<const double> sigma,
                     std::span<const double> sigma_prime, int theta,
                     const GameClass& game) {
  const int n = game.n_actions();
  if (static_cast<int>(sigma.size()) != n ||
      static_cast<int>(sigma_prime.size()) != n) {
    throw InvalidArgument("strategy length does not match N");
  }
  const PayoffMatrix& g = game.Payoffs(theta);
  double value = 0.0;
  for (int a = 0; a < n; ++a) {
    if (sigma[a] == 0.0) continue;
    double row = 0.0;
    for (int b = 0; b < n; ++b) row += g(a, b) * sigma_prime[b];
    value += sigma[a] * row;
  }
  return value;
}

// The typed coordination family: every type prefers coordinating on its own
// action (payoff 1), any other coordination pays off_peak, miscoordination 0.
inline GameClass MakeCoordPrefGame(int n_actions, double off_peak,
                                   int horizon) {
  if (n_actions < 2) throw InvalidArgument("CoordPref needs N >= 2");
  if (!(off_peak > 0.0 && off_peak < 1.0)) {
    throw InvalidArgument("CoordPref needs 0 < off_peak < 1");
  }
  std::vector<PayoffMatrix> by_type;
  for (int theta = 0; theta < n_actions; ++theta) {
    std::vector<double> entries(n_actions * n_actions, 0.0);
    for (int a = 0; a < n_actions; ++a) {
      entries[a * n_actions + a] = a == theta ? 1.0 : off_peak;
    }
    by_type.emplace_back(n_actions, std::move(entries));
  }
  std::ostringstream name;
  name << "coordpref(" << n_actions << "," << off_peak << ")";
  return GameClass(name.str(), n_actions, std::move(by_type), horizon);
}

// Matching pennies as a two-type class: type 0 wants to match, type 1 wants
// to mismatch.  The classic game is the joint type (0, 1).
inline GameClass MakeMatchingPenniesGame(int horizon) {
  return GameClass("matching_pennies", 2,
                   {PayoffMatrix::FromRows({{1, 0}, {0, 1}}),
                    PayoffMatrix::FromRows({{0, 1}, {1, 0}})},
                   horizon);
}

}  // namespace socint

#endif  // SOCINT_GAME_H_
