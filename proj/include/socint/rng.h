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

#ifndef SOCINT_RNG_H_
#define SOCINT_RNG_H_

// Counter-based, splittable pseudorandom numbers.
//
// Every random quantity in the library is a pure function of a 64-bit key
// and a counter, so an episode's randomness depends only on
// (master seed, episode index, stage index) and never on execution order.
// Sampling is done by hand (inverse CDF) instead of through <random>
// distributions, which are not specified bit-exactly by the standard.

#include <cstdint>
#include <span>

namespace socint {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent child key from a parent key and an index.
constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index) {
  return Mix64(Mix64(parent ^ 0x5851f42d4c957f2dULL) + kGoldenGamma * (index + 1));
}

template <typename... Rest>
constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index,
                                   Rest... rest) {
  return DeriveSeed(DeriveSeed(parent, index), static_cast<std::uint64_t>(rest)...);
}

// Uniform double in [0, 1) from 53 high bits.
constexpr double ToUnitDouble(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// A SplitMix64 stream: draw i is Mix64(key + (i+1) * gamma).  Cheap to copy;
// two streams with the same key produce the same draws.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t NextU64() {
    ++counter_;
    return Mix64(key_ + counter_ * kGoldenGamma);
  }
  constexpr double Uniform() { return ToUnitDouble(NextU64()); }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t UniformInt(std::uint64_t n) {
    // Lemire's multiply-shift; bias is < n / 2^64 and irrelevant here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(NextU64()) * n) >> 64);
  }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Inverse-CDF draw from a (normalized) probability vector given u in [0,1).
// Zero-probability entries are never returned.
inline int SampleIndex(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  // Rounding left u above the cumulative sum; fall back to the last
  // supported index.
  return last_positive;
}

}  // namespace socint

#endif  // SOCINT_RNG_H_
