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

#ifndef SOCINT_EXPERIMENTS_SUPPORT_H_
#define SOCINT_EXPERIMENTS_SUPPORT_H_

// Small utilities shared by the experiment runners: a deterministic parallel
// loop, summary statistics and stable number formatting.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "socint/errors.h"
#include "socint/rng.h"

namespace socint::experiments {

// Runs body(i) for i in [0, n) on up to `threads` workers.  Callers write
// into slot i of a preallocated vector, so results never depend on
// scheduling.  The first exception thrown by any body is rethrown.
inline void ParallelFor(int n, int threads,
                        const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Order statistic at rank ceil(level * n) - 1.
inline double Quantile(std::vector<double> v, double level) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto n = static_cast<long long>(v.size());
  long long rank = static_cast<long long>(std::ceil(level * n)) - 1;
  rank = std::clamp<long long>(rank, 0, n - 1);
  return v[rank];
}

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

inline constexpr int kBootstrapResamples = 2000;

// Percentile bootstrap interval of the mean.
inline Interval BootstrapMeanCi(const std::vector<double>& v, double level,
                                std::uint64_t seed,
                                int resamples = kBootstrapResamples) {
  if (v.empty()) return {};
  Rng rng(seed);
  std::vector<double> means(resamples);
  const auto n = static_cast<std::uint64_t>(v.size());
  for (int b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) s += v[rng.UniformInt(n)];
    means[b] = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  auto at = [&](double q) {
    const double pos = q * (resamples - 1);
    return means[static_cast<size_t>(std::lround(pos))];
  };
  return {at(alpha), at(1.0 - alpha)};
}

// Ten significant digits, used in every CSV cell.
inline std::string Fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace socint::experiments

#endif  // SOCINT_EXPERIMENTS_SUPPORT_H_
