// Copyright 2026 The aveas-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aveas/calib/density.hpp"

#include <algorithm>
#include <cmath>

#include "aveas/errors.hpp"

namespace aveas::calib {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

struct Moments {
  double mean;
  double sd;  // n-1 denominator; 0 for a single point
};

Moments moments(const std::vector<double>& sample) {
  const auto n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (const double x : sample) mean += x;
  mean /= n;
  if (sample.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : sample) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

// Linearly interpolated sample quantile over a sorted copy.
double quantile(std::vector<double> sorted, double p) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double silverman_bandwidth(const std::vector<double>& sample) {
  if (sample.empty()) throw EmptySampleError("bandwidth of an empty sample");
  // Silverman's rule of thumb: the robust spread estimate keeps the
  // bandwidth honest on multimodal samples, where the raw standard
  // deviation would oversmooth.
  const auto n = static_cast<double>(sample.size());
  const double sd = moments(sample).sd;
  const double iqr = quantile(sample, 0.75) - quantile(sample, 0.25);
  double scale = std::min(sd, iqr / 1.34);
  if (scale <= 0.0) scale = std::max(sd, iqr / 1.34);
  const double h = 0.9 * scale * std::pow(n, -0.2);
  return std::max(h, kBandwidthFloor);
}

double kde_density(const std::vector<double>& sample, double h, double x) {
  double acc = 0.0;
  for (const double t : sample) {
    const double z = (x - t) / h;
    acc += std::exp(-0.5 * z * z);
  }
  return acc * kInvSqrt2Pi / (static_cast<double>(sample.size()) * h);
}

double log_likelihood(const std::vector<double>& recorded,
                      const std::vector<double>& simulated) {
  if (recorded.empty()) throw EmptySampleError("recorded sample is empty");
  if (simulated.empty()) throw EmptySampleError("simulated sample is empty");
  const double h = silverman_bandwidth(simulated);
  double ll = 0.0;
  for (const double x : recorded) {
    ll += std::log(std::max(kde_density(simulated, h, x), kDensityFloor));
  }
  return ll;
}

double log_likelihood_gaussian(const std::vector<double>& recorded,
                               const std::vector<double>& simulated) {
  if (recorded.empty()) throw EmptySampleError("recorded sample is empty");
  if (simulated.empty()) throw EmptySampleError("simulated sample is empty");
  const Moments m = moments(simulated);
  const double sd = std::max(m.sd, kBandwidthFloor);
  double ll = 0.0;
  for (const double x : recorded) {
    const double z = (x - m.mean) / sd;
    const double p = kInvSqrt2Pi / sd * std::exp(-0.5 * z * z);
    ll += std::log(std::max(p, kDensityFloor));
  }
  return ll;
}

}  // namespace aveas::calib
