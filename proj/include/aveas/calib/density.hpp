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

#ifndef AVEAS_CALIB_DENSITY_HPP_
#define AVEAS_CALIB_DENSITY_HPP_

#include <vector>

namespace aveas::calib {

// Density floor applied per evaluated point; keeps log-likelihoods finite
// when a recorded value falls outside the simulated support.
inline constexpr double kDensityFloor = 1e-12;

// Lower bound on the kernel bandwidth; covers degenerate samples whose
// spread is zero (e.g. a single point).
inline constexpr double kBandwidthFloor = 1e-6;

// Robust rule-of-thumb bandwidth 0.9 * min(sd, IQR / 1.34) * n^(-1/5),
// falling back to the non-zero spread estimate when one degenerates,
// floored at kBandwidthFloor.
double silverman_bandwidth(const std::vector<double>& sample);

// Gaussian kernel density estimate of `sample` with bandwidth h, evaluated
// at x. No floor applied here.
double kde_density(const std::vector<double>& sample, double h, double x);

// Sum over recorded values of log p_hat, where p_hat is the Gaussian KDE
// fit to the simulated sample (Silverman bandwidth) floored at
// kDensityFloor. Throws EmptySampleError when either sample is empty.
double log_likelihood(const std::vector<double>& recorded,
                      const std::vector<double>& simulated);

// Parametric alternative: p_hat is the moment-fitted Gaussian, its standard
// deviation floored at kBandwidthFloor. Same floor and error contract.
double log_likelihood_gaussian(const std::vector<double>& recorded,
                               const std::vector<double>& simulated);

}  // namespace aveas::calib

#endif  // AVEAS_CALIB_DENSITY_HPP_
