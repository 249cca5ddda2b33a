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

#ifndef AVEAS_CALIB_NELDER_MEAD_HPP_
#define AVEAS_CALIB_NELDER_MEAD_HPP_

#include <array>
#include <functional>
#include <vector>

namespace aveas::calib {

struct NelderMeadOptions {
  double tol = 1e-3;    // convergence: simplex value spread below this
  int max_evals = 400;  // budget; exceeding it returns best-so-far
};

struct CalibrationResult {
  std::vector<double> best_params;
  double best_loglik = 0.0;
  int n_evals = 0;
  bool converged = false;
  std::vector<double> trace;  // best simplex value at each iteration
  int n_iterations = 0;
  int n_shrinks = 0;

  bool operator==(const CalibrationResult&) const = default;
};

// Maximizes f over the box `bounds` with the Nelder-Mead simplex method
// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). The initial
// simplex perturbs x0 by 5% per axis (0.05 absolute for zero entries);
// every evaluated point is projected into the bounds first. Throws
// ConfigError for empty/mismatched inputs or x0 outside the bounds.
CalibrationResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0,
    const std::vector<std::array<double, 2>>& bounds,
    const NelderMeadOptions& opts = {});

}  // namespace aveas::calib

#endif  // AVEAS_CALIB_NELDER_MEAD_HPP_
