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

#include "aveas/calib/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "aveas/errors.hpp"

namespace aveas::calib {

namespace {

constexpr double kInitialStep = 0.05;  // relative per-axis perturbation

std::vector<double> project(std::vector<double> x,
                            const std::vector<std::array<double, 2>>& b) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], b[i][0], b[i][1]);
  }
  return x;
}

}  // namespace

CalibrationResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0,
    const std::vector<std::array<double, 2>>& bounds,
    const NelderMeadOptions& opts) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw ConfigError("nelder_mead needs at least one dimension");
  if (bounds.size() != dim) {
    throw ConfigError("bounds size does not match the dimension");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(bounds[i][0]) || !std::isfinite(bounds[i][1]) ||
        !(bounds[i][0] < bounds[i][1])) {
      throw ConfigError("bounds must be finite with lo < hi");
    }
    if (x0[i] < bounds[i][0] || x0[i] > bounds[i][1]) {
      throw ConfigError("x0 outside the bounds");
    }
  }
  if (!(opts.tol > 0.0) || opts.max_evals < 1) {
    throw ConfigError("tol must be positive and max_evals at least 1");
  }

  CalibrationResult result;
  result.best_loglik = -std::numeric_limits<double>::infinity();

  // Internally minimizes g = -f.
  const auto eval = [&](const std::vector<double>& x)
      -> std::optional<double> {
    if (result.n_evals >= opts.max_evals) return std::nullopt;
    result.n_evals++;
    const double fx = f(x);
    if (fx > result.best_loglik) {
      result.best_loglik = fx;
      result.best_params = x;
    }
    return -fx;
  };

  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
  pts.reserve(dim + 1);
  const auto try_add = [&](std::vector<double> x) {
    if (const auto g = eval(x)) {
      pts.push_back(std::move(x));
      vals.push_back(*g);
      return true;
    }
    return false;
  };

  bool budget_left = try_add(x0);
  for (std::size_t i = 0; budget_left && i < dim; ++i) {
    std::vector<double> xi = x0;
    const double step =
        x0[i] == 0.0 ? kInitialStep : kInitialStep * std::abs(x0[i]);
    xi[i] += step;
    if (xi[i] > bounds[i][1]) xi[i] = x0[i] - step;
    budget_left = try_add(project(std::move(xi), bounds));
  }

  std::vector<std::size_t> order(pts.size());
  const auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                     std::size_t b) {
      return vals[a] < vals[b];
    });
  };

  while (budget_left && pts.size() == dim + 1) {
    sort_simplex();
    result.trace.push_back(-vals[order[0]]);
    if (vals[order[dim]] - vals[order[0]] < opts.tol) {
      result.converged = true;
      break;
    }

    const std::size_t iw = order[dim];         // worst
    const std::size_t is = order[dim - 1];     // second worst
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) {
        centroid[i] += pts[order[k]][i];
      }
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const auto along = [&](double coef) {
      std::vector<double> x(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] = centroid[i] + coef * (centroid[i] - pts[iw][i]);
      }
      return project(std::move(x), bounds);
    };

    auto xr = along(1.0);
    const auto gr = eval(xr);
    if (!gr) break;

    bool shrink = false;
    if (*gr < vals[order[0]]) {
      auto xe = along(2.0);
      const auto ge = eval(xe);
      if (!ge) break;
      if (*ge < *gr) {
        pts[iw] = std::move(xe);
        vals[iw] = *ge;
      } else {
        pts[iw] = std::move(xr);
        vals[iw] = *gr;
      }
    } else if (*gr < vals[is]) {
      pts[iw] = std::move(xr);
      vals[iw] = *gr;
    } else if (*gr < vals[iw]) {
      auto xc = along(0.5);  // outside contraction
      const auto gc = eval(xc);
      if (!gc) break;
      if (*gc <= *gr) {
        pts[iw] = std::move(xc);
        vals[iw] = *gc;
      } else {
        shrink = true;
      }
    } else {
      auto xc = along(-0.5);  // inside contraction
      const auto gc = eval(xc);
      if (!gc) break;
      if (*gc < vals[iw]) {
        pts[iw] = std::move(xc);
        vals[iw] = *gc;
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      result.n_shrinks++;
      const std::size_t ib = order[0];
      for (std::size_t k = 1; k <= dim; ++k) {
        const std::size_t idx = order[k];
        for (std::size_t i = 0; i < dim; ++i) {
          pts[idx][i] = pts[ib][i] + 0.5 * (pts[idx][i] - pts[ib][i]);
        }
        const auto g = eval(pts[idx]);
        if (!g) {
          budget_left = false;
          break;
        }
        vals[idx] = *g;
      }
      if (!budget_left) break;
    }
    result.n_iterations++;
  }

  return result;
}

}  // namespace aveas::calib
