// Copyright 2026 The rbell Authors
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

#include "rbell/nelder_mead.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace rbell {

namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper,
                                      const NelderMeadOptions& options) {
  const Eigen::Index dim = x0.size();
  if (lower.size() != dim || upper.size() != dim)
    throw std::invalid_argument("nelder_mead: bound dimension mismatch");

  NelderMeadResult best;
  best.x = clip(x0, lower, upper);
  best.value = f(best.x);
  best.evaluations = 1;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Eigen::VectorXd range = upper - lower;

  auto evaluate = [&](const Eigen::VectorXd& x) {
    ++best.evaluations;
    return f(clip(x, lower, upper));
  };

  for (int run = 0; run <= options.restarts; ++run) {
    if (best.evaluations >= options.max_evals) break;

    Eigen::VectorXd start = best.x;
    if (run > 0) {
      for (Eigen::Index i = 0; i < dim; ++i)
        start(i) += 0.5 * options.initial_step * range(i) * unit(rng);
      start = clip(start, lower, upper);
    }

    // Initial simplex along the coordinate axes.
    std::vector<Eigen::VectorXd> pts(dim + 1, start);
    std::vector<double> vals(dim + 1);
    vals[0] = evaluate(pts[0]);
    for (Eigen::Index i = 0; i < dim; ++i) {
      double step = options.initial_step * (range(i) > 0 ? range(i) : 1.0);
      if (pts[i + 1](i) + step > upper(i)) step = -step;
      pts[i + 1](i) += step;
      pts[i + 1] = clip(pts[i + 1], lower, upper);
      vals[i + 1] = evaluate(pts[i + 1]);
    }

    while (best.evaluations < options.max_evals) {
      // Order the simplex.
      std::vector<int> idx(dim + 1);
      for (int i = 0; i <= dim; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
      std::vector<Eigen::VectorXd> spts(dim + 1);
      std::vector<double> svals(dim + 1);
      for (int i = 0; i <= dim; ++i) {
        spts[i] = pts[idx[i]];
        svals[i] = vals[idx[i]];
      }
      pts = spts;
      vals = svals;

      if (vals[dim] - vals[0] < options.tol) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < dim; ++i) centroid += pts[i];
      centroid /= static_cast<double>(dim);

      const Eigen::VectorXd reflected = centroid + (centroid - pts[dim]);
      const double fr = evaluate(reflected);
      if (fr < vals[0]) {
        const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[dim]);
        const double fe = evaluate(expanded);
        if (fe < fr) {
          pts[dim] = clip(expanded, lower, upper);
          vals[dim] = fe;
        } else {
          pts[dim] = clip(reflected, lower, upper);
          vals[dim] = fr;
        }
      } else if (fr < vals[dim - 1]) {
        pts[dim] = clip(reflected, lower, upper);
        vals[dim] = fr;
      } else {
        const Eigen::VectorXd contracted = centroid + 0.5 * (pts[dim] - centroid);
        const double fc = evaluate(contracted);
        if (fc < vals[dim]) {
          pts[dim] = clip(contracted, lower, upper);
          vals[dim] = fc;
        } else {
          for (int i = 1; i <= dim; ++i) {
            pts[i] = clip(pts[0] + 0.5 * (pts[i] - pts[0]), lower, upper);
            vals[i] = evaluate(pts[i]);
          }
        }
      }
      if (best.evaluations >= options.max_evals) break;
    }

    for (int i = 0; i <= dim; ++i) {
      if (vals[i] < best.value) {
        best.value = vals[i];
        best.x = pts[i];
      }
    }
  }
  return best;
}

}  // namespace rbell
