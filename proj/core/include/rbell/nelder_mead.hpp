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

#ifndef RBELL_NELDER_MEAD_HPP
#define RBELL_NELDER_MEAD_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace rbell {

struct NelderMeadOptions {
  int max_evals = 200;      // budget across all restarts
  int restarts = 0;         // random restarts around the best point
  double initial_step = 0.3;
  double tol = 1e-9;        // simplex value spread at which a run stops
  std::uint64_t seed = 1;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free simplex minimization with box projection and seeded
/// random restarts. Deterministic for a fixed seed.
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                                      const Eigen::VectorXd& upper,
                                      const NelderMeadOptions& options = {});

}  // namespace rbell

#endif  // RBELL_NELDER_MEAD_HPP
