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

#ifndef RBELL_HONEST_MODEL_HPP
#define RBELL_HONEST_MODEL_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <utility>

#include "rbell/scenario.hpp"

namespace rbell {

/// Honest two-qubit implementation: a partially entangled state
/// cos(theta)|00> + sin(theta)|11>, X-Z-plane projective measurements,
/// independent per-party detection efficiencies, and the key-bit flip
/// probability q of noisy preprocessing.
struct HonestParams {
  double theta = 0.0;
  std::array<double, 2> alice_angles{0.0, 0.0};
  std::array<double, 4> bob_angles{0.0, 0.0, 0.0, 0.0};  // indexed by y = 0..3
  std::array<double, 2> ben_angles{0.0, 0.0};
  double eta_a = 1.0;
  double eta_b = 1.0;
  double eta_bhat = 1.0;
  double q = 0.0;

  /// Maximally entangled state with CHSH-optimal angles: Alice {0, pi/2},
  /// Ben {pi/4, -pi/4}, Bob test angles {pi/4, -pi/4, pi/2} and the
  /// generation angle aligned with Alice's key measurement.
  static HonestParams ideal();

  void validate() const;  // efficiencies in [0,1], q in [0,1/2], angles finite
};

/// Joint outcome tables per input pair. Rows index Alice's outcome
/// {0,1}; columns index the other party's outcome, with the no-detection
/// symbol stored as the last column where it is kept.
struct ProbabilityTables {
  std::map<std::pair<int, int>, Eigen::MatrixXd> bob_branch;  // keyed by (x, y)
  std::map<std::pair<int, int>, Eigen::MatrixXd> ben_branch;  // keyed by (x, yhat)

  double bob(int a, int b, int x, int y) const;
  double ben(int a, int bhat, int x, int yhat) const;
  bool has_bob(int x, int y) const { return bob_branch.count({x, y}) > 0; }
  bool has_ben(int x, int yhat) const { return ben_branch.count({x, yhat}) > 0; }
};

/// Projector onto cos(theta)|00> + sin(theta)|11>.
Eigen::Matrix4cd two_qubit_state(double theta);

/// Rank-1 projector of the +-1 eigenvector of cos(a) Z + sin(a) X;
/// outcome 0 picks the +1 eigenvector.
Eigen::Matrix2cd planar_projector(double angle, int outcome);

/// Detection postprocessing of a single-party outcome distribution over
/// {0,1}: the outcome is replaced by the no-detection symbol with
/// probability 1-eta, which is then merged into outcome 0 unless
/// keep_bot is set (in which case the result has a third entry).
Eigen::VectorXd detection_postprocess(const Eigen::VectorXd& ideal_dist, double eta,
                                      bool keep_bot);

/// Honest statistics for every test input pair on both branches plus
/// Bob's generation input (where the no-detection symbol is kept).
ProbabilityTables honest_statistics(const HonestParams& params, const Scenario& scenario);

/// Shannon conditional entropy (bits) of Alice's preprocessed generation
/// outcome given Bob's generation outcome in {0,1,bot}. The input
/// registers are deterministic in generation rounds, so no further
/// conditioning applies.
double honest_conditional_entropy(const HonestParams& params, const Scenario& scenario);

/// Binary entropy in bits; p outside [0,1] is rejected.
double binary_entropy(double p);

/// Closed-form lower bound -log2(1/2 + beta/8 sqrt(8 - beta^2)) - h(phi_ph)
/// with beta = 8 phi_chsh - 4. Rejects beta^2 > 8. Not clamped at zero.
double closed_form_bound(double phi_ph, double phi_chsh);

/// Devetak-Winter asymptotic rate: certified entropy minus the honest
/// conditional entropy. May be negative.
double keyrate(double h, double honest_entropy);

}  // namespace rbell

#endif  // RBELL_HONEST_MODEL_HPP
