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

#include "rbell/honest_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace rbell {

namespace {

constexpr double kLog2e = 1.4426950408889634;  // 1/ln(2)

double xlog2x(double p) { return p > 0.0 ? p * std::log(p) * kLog2e : 0.0; }

// Channel matrix (out x in) for detection failure with bot -> 0 merging.
Eigen::MatrixXd merge_channel(double eta) {
  Eigen::MatrixXd k(2, 2);
  k << 1.0, 1.0 - eta, 0.0, eta;
  return k;
}

// Channel matrix (3 x 2) keeping the no-detection symbol as outcome 2.
Eigen::MatrixXd keep_bot_channel(double eta) {
  Eigen::MatrixXd k(3, 2);
  k << eta, 0.0, 0.0, eta, 1.0 - eta, 1.0 - eta;
  return k;
}

Eigen::MatrixXd ideal_joint(double theta, double alice_angle, double other_angle) {
  const Eigen::Matrix4cd rho = two_qubit_state(theta);
  Eigen::MatrixXd p(2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Eigen::Matrix4cd op = Eigen::kroneckerProduct(planar_projector(alice_angle, a),
                                                          planar_projector(other_angle, b));
      double v = (rho * op).trace().real();
      if (v < 0.0 && v > -1e-12) v = 0.0;  // rounding of an exact zero
      p(a, b) = v;
    }
  }
  return p;
}

}  // namespace

HonestParams HonestParams::ideal() {
  HonestParams p;
  p.theta = std::numbers::pi / 4.0;
  p.alice_angles = {0.0, std::numbers::pi / 2.0};
  p.bob_angles = {std::numbers::pi / 4.0, -std::numbers::pi / 4.0, std::numbers::pi / 2.0, 0.0};
  p.ben_angles = {std::numbers::pi / 4.0, -std::numbers::pi / 4.0};
  return p;
}

void HonestParams::validate() const {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(eta_a) || !in01(eta_b) || !in01(eta_bhat))
    throw std::invalid_argument("honest params: detection efficiencies must lie in [0,1]");
  if (!(q >= 0.0 && q <= 0.5))
    throw std::invalid_argument("honest params: preprocessing noise must lie in [0,1/2]");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(theta)) throw std::invalid_argument("honest params: state angle must be finite");
  for (double a : alice_angles)
    if (!finite(a)) throw std::invalid_argument("honest params: Alice angle must be finite");
  for (double a : bob_angles)
    if (!finite(a)) throw std::invalid_argument("honest params: Bob angle must be finite");
  for (double a : ben_angles)
    if (!finite(a)) throw std::invalid_argument("honest params: Ben angle must be finite");
}

double ProbabilityTables::bob(int a, int b, int x, int y) const {
  return bob_branch.at({x, y})(a, b);
}

double ProbabilityTables::ben(int a, int bhat, int x, int yhat) const {
  return ben_branch.at({x, yhat})(a, bhat);
}

Eigen::Matrix4cd two_qubit_state(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("two_qubit_state: angle must be finite");
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = std::cos(theta);
  psi(3) = std::sin(theta);
  return psi * psi.adjoint();
}

Eigen::Matrix2cd planar_projector(double angle, int outcome) {
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("planar_projector: outcome must be 0 or 1");
  const double s = outcome == 0 ? 1.0 : -1.0;
  Eigen::Matrix2cd obs;
  obs << std::cos(angle), std::sin(angle), std::sin(angle), -std::cos(angle);
  return 0.5 * (Eigen::Matrix2cd::Identity() + s * obs);
}

Eigen::VectorXd detection_postprocess(const Eigen::VectorXd& ideal_dist, double eta,
                                      bool keep_bot) {
  if (ideal_dist.size() != 2)
    throw std::invalid_argument("detection_postprocess: expected a binary distribution");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("detection_postprocess: efficiency must lie in [0,1]");
  if (keep_bot) return keep_bot_channel(eta) * ideal_dist;
  return merge_channel(eta) * ideal_dist;
}

ProbabilityTables honest_statistics(const HonestParams& params, const Scenario& scenario) {
  params.validate();
  scenario.validate();
  ProbabilityTables tables;
  const Eigen::MatrixXd ka = merge_channel(params.eta_a);

  auto bob_inputs = scenario.bob_inputs;
  bob_inputs.push_back(scenario.generation_inputs.second);
  for (int x : scenario.alice_inputs) {
    for (int y : bob_inputs) {
      const Eigen::MatrixXd ideal = ideal_joint(params.theta, params.alice_angles.at(x),
                                                params.bob_angles.at(y));
      const bool keep = scenario.bob_outcomes.at(y).has_bot;
      const Eigen::MatrixXd kb =
          keep ? keep_bot_channel(params.eta_b) : merge_channel(params.eta_b);
      tables.bob_branch[{x, y}] = ka * ideal * kb.transpose();
    }
  }
  for (int x : scenario.alice_inputs) {
    for (int y : scenario.ben_inputs) {
      const Eigen::MatrixXd ideal = ideal_joint(params.theta, params.alice_angles.at(x),
                                                params.ben_angles.at(y));
      tables.ben_branch[{x, y}] = ka * ideal * merge_channel(params.eta_bhat).transpose();
    }
  }
  return tables;
}

double honest_conditional_entropy(const HonestParams& params, const Scenario& scenario) {
  params.validate();
  const ProbabilityTables tables = honest_statistics(params, scenario);
  const Eigen::MatrixXd joint = tables.bob_branch.at(scenario.generation_inputs);

  // Noisy preprocessing: flip Alice's merged key bit with probability q.
  Eigen::MatrixXd flipped = (1.0 - params.q) * joint;
  flipped.row(0) += params.q * joint.row(1);
  flipped.row(1) += params.q * joint.row(0);

  double h_joint = 0.0;
  for (Eigen::Index a = 0; a < flipped.rows(); ++a)
    for (Eigen::Index b = 0; b < flipped.cols(); ++b) h_joint -= xlog2x(flipped(a, b));
  double h_bobside = 0.0;
  for (Eigen::Index b = 0; b < flipped.cols(); ++b) h_bobside -= xlog2x(flipped.col(b).sum());
  return h_joint - h_bobside;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must lie in [0,1]");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double closed_form_bound(double phi_ph, double phi_chsh) {
  if (!(phi_ph >= 0.0 && phi_ph <= 1.0))
    throw std::invalid_argument("closed_form_bound: phi_ph must lie in [0,1]");
  const double beta = 8.0 * phi_chsh - 4.0;
  double radicand = 8.0 - beta * beta;
  // The radicand vanishes at the quantum maximum; floating-point inputs a
  // few ulps away from it must still evaluate the boundary case exactly.
  constexpr double kRadicandSnap = 1e-12;
  if (radicand < -kRadicandSnap)
    throw std::invalid_argument("closed_form_bound: correlator CHSH value exceeds 2*sqrt(2)");
  if (radicand < kRadicandSnap) radicand = 0.0;
  const double log_arg = 0.5 + beta / 8.0 * std::sqrt(radicand);
  return -std::log2(log_arg) - binary_entropy(phi_ph);
}

double keyrate(double h, double honest_entropy) {
  if (!std::isfinite(h) || !std::isfinite(honest_entropy))
    throw std::invalid_argument("keyrate: inputs must be finite");
  return h - honest_entropy;
}

}  // namespace rbell
