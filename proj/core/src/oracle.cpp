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

#include "rbell/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace rbell {

namespace {

constexpr double kTol = 1e-10;
constexpr double kEigCutoff = 1e-12;  // eigenvalues below this contribute no entropy

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double p = eig.eigenvalues()(i);
    if (p > kEigCutoff) h -= p * std::log2(p);
  }
  return h;
}

// Trace out the first two factors of A x B x E.
Eigen::MatrixXcd trace_out_front(const Eigen::MatrixXcd& rho, int da, int db, int de) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(de, de);
  for (int ia = 0; ia < da; ++ia) {
    for (int ib = 0; ib < db; ++ib) {
      const int base = (ia * db + ib) * de;
      out += rho.block(base, base, de, de);
    }
  }
  return out;
}

void check_povm(const std::vector<std::vector<Eigen::MatrixXcd>>& povm, int dim,
                const char* who) {
  if (povm.empty()) throw std::invalid_argument(std::string(who) + " POVM list is empty");
  for (std::size_t x = 0; x < povm.size(); ++x) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& el : povm[x]) {
      if (el.rows() != dim || el.cols() != dim)
        throw std::invalid_argument(std::string(who) + " POVM element has wrong dimension");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(el);
      if (eig.eigenvalues().minCoeff() < -kTol)
        throw std::invalid_argument(std::string(who) + " POVM element is not positive");
      sum += el;
    }
    if ((sum - Eigen::MatrixXcd::Identity(dim, dim)).norm() > kTol)
      throw std::invalid_argument(std::string(who) + " POVM for input " + std::to_string(x) +
                                  " does not sum to identity");
  }
}

}  // namespace

void ExplicitStrategy::validate() const {
  const int d = dim_a * dim_bnear * dim_e;
  if (sigma.rows() != d || sigma.cols() != d)
    throw std::invalid_argument("strategy state has wrong dimension");
  if ((sigma - sigma.adjoint()).norm() > kTol)
    throw std::invalid_argument("strategy state is not Hermitian");
  if (std::abs(sigma.trace().real() - 1.0) > kTol || std::abs(sigma.trace().imag()) > kTol)
    throw std::invalid_argument("strategy state does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sigma);
  if (eig.eigenvalues().minCoeff() < -kTol)
    throw std::invalid_argument("strategy state is not positive semidefinite");

  const int din = dim_bnear * dim_e;
  const int dout = dim_bfar * dim_e;
  if (attack.rows() != dout || attack.cols() != din)
    throw std::invalid_argument("attack isometry has wrong shape");
  if ((attack.adjoint() * attack - Eigen::MatrixXcd::Identity(din, din)).norm() > kTol)
    throw std::invalid_argument("attack is not an isometry");

  check_povm(alice_povm, dim_a, "Alice");
  check_povm(bob_povm, dim_bfar, "Bob");
  check_povm(ben_povm, dim_bnear, "Ben");
}

Eigen::MatrixXcd ExplicitStrategy::post_attack_state() const {
  const Eigen::MatrixXcd lifted =
      Eigen::kroneckerProduct(Eigen::MatrixXcd::Identity(dim_a, dim_a), attack);
  return lifted * sigma * lifted.adjoint();
}

ProbabilityTables strategy_statistics(const ExplicitStrategy& strategy, const Scenario& scenario) {
  strategy.validate();
  scenario.validate();
  ProbabilityTables tables;
  const Eigen::MatrixXcd rho = strategy.post_attack_state();
  const Eigen::MatrixXcd eye_e = Eigen::MatrixXcd::Identity(strategy.dim_e, strategy.dim_e);

  for (int x : scenario.alice_inputs) {
    for (int y : scenario.bob_inputs) {
      const auto& as = strategy.alice_povm.at(x);
      const auto& bs = strategy.bob_povm.at(y);
      Eigen::MatrixXd p(as.size(), bs.size());
      for (std::size_t a = 0; a < as.size(); ++a)
        for (std::size_t b = 0; b < bs.size(); ++b) {
          const Eigen::MatrixXcd op =
              Eigen::kroneckerProduct(as[a], Eigen::kroneckerProduct(bs[b], eye_e).eval());
          p(a, b) = (rho * op).trace().real();
        }
      tables.bob_branch[{x, y}] = p;
    }
    for (int y : scenario.ben_inputs) {
      const auto& as = strategy.alice_povm.at(x);
      const auto& bs = strategy.ben_povm.at(y);
      Eigen::MatrixXd p(as.size(), bs.size());
      for (std::size_t a = 0; a < as.size(); ++a)
        for (std::size_t b = 0; b < bs.size(); ++b) {
          const Eigen::MatrixXcd op =
              Eigen::kroneckerProduct(as[a], Eigen::kroneckerProduct(bs[b], eye_e).eval());
          p(a, b) = (strategy.sigma * op).trace().real();
        }
      tables.ben_branch[{x, y}] = p;
    }
  }
  return tables;
}

double strategy_entropy(const ExplicitStrategy& strategy, const Scenario& scenario, double q) {
  strategy.validate();
  if (!(q >= 0.0 && q <= 0.5))
    throw std::invalid_argument("strategy_entropy: q must lie in [0,1/2]");
  const int key_input = scenario.generation_inputs.first;
  const Eigen::MatrixXcd rho = strategy.post_attack_state();
  const auto& key_povm = strategy.alice_povm.at(key_input);
  if (key_povm.size() != 2)
    throw std::invalid_argument("strategy_entropy: key measurement must be binary");

  const Eigen::MatrixXcd eye_rest = Eigen::MatrixXcd::Identity(
      strategy.dim_bfar * strategy.dim_e, strategy.dim_bfar * strategy.dim_e);
  std::vector<Eigen::MatrixXcd> eve_blocks(2);
  for (int a = 0; a < 2; ++a) {
    const Eigen::MatrixXcd op = Eigen::kroneckerProduct(key_povm[a], eye_rest);
    eve_blocks[a] =
        trace_out_front(Eigen::MatrixXcd(op * rho), strategy.dim_a, strategy.dim_bfar,
                        strategy.dim_e);
  }
  std::vector<Eigen::MatrixXcd> flipped(2);
  flipped[0] = (1.0 - q) * eve_blocks[0] + q * eve_blocks[1];
  flipped[1] = (1.0 - q) * eve_blocks[1] + q * eve_blocks[0];

  // H(hat A | E) = H(cq state) - H(E); the cq state is block diagonal.
  const Eigen::MatrixXcd eve = flipped[0] + flipped[1];
  Eigen::MatrixXcd cq = Eigen::MatrixXcd::Zero(2 * strategy.dim_e, 2 * strategy.dim_e);
  cq.topLeftCorner(strategy.dim_e, strategy.dim_e) = flipped[0];
  cq.bottomRightCorner(strategy.dim_e, strategy.dim_e) = flipped[1];
  return von_neumann_entropy(cq) - von_neumann_entropy(eve);
}

ExplicitStrategy honest_strategy(const HonestParams& params) {
  params.validate();
  ExplicitStrategy s;
  s.dim_a = 2;
  s.dim_bnear = 2;
  s.dim_bfar = 2;
  s.dim_e = 1;
  s.sigma = two_qubit_state(params.theta);
  s.attack = Eigen::MatrixXcd::Identity(2, 2);
  for (double ax : params.alice_angles)
    s.alice_povm.push_back({planar_projector(ax, 0), planar_projector(ax, 1)});
  for (double by : params.bob_angles)
    s.bob_povm.push_back({planar_projector(by, 0), planar_projector(by, 1)});
  for (double bh : params.ben_angles)
    s.ben_povm.push_back({planar_projector(bh, 0), planar_projector(bh, 1)});
  return s;
}

namespace {

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd qmat = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const std::complex<double> d = r(i, i);
    qmat.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : 1.0;
  }
  return qmat;
}

std::vector<Eigen::MatrixXcd> random_projective_pair(std::mt19937_64& rng) {
  const Eigen::MatrixXcd u = haar_unitary(2, rng);
  const Eigen::Vector2cd v0 = u.col(0);
  const Eigen::Vector2cd v1 = u.col(1);
  return {v0 * v0.adjoint(), v1 * v1.adjoint()};
}

}  // namespace

ExplicitStrategy random_strategy(const Scenario& scenario, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ExplicitStrategy s;
  s.dim_a = s.dim_bnear = s.dim_bfar = s.dim_e = 2;
  const int d = s.dim_a * s.dim_bnear * s.dim_e;
  Eigen::VectorXcd psi(d);
  for (int i = 0; i < d; ++i) psi(i) = std::complex<double>(normal(rng), normal(rng));
  psi.normalize();
  s.sigma = psi * psi.adjoint();
  s.attack = haar_unitary(s.dim_bnear * s.dim_e, rng);

  const int max_alice =
      1 + *std::max_element(scenario.alice_inputs.begin(), scenario.alice_inputs.end());
  const int max_bob = 1 + *std::max_element(scenario.bob_inputs.begin(), scenario.bob_inputs.end());
  const int max_ben = 1 + *std::max_element(scenario.ben_inputs.begin(), scenario.ben_inputs.end());
  for (int x = 0; x < max_alice; ++x) s.alice_povm.push_back(random_projective_pair(rng));
  for (int y = 0; y < max_bob; ++y) s.bob_povm.push_back(random_projective_pair(rng));
  for (int y = 0; y < max_ben; ++y) s.ben_povm.push_back(random_projective_pair(rng));
  s.validate();
  return s;
}

}  // namespace rbell
