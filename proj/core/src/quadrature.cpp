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

#include "rbell/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rbell {

Quadrature gauss_radau(int m) {
  if (m < 1) throw std::invalid_argument("gauss_radau: node count must be >= 1");
  if (m == 1) return Quadrature{{1.0}, {1.0}};

  // Monic shifted-Legendre recurrence on [0,1]: alpha_k = 1/2,
  // beta_k = k^2 / (4 (4k^2 - 1)), beta_0 = 1 (total mass).
  const int n = m;
  std::vector<double> alpha(n, 0.5);
  std::vector<double> beta(n, 0.0);
  beta[0] = 1.0;
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k) * k;
    beta[k] = kk / (4.0 * (4.0 * kk - 1.0));
  }

  // Golub's endpoint modification: replace the last diagonal entry so the
  // fixed node b = 1 becomes an eigenvalue of the Jacobi matrix. With
  // monic polynomials p_k evaluated at b:
  //   alpha_{n-1} <- b - beta_{n-1} p_{n-2}(b) / p_{n-1}(b).
  const double b = 1.0;
  double pm2 = 1.0;                // p_0(b)
  double pm1 = b - alpha[0];       // p_1(b)
  for (int k = 1; k <= n - 2; ++k) {
    const double p = (b - alpha[k]) * pm1 - beta[k] * pm2;
    pm2 = pm1;
    pm1 = p;
  }
  alpha[n - 1] = b - beta[n - 1] * pm2 / pm1;

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = alpha[k];
    if (k + 1 < n) {
      const double off = std::sqrt(beta[k + 1]);
      jacobi(k, k + 1) = off;
      jacobi(k + 1, k) = off;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    q.nodes[k] = eig.eigenvalues()(k);
    const double v0 = eig.eigenvectors()(0, k);
    q.weights[k] = beta[0] * v0 * v0;
  }
  q.nodes[n - 1] = 1.0;  // pin the fixed endpoint exactly
  return q;
}

}  // namespace rbell
