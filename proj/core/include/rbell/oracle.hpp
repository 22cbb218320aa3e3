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

#ifndef RBELL_ORACLE_HPP
#define RBELL_ORACLE_HPP

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "rbell/honest_model.hpp"
#include "rbell/scenario.hpp"

namespace rbell {

/// A concrete finite-dimensional strategy: a state on the source
/// register, the register routed to Ben/Bob, and the eavesdropper's
/// system, an attack isometry applied on the routed-plus-eavesdropper
/// space before Bob measures, and explicit POVMs for all parties.
struct ExplicitStrategy {
  int dim_a = 2;
  int dim_bnear = 2;  // register measured by Ben (pre-attack)
  int dim_e = 2;
  int dim_bfar = 2;  // register measured by Bob (post-attack)

  Eigen::MatrixXcd sigma;  // state on A x Bnear x E
  Eigen::MatrixXcd attack;  // isometry (Bfar x E) <- (Bnear x E)
  std::vector<std::vector<Eigen::MatrixXcd>> alice_povm;  // [input][outcome], dim_a
  std::vector<std::vector<Eigen::MatrixXcd>> bob_povm;    // [input][outcome], dim_bfar
  std::vector<std::vector<Eigen::MatrixXcd>> ben_povm;    // [input][outcome], dim_bnear

  /// Verifies the state, isometry and POVM invariants to 1e-10 and
  /// throws naming the first failing check.
  void validate() const;

  /// State after the attack, on A x Bfar x E.
  Eigen::MatrixXcd post_attack_state() const;
};

/// Exact outcome tables: Bob branch from the post-attack state, Ben
/// branch from the source state.
ProbabilityTables strategy_statistics(const ExplicitStrategy& strategy, const Scenario& scenario);

/// Exact conditional von Neumann entropy (bits) of Alice's key
/// measurement outcome, flipped with probability q, against the
/// eavesdropper's system of the post-attack state.
double strategy_entropy(const ExplicitStrategy& strategy, const Scenario& scenario, double q);

/// Honest strategy embedding: trivial attack, trivial eavesdropper,
/// no detection loss (equivalent to honest_statistics at unit
/// efficiencies).
ExplicitStrategy honest_strategy(const HonestParams& params);

/// Haar-random state and attack with random projective measurements on
/// qubit subsystems.
ExplicitStrategy random_strategy(const Scenario& scenario, std::mt19937_64& rng);

}  // namespace rbell

#endif  // RBELL_ORACLE_HPP
