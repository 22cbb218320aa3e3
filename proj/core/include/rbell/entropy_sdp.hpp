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

#ifndef RBELL_ENTROPY_SDP_HPP
#define RBELL_ENTROPY_SDP_HPP

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "rbell/nc_algebra.hpp"
#include "rbell/quadrature.hpp"
#include "rbell/scenario.hpp"

namespace rbell {

enum class Relation { Eq, Le, Ge };

/// Moment-matrix relaxation of the entropy optimization: a PSD moment
/// block over the monomial basis, statistics equality constraints, and
/// the quadrature-expanded objective. Moment variables are indexed by
/// canonical words up to adjoint equivalence (the moment matrix can be
/// taken real symmetric: conjugating any feasible complex moment matrix
/// entrywise preserves feasibility and the objective, so the real part
/// of any feasible point is feasible).
struct EntropyProgram {
  Scenario scenario;
  LevelSpec level;
  Quadrature quadrature;
  double preprocessing_q = 0.0;

  std::vector<Monomial> basis;
  std::vector<Monomial> moments;  // variable id -> representative word
  std::unordered_map<Monomial, int, MonomialHash> moment_id;
  Eigen::MatrixXi entry_class;  // basis x basis -> variable id, -1 for zero words

  std::vector<double> objective;  // linear coefficients per variable id
  double objective_constant = 0.0;

  struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> terms;  // (variable id, coefficient)
    double target = 0.0;
    Relation relation = Relation::Eq;
  };
  std::vector<Constraint> constraints;  // normalization first, then statistics

  /// A priori bound on |moment| per variable id, from operator norms
  /// (generators are unit-norm after the Z rescaling).
  std::vector<double> moment_abs_bound;
  std::vector<double> z_scale;  // per node, the absorbed Z normalization

  double tolerance_delta = 0.0;  // +- band applied to statistics rows
  bool diag_bounds = false;      // emit <u'u> <= bound strengthening rows

  int n() const { return static_cast<int>(basis.size()); }
  int statistics_count() const { return static_cast<int>(constraints.size()) - 1; }

  /// Objective value of an explicit moment assignment (id -> value),
  /// including the constant.
  double objective_value(const std::vector<double>& moment_values) const;
};

struct BuildOptions {
  /// Drop measurement generators that appear in no constraint and not in
  /// the objective (value-preserving: their moment rows are free).
  bool prune_unused_generators = true;
  /// Emit diagonal strengthening rows <u'u> <= bound for Z-containing
  /// words (operator-inequality constraints; off by default).
  bool diag_bounds = false;
};

/// Assembles the quadrature-expanded relaxation: objective
///   c_m + sum_i w_i/(t_i ln 2) sum_k < Abar_k (Z_{k,i} + Z*_{k,i}
///        + (1-t_i) Z*_{k,i} Z_{k,i}) + t_i Z_{k,i} Z*_{k,i} >
/// with Abar_k = (1-q) A^{k|x*} + q A^{1-k|x*} and
/// c_m = sum_i w_i/(t_i ln 2), subject to the given statistics
/// functionals and moment-matrix positivity. Targets referencing events
/// outside the scenario are rejected.
EntropyProgram build_program(const Scenario& scenario,
                             const std::vector<ConstraintFunctional>& targets, double q,
                             const LevelSpec& level, int m, const BuildOptions& options = {});

enum class SolveStatus { Optimal, NearOptimal, Infeasible, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveSettings {
  double accuracy = 1e-8;
  int max_iters = 250;
  bool scale_rows = true;
  int verbosity = 0;
};

/// Certified lower bound on an entropy program.
struct BoundResult {
  double h = 0.0;             // certified bound, floored at 0 (entropy is nonnegative)
  double certified_raw = 0.0; // dual certificate before the floor
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // complementarity at termination
  SolveStatus status = SolveStatus::NumericalFailure;
  int iterations = 0;
  double certificate_penalty = 0.0;  // deduction for dual slack negativity
  double dual_slack_min_eig = 0.0;
  std::string message;
};

/// Solves the relaxation and certifies the dual objective: the dual
/// slack matrix is recomputed from the multipliers in extended
/// precision, and any negative eigenvalue is charged against the a
/// priori moment bounds. The certified value is a true lower bound on
/// the program (and the entropy); it is never clipped above.
BoundResult lower_bound(const EntropyProgram& program, const SolveSettings& settings = {});

}  // namespace rbell

#endif  // RBELL_ENTROPY_SDP_HPP
