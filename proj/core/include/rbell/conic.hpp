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

#ifndef RBELL_CONIC_HPP
#define RBELL_CONIC_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "rbell/entropy_sdp.hpp"

namespace rbell {

/// Sparse symmetric matrix over a PSD block; entries stored with
/// row <= col and implicit symmetry.
struct SparseSymMatrix {
  struct Entry {
    int row = 0, col = 0;
    double value = 0.0;
  };
  std::vector<Entry> entries;

  void add(int row, int col, double value);
  /// <A, X> respecting the implicit symmetry.
  double inner(const Eigen::MatrixXd& x) const;
  /// X += scale * A (as a full symmetric matrix).
  void add_to(Eigen::MatrixXd& x, double scale) const;
  double max_abs() const;
  void scale(double factor);
};

enum class RowKind { Normalization, Statistic, Tie, ZeroPin, DiagBound, Custom };

/// Standard-form conic problem:
///   minimize  <C, X> + <c_lin, x_lin> + constant
///   s.t.      <A_i, X> + <a_i, x_lin> = b_i,   X psd,  x_lin >= 0.
/// Inequalities of the source program enter through slack coordinates in
/// the nonnegative block.
struct ConicProblem {
  int psd_dim = 0;
  int lin_dim = 0;

  SparseSymMatrix objective_psd;
  std::vector<double> objective_lin;
  double objective_constant = 0.0;

  struct Row {
    SparseSymMatrix psd;
    std::vector<std::pair<int, double>> lin;
    double rhs = 0.0;
    RowKind kind = RowKind::Custom;
    std::string name;
  };
  std::vector<Row> rows;

  /// Variable bookkeeping back to moment ids: representative entry of
  /// each moment variable in the PSD block.
  std::vector<std::pair<int, int>> moment_entry;
  /// A priori |moment| bounds carried over from the program (used by the
  /// dual certificate); trace bound for the PSD block.
  std::vector<double> moment_abs_bound;
  double trace_bound = 0.0;
  std::vector<double> lin_bound;  // per nonnegative coordinate, 0 = unknown

  int rows_of_kind(RowKind kind) const;
  void validate() const;  // dimension consistency
};

/// Faithful standard-form encoding of an entropy program: normalization,
/// statistics (rank-deduplicated, inconsistent targets rejected), moment
/// tie rows, zero-word pins, tolerance bands and optional diagonal
/// strengthening rows.
ConicProblem to_conic(const EntropyProgram& program);

/// Moment values of a conic solution, keyed by the program's moment ids.
std::vector<double> extract_moments(const ConicProblem& problem, const Eigen::MatrixXd& x_psd);

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::MatrixXd x_psd;
  Eigen::VectorXd x_lin;
  Eigen::VectorXd y;
  Eigen::MatrixXd s_psd;
  Eigen::VectorXd s_lin;
  double primal_objective = 0.0;  // includes the constant
  double dual_objective = 0.0;    // includes the constant
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

/// Embedded primal-dual interior-point solver (Nesterov-Todd scaling,
/// predictor-corrector). Non-convergence is reported as NearOptimal with
/// the achieved residuals, never as a silent wrong answer.
SolveResult solve_conic(const ConicProblem& problem, const SolveSettings& settings = {});

struct DualCertificate {
  double certified_value = 0.0;  // rigorous lower bound incl. constant
  double penalty = 0.0;
  double lambda_min = 0.0;  // smallest eigenvalue of the recomputed dual slack
};

/// Recomputes the dual objective in extended precision from the
/// multipliers and charges any dual-slack negativity against the moment
/// bounds, yielding a floating-point-robust lower bound on the problem.
DualCertificate certify_dual(const ConicProblem& problem, const SolveResult& result);

/// Writes the problem in SDPA sparse format (.dat-s): number of
/// constraints, number of blocks, block sizes (negative = diagonal),
/// right-hand sides, then "k blk i j value" entries with 1-based
/// upper-triangular indices and k = 0 for the objective matrix. The
/// encoded data follows the SDPA convention max tr(F0 Y) s.t.
/// tr(F_i Y) = b_i, so the objective block stores -C and an external
/// solver's optimal value equals the negated minimum of this problem
/// (constant excluded). Deterministic: repeated exports are
/// byte-identical.
void export_sdpa(const ConicProblem& problem, std::ostream& out);
void export_sdpa(const ConicProblem& problem, const std::string& path);

/// Realification of a complex Hermitian block via the standard 2x2
/// embedding [[Re, -Im], [Im, Re]]; used when a complex-valued moment
/// block must be handed to the real-cone solver. PSD is preserved both
/// ways and <C, X> = <realify(C), realify(X)> / 2.
Eigen::MatrixXd realify_hermitian(const Eigen::MatrixXcd& h);

}  // namespace rbell

#endif  // RBELL_CONIC_HPP
