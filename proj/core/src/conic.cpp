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

#include "rbell/conic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rbell {

void SparseSymMatrix::add(int row, int col, double value) {
  if (row > col) std::swap(row, col);
  entries.push_back({row, col, value});
}

double SparseSymMatrix::inner(const Eigen::MatrixXd& x) const {
  double v = 0.0;
  for (const Entry& e : entries)
    v += e.row == e.col ? e.value * x(e.row, e.col) : 2.0 * e.value * x(e.row, e.col);
  return v;
}

void SparseSymMatrix::add_to(Eigen::MatrixXd& x, double scale) const {
  for (const Entry& e : entries) {
    x(e.row, e.col) += scale * e.value;
    if (e.row != e.col) x(e.col, e.row) += scale * e.value;
  }
}

double SparseSymMatrix::max_abs() const {
  double v = 0.0;
  for (const Entry& e : entries) v = std::max(v, std::abs(e.value));
  return v;
}

void SparseSymMatrix::scale(double factor) {
  for (Entry& e : entries) e.value *= factor;
}

int ConicProblem::rows_of_kind(RowKind kind) const {
  int count = 0;
  for (const Row& r : rows)
    if (r.kind == kind) ++count;
  return count;
}

void ConicProblem::validate() const {
  auto check_psd = [this](const SparseSymMatrix& m, const std::string& what) {
    for (const auto& e : m.entries) {
      if (e.row < 0 || e.col < 0 || e.row >= psd_dim || e.col >= psd_dim || e.row > e.col)
        throw std::invalid_argument("conic problem: bad PSD entry in " + what);
      if (!std::isfinite(e.value))
        throw std::invalid_argument("conic problem: non-finite coefficient in " + what);
    }
  };
  check_psd(objective_psd, "objective");
  if (static_cast<int>(objective_lin.size()) != lin_dim)
    throw std::invalid_argument("conic problem: objective_lin dimension mismatch");
  for (const Row& r : rows) {
    check_psd(r.psd, "row " + r.name);
    for (const auto& [k, v] : r.lin) {
      if (k < 0 || k >= lin_dim)
        throw std::invalid_argument("conic problem: bad linear index in row " + r.name);
      if (!std::isfinite(v))
        throw std::invalid_argument("conic problem: non-finite coefficient in row " + r.name);
    }
    if (!std::isfinite(r.rhs))
      throw std::invalid_argument("conic problem: non-finite rhs in row " + r.name);
  }
}

namespace {

// Adds coeff * X[r,c] to a functional row, splitting the coefficient
// over the two mirrored positions for off-diagonal entries.
void add_entry_coeff(SparseSymMatrix& m, int r, int c, double coeff) {
  if (r == c)
    m.add(r, c, coeff);
  else
    m.add(r, c, 0.5 * coeff);
}

// Deterministic rank filter for the normalization + statistics system.
// Rows are processed in order; a row that reduces to zero against the
// kept set must have a consistent right-hand side or the targets are
// rejected.
class RankFilter {
 public:
  // Returns true when the row is independent (keep it).
  bool consider(const std::vector<std::pair<int, double>>& terms, double rhs,
                const std::string& name) {
    std::map<int, double> row(terms.begin(), terms.end());
    double r = rhs;
    double scale = 1.0;
    for (const auto& [id, v] : row) scale = std::max(scale, std::abs(v));
    for (const auto& kept : kept_) {
      auto it = row.find(kept.pivot);
      if (it == row.end()) continue;
      const double factor = it->second;
      for (const auto& [id, v] : kept.row) {
        row[id] -= factor * v;
        if (std::abs(row[id]) < 1e-14 * scale) row.erase(id);
      }
      r -= factor * kept.rhs;
      row.erase(kept.pivot);
    }
    double maxabs = 0.0;
    int pivot = -1;
    for (const auto& [id, v] : row) {
      if (std::abs(v) > maxabs) {
        maxabs = std::abs(v);
        pivot = id;
      }
    }
    if (maxabs < 1e-9 * scale) {
      if (std::abs(r) > 1e-7 * (1.0 + std::abs(rhs)))
        throw std::invalid_argument("inconsistent statistics targets at " + name +
                                    " (residual " + std::to_string(r) + ")");
      return false;  // redundant
    }
    Kept k;
    k.pivot = pivot;
    const double inv = 1.0 / row[pivot];
    for (auto& [id, v] : row)
      if (id != pivot) k.row.emplace_back(id, v * inv);
    k.rhs = r * inv;
    kept_.push_back(std::move(k));
    return true;
  }

 private:
  struct Kept {
    int pivot;
    std::vector<std::pair<int, double>> row;  // excludes the pivot (coefficient 1)
    double rhs;
  };
  std::vector<Kept> kept_;
};

}  // namespace

ConicProblem to_conic(const EntropyProgram& program) {
  const int n = program.n();
  const int num_moments = static_cast<int>(program.moments.size());
  if (program.entry_class.rows() != n || program.entry_class.cols() != n)
    throw std::invalid_argument("to_conic: entry table dimension mismatch");

  ConicProblem problem;
  problem.psd_dim = n;
  problem.moment_abs_bound = program.moment_abs_bound;

  // Representative entry per moment id, tie rows for the other carriers,
  // pins for zero words.
  problem.moment_entry.assign(num_moments, {-1, -1});
  std::vector<ConicProblem::Row> ties;
  std::vector<ConicProblem::Row> pins;
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      const int id = program.entry_class(r, c);
      if (id < 0) {
        ConicProblem::Row row;
        row.kind = RowKind::ZeroPin;
        row.name = "pin(" + std::to_string(r) + "," + std::to_string(c) + ")";
        add_entry_coeff(row.psd, r, c, 1.0);
        row.rhs = 0.0;
        pins.push_back(std::move(row));
        continue;
      }
      if (id >= num_moments) throw std::invalid_argument("to_conic: moment id out of range");
      if (problem.moment_entry[id].first < 0) {
        problem.moment_entry[id] = {r, c};
      } else {
        ConicProblem::Row row;
        row.kind = RowKind::Tie;
        row.name = "tie(" + std::to_string(r) + "," + std::to_string(c) + ")";
        add_entry_coeff(row.psd, r, c, 1.0);
        add_entry_coeff(row.psd, problem.moment_entry[id].first, problem.moment_entry[id].second,
                        -1.0);
        row.rhs = 0.0;
        ties.push_back(std::move(row));
      }
    }
  }
  for (int id = 0; id < num_moments; ++id) {
    if (problem.moment_entry[id].first < 0)
      throw std::invalid_argument("to_conic: moment variable without a matrix entry: " +
                                  program.moments[id].render());
  }

  // Normalization + statistics with the rank filter; inequalities and
  // tolerance bands receive slack coordinates in the nonnegative block.
  RankFilter filter;
  std::vector<ConicProblem::Row> stat_rows;
  auto make_row = [&](const EntropyProgram::Constraint& con, double rhs,
                      RowKind kind) -> ConicProblem::Row {
    ConicProblem::Row row;
    row.kind = kind;
    row.name = con.name;
    row.rhs = rhs;
    for (const auto& [id, coeff] : con.terms) {
      if (id < 0 || id >= num_moments)
        throw std::invalid_argument("to_conic: constraint " + con.name +
                                    " references an unknown moment variable");
      const auto [r, c] = problem.moment_entry[id];
      add_entry_coeff(row.psd, r, c, coeff);
    }
    return row;
  };

  bool first = true;
  for (const auto& con : program.constraints) {
    const RowKind kind = first ? RowKind::Normalization : RowKind::Statistic;
    first = false;
    const double delta = kind == RowKind::Statistic ? program.tolerance_delta : 0.0;
    if (con.relation == Relation::Eq && delta == 0.0) {
      if (!filter.consider(con.terms, con.target, con.name)) continue;
      stat_rows.push_back(make_row(con, con.target, kind));
      continue;
    }
    // Banded or one-sided constraints: slack coordinates.
    const bool upper = con.relation != Relation::Ge;  // f <= t + delta
    const bool lower = con.relation != Relation::Le;  // f >= t - delta
    if (upper) {
      ConicProblem::Row row = make_row(con, con.target + delta, kind);
      row.name += "<=";
      const int slack = problem.lin_dim++;
      row.lin.emplace_back(slack, 1.0);
      problem.lin_bound.push_back(con.relation == Relation::Eq ? 2.0 * delta : 0.0);
      stat_rows.push_back(std::move(row));
    }
    if (lower) {
      ConicProblem::Row row = make_row(con, con.target - delta, kind);
      row.name += ">=";
      const int slack = problem.lin_dim++;
      row.lin.emplace_back(slack, -1.0);
      problem.lin_bound.push_back(con.relation == Relation::Eq ? 2.0 * delta : 0.0);
      stat_rows.push_back(std::move(row));
    }
  }

  problem.rows.reserve(stat_rows.size() + ties.size() + pins.size() + n);
  for (auto& r : stat_rows) problem.rows.push_back(std::move(r));
  for (auto& r : ties) problem.rows.push_back(std::move(r));
  for (auto& r : pins) problem.rows.push_back(std::move(r));

  // Optional strengthening rows <u'u> <= bound for Z-containing diagonal
  // words (their bound is finite thanks to the absorbed Z scaling).
  if (program.diag_bounds) {
    for (int k = 1; k < n; ++k) {
      bool has_z = false;
      for (const Generator& g : program.basis[k].word()) has_z = has_z || is_z_family(g.family);
      if (!has_z) continue;
      const int id = program.entry_class(k, k);
      if (id < 0) continue;
      ConicProblem::Row row;
      row.kind = RowKind::DiagBound;
      row.name = "diag<=(" + program.basis[k].render() + ")";
      add_entry_coeff(row.psd, k, k, 1.0);
      const double bound = program.moment_abs_bound[id];
      row.rhs = bound;
      const int slack = problem.lin_dim++;
      row.lin.emplace_back(slack, 1.0);
      problem.lin_bound.push_back(bound);
      problem.rows.push_back(std::move(row));
    }
  }

  problem.objective_lin.assign(problem.lin_dim, 0.0);
  problem.objective_constant = program.objective_constant;
  for (int id = 0; id < num_moments; ++id) {
    const double coeff = program.objective[id];
    if (coeff == 0.0) continue;
    const auto [r, c] = problem.moment_entry[id];
    add_entry_coeff(problem.objective_psd, r, c, coeff);
  }

  problem.trace_bound = 0.0;
  for (int k = 0; k < n; ++k) {
    const int id = program.entry_class(k, k);
    problem.trace_bound += id >= 0 ? program.moment_abs_bound[id] : 0.0;
  }

  problem.validate();
  return problem;
}

std::vector<double> extract_moments(const ConicProblem& problem, const Eigen::MatrixXd& x_psd) {
  std::vector<double> values(problem.moment_entry.size(), 0.0);
  for (std::size_t id = 0; id < problem.moment_entry.size(); ++id) {
    const auto [r, c] = problem.moment_entry[id];
    if (r >= 0) values[id] = x_psd(r, c);
  }
  return values;
}

Eigen::MatrixXd realify_hermitian(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  if (h.cols() != n) throw std::invalid_argument("realify_hermitian: square matrix required");
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.bottomRightCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  return out;
}

}  // namespace rbell
