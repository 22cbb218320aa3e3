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

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rbell/conic.hpp"

#ifdef RBELL_HAVE_OPENMP
#include <omp.h>
#endif

namespace rbell {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::NearOptimal: return "near-optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

struct FullEntry {
  int row, col;
  double value;
};

bool cholesky(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return true;
  return LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n) == 0;
}

// Extreme eigenvalues of a symmetric matrix (values only; copy destroyed).
std::pair<double, double> eig_range(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return {0.0, 0.0};
  std::vector<double> w(n);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  if (info != 0)
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  return {w[0], w[n - 1]};
}

double min_eigenvalue(Eigen::MatrixXd a) { return eig_range(std::move(a)).first; }

// Max step alpha with X + alpha*D psd, given chol(X) = L (lower).
double max_step(const Eigen::MatrixXd& chol_lower, const Eigen::MatrixXd& direction) {
  Eigen::MatrixXd h = direction;
  chol_lower.triangularView<Eigen::Lower>().solveInPlace(h);
  chol_lower.triangularView<Eigen::Lower>().transpose().solveInPlace<Eigen::OnTheRight>(h);
  h = 0.5 * (h + h.transpose()).eval();
  const double lmin = min_eigenvalue(std::move(h));
  if (std::isnan(lmin)) return 0.0;
  if (lmin >= -1e-14) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct Workspace {
  int n = 0, nl = 0, d = 0;
  std::vector<std::vector<FullEntry>> rows_psd;  // full symmetric expansion
  std::vector<std::vector<std::pair<int, double>>> rows_lin;
  Eigen::VectorXd b;
  Eigen::MatrixXd cmat;
  Eigen::VectorXd clin;
  std::vector<double> row_scale;  // original row = scale * solved row
  double bnorm = 1.0, cnorm = 1.0;
  std::vector<double> row_norm;
  std::vector<std::vector<std::pair<int, double>>> lin_to_rows;

  double inner_row(int i, const Eigen::MatrixXd& x, const Eigen::VectorXd& xl) const {
    double v = 0.0;
    for (const FullEntry& e : rows_psd[i]) v += e.value * x(e.row, e.col);
    for (const auto& [k, c] : rows_lin[i]) v += c * xl(k);
    return v;
  }
};

Workspace prepare(const ConicProblem& p, bool scale_rows) {
  Workspace w;
  w.n = p.psd_dim;
  w.nl = p.lin_dim;
  w.d = static_cast<int>(p.rows.size());
  w.rows_psd.resize(w.d);
  w.rows_lin.resize(w.d);
  w.b.resize(w.d);
  w.row_scale.assign(w.d, 1.0);
  w.row_norm.assign(w.d, 0.0);
  w.lin_to_rows.resize(w.nl);

  for (int i = 0; i < w.d; ++i) {
    const auto& row = p.rows[i];
    double gamma = 0.0;
    for (const auto& e : row.psd.entries) gamma = std::max(gamma, std::abs(e.value));
    for (const auto& [k, v] : row.lin) gamma = std::max(gamma, std::abs(v));
    if (!scale_rows || gamma < 1e-12) gamma = 1.0;
    w.row_scale[i] = gamma;
    double norm2 = 0.0;
    for (const auto& e : row.psd.entries) {
      const double v = e.value / gamma;
      w.rows_psd[i].push_back({e.row, e.col, v});
      norm2 += v * v;
      if (e.row != e.col) {
        w.rows_psd[i].push_back({e.col, e.row, v});
        norm2 += v * v;
      }
    }
    for (const auto& [k, v] : row.lin) {
      w.rows_lin[i].emplace_back(k, v / gamma);
      w.lin_to_rows[k].emplace_back(i, v / gamma);
      norm2 += (v / gamma) * (v / gamma);
    }
    w.b(i) = row.rhs / gamma;
    w.row_norm[i] = std::sqrt(norm2);
  }

  w.cmat = Eigen::MatrixXd::Zero(w.n, w.n);
  p.objective_psd.add_to(w.cmat, 1.0);
  w.clin = Eigen::VectorXd::Zero(w.nl);
  for (int k = 0; k < w.nl; ++k) w.clin(k) = p.objective_lin[k];
  w.bnorm = w.b.norm();
  w.cnorm = std::sqrt(w.cmat.squaredNorm() + w.clin.squaredNorm());
  return w;
}

void accumulate_adjoint(const Workspace& w, const Eigen::VectorXd& y, Eigen::MatrixXd& out_psd,
                        Eigen::VectorXd& out_lin) {
  out_psd.setZero();
  out_lin.setZero();
  for (int i = 0; i < w.d; ++i) {
    const double yi = y(i);
    if (yi == 0.0) continue;
    for (const FullEntry& e : w.rows_psd[i]) out_psd(e.row, e.col) += yi * e.value;
    for (const auto& [k, c] : w.rows_lin[i]) out_lin(k) += yi * c;
  }
}

}  // namespace

SolveResult solve_conic(const ConicProblem& problem, const SolveSettings& settings) {
  problem.validate();
  const Workspace w = prepare(problem, settings.scale_rows);
  const int n = w.n, nl = w.nl, d = w.d;
  const double tol = settings.accuracy;
  // Success is graded at one order above the target: degenerate moment
  // problems often bottom out within a decade of the requested accuracy.
  const double feas_tol = 10.0 * tol;
  const double nu = std::max(1, n + nl);

  SolveResult res;
  if (d == 0) {
    res.status = SolveStatus::Optimal;
    res.x_psd = Eigen::MatrixXd::Zero(n, n);
    res.x_lin = Eigen::VectorXd::Zero(nl);
    res.y = Eigen::VectorXd::Zero(0);
    res.s_psd = w.cmat;
    res.s_lin = w.clin;
    res.message = "no constraints";
    return res;
  }

  double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
  double eta = std::max(10.0, std::sqrt(static_cast<double>(n)));
  for (int i = 0; i < d; ++i)
    xi = std::max(xi, std::sqrt(static_cast<double>(n)) * std::abs(w.b(i)) / (1.0 + w.row_norm[i]));
  eta = std::max(eta, std::sqrt(w.cnorm));

  Eigen::MatrixXd x = xi * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd s = eta * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd xl = Eigen::VectorXd::Constant(nl, xi);
  Eigen::VectorXd sl = Eigen::VectorXd::Constant(nl, eta);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(d);

  Eigen::VectorXd rp(d);
  Eigen::MatrixXd rd(n, n), aty(n, n);
  Eigen::VectorXd rdl(nl), atyl(nl);
  Eigen::MatrixXd schur(d, d);
  Eigen::VectorXd rhs(d), dy(d), resid(d);
  Eigen::MatrixXd t_psd(n, n), bmat(n, n), ds(n, n), dx(n, n);
  Eigen::VectorXd tl(nl), dsl(nl), dxl(nl);

  struct Snapshot {
    Eigen::MatrixXd x, s;
    Eigen::VectorXd xl, sl, y;
    double score = std::numeric_limits<double>::infinity();
    double pinf = 0, dinf = 0, relgap = 0, compl_gap = 0;
    int iter = 0;
  } best;

  double stall_mu = std::numeric_limits<double>::infinity();
  int stall_counter = 0;
  std::string stop_reason = "iteration limit reached";

  // Gram matrix of the constraint operator, used to re-project primal
  // directions onto the affine manifold (the Schur solve alone lets the
  // equality residuals drift once the scaling gets ill-conditioned).
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  {
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        double acc = 0.0;
        for (const FullEntry& e : w.rows_psd[i])
          for (const FullEntry& f : w.rows_psd[j])
            if (e.row == f.row && e.col == f.col) acc += e.value * f.value;
        gram(j, i) = acc;
      }
    }
    for (int k = 0; k < nl; ++k) {
      const auto& rows = w.lin_to_rows[k];
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t bb = a; bb < rows.size(); ++bb) {
          const int i = std::min(rows[a].first, rows[bb].first);
          const int j = std::max(rows[a].first, rows[bb].first);
          gram(j, i) += rows[a].second * rows[bb].second;
        }
    }
    double maxdiag = 1.0;
    for (int i = 0; i < d; ++i) maxdiag = std::max(maxdiag, gram(i, i));
    for (int i = 0; i < d; ++i) gram(i, i) += 1e-12 * maxdiag;
  }
  const bool gram_ok = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', d, gram.data(), d) == 0;

  auto classify_and_return = [&]() -> SolveResult& {
    const bool have_best = std::isfinite(best.score);
    if (have_best) {
      x = best.x;
      s = best.s;
      xl = best.xl;
      sl = best.sl;
      y = best.y;
    }
    res.x_psd = x;
    res.x_lin = xl;
    res.s_psd = s;
    res.s_lin = sl;
    res.y = Eigen::VectorXd(d);
    for (int i = 0; i < d; ++i) res.y(i) = y(i) / w.row_scale[i];
    res.primal_objective =
        w.cmat.cwiseProduct(x).sum() + w.clin.dot(xl) + problem.objective_constant;
    res.dual_objective = w.b.dot(y) + problem.objective_constant;
    res.gap = x.cwiseProduct(s).sum() + xl.dot(sl);
    res.primal_infeasibility = best.pinf;
    res.dual_infeasibility = best.dinf;
    if (have_best && best.pinf <= feas_tol && best.dinf <= feas_tol && best.relgap <= feas_tol) {
      res.status = SolveStatus::Optimal;
      res.message = "converged";
    } else if (have_best && best.pinf <= 1e-4 && best.dinf <= 1e-5 && best.relgap <= 1e-4) {
      res.status = SolveStatus::NearOptimal;
      res.message = "reduced accuracy (" + stop_reason + ")";
    } else {
      res.status = SolveStatus::NumericalFailure;
      res.message = stop_reason;
    }
    return res;
  };

  for (int iter = 0; iter < settings.max_iters; ++iter) {
    res.iterations = iter;
    for (int i = 0; i < d; ++i) rp(i) = w.b(i) - w.inner_row(i, x, xl);
    accumulate_adjoint(w, y, aty, atyl);
    rd = w.cmat - s - aty;
    rdl = w.clin - sl - atyl;

    const double compl_gap = x.cwiseProduct(s).sum() + xl.dot(sl);
    const double mu = compl_gap / nu;
    const double pobj = w.cmat.cwiseProduct(x).sum() + w.clin.dot(xl);
    const double dobj = w.b.dot(y);
    const double pinf = rp.norm() / (1.0 + w.bnorm);
    const double dinf = std::sqrt(rd.squaredNorm() + rdl.squaredNorm()) / (1.0 + w.cnorm);
    const double relgap = compl_gap / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (settings.verbosity > 0) {
      std::printf("iter %3d  mu %9.2e  gap %9.2e  pinf %9.2e  dinf %9.2e  pobj %+12.8e\n", iter,
                  mu, relgap, pinf, dinf, pobj);
    }
    if (!std::isfinite(mu) || !std::isfinite(pinf) || !std::isfinite(dinf)) {
      stop_reason = "non-finite iterate";
      return classify_and_return();
    }

    const double score = std::max({pinf, dinf, relgap});
    if (score < best.score) {
      best.x = x;
      best.s = s;
      best.xl = xl;
      best.sl = sl;
      best.y = y;
      best.score = score;
      best.pinf = pinf;
      best.dinf = dinf;
      best.relgap = relgap;
      best.compl_gap = compl_gap;
      best.iter = iter;
    }

    if (pinf <= feas_tol && dinf <= feas_tol && relgap <= feas_tol) {
      stop_reason = "converged";
      best.x = x;
      best.s = s;
      best.xl = xl;
      best.sl = sl;
      best.y = y;
      best.score = score;
      best.pinf = pinf;
      best.dinf = dinf;
      best.relgap = relgap;
      best.compl_gap = compl_gap;
      best.iter = iter;
      return classify_and_return();
    }

    // Farkas-style primal infeasibility certificate: a normalized dual
    // ray with b'y = 1, A*(y) nearly negative semidefinite.
    if (dobj > 1e2 * (1.0 + std::abs(pobj)) && pinf > tol) {
      Eigen::VectorXd ray = y / dobj;
      Eigen::MatrixXd aray(n, n);
      Eigen::VectorXd arayl(nl);
      accumulate_adjoint(w, ray, aray, arayl);
      const double lmax = n > 0 ? eig_range(aray).second : 0.0;
      const double lmax_lin = nl > 0 ? arayl.maxCoeff() : 0.0;
      if (std::max(lmax, lmax_lin) <= 1e-7) {
        res.status = SolveStatus::Infeasible;
        res.message = "primal infeasibility certificate (dual ray)";
        res.x_psd = x;
        res.x_lin = xl;
        res.s_psd = s;
        res.s_lin = sl;
        res.y = Eigen::VectorXd(d);
        for (int i = 0; i < d; ++i) res.y(i) = y(i) / w.row_scale[i];
        res.primal_objective =
            w.cmat.cwiseProduct(x).sum() + w.clin.dot(xl) + problem.objective_constant;
        res.dual_objective = w.b.dot(y) + problem.objective_constant;
        res.gap = compl_gap;
        res.primal_infeasibility = pinf;
        res.dual_infeasibility = dinf;
        return res;
      }
    }

    if (mu < 0.9 * stall_mu) {
      stall_mu = mu;
      stall_counter = 0;
    } else if (++stall_counter >= 8) {
      stop_reason = "progress stalled";
      return classify_and_return();
    }
    if (mu < 1e-13 * (1.0 + std::abs(pobj)) && pinf > feas_tol) {
      stop_reason = "complementarity exhausted before feasibility";
      return classify_and_return();
    }

    // Nesterov-Todd scaling W = R R' with R = Lx V Sigma^{-1/2} from the
    // SVD of Ls' Lx.
    Eigen::MatrixXd lx = x;
    if (!cholesky(lx)) {
      x += 1e-12 * std::max(1.0, x.trace() / n) * Eigen::MatrixXd::Identity(n, n);
      lx = x;
      if (!cholesky(lx)) {
        stop_reason = "primal iterate lost positive definiteness";
        return classify_and_return();
      }
    }
    Eigen::MatrixXd ls = s;
    if (!cholesky(ls)) {
      s += 1e-12 * std::max(1.0, s.trace() / n) * Eigen::MatrixXd::Identity(n, n);
      ls = s;
      if (!cholesky(ls)) {
        stop_reason = "dual iterate lost positive definiteness";
        return classify_and_return();
      }
    }
    lx.triangularView<Eigen::StrictlyUpper>().setZero();
    ls.triangularView<Eigen::StrictlyUpper>().setZero();

    Eigen::MatrixXd prod = ls.transpose() * lx;
    Eigen::MatrixXd u(std::max(n, 1), std::max(n, 1)), vt(std::max(n, 1), std::max(n, 1));
    Eigen::VectorXd sing(std::max(n, 1));
    if (n > 0) {
      std::vector<double> superb(std::max(1, n - 1));
      const int info =
          LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'A', 'A', n, n, prod.data(), n, sing.data(), u.data(),
                         n, vt.data(), n, superb.data());
      if (info != 0 || sing.head(n).minCoeff() <= 0.0) {
        stop_reason = "NT scaling breakdown";
        return classify_and_return();
      }
    }
    Eigen::MatrixXd r = lx * vt.topRows(n).transpose();
    for (int k = 0; k < n; ++k) r.col(k) /= std::sqrt(sing(k));
    Eigen::MatrixXd wnt = r * r.transpose();
    wnt = 0.5 * (wnt + wnt.transpose()).eval();

    Eigen::VectorXd wlin(nl);
    for (int k = 0; k < nl; ++k) wlin(k) = xl(k) / sl(k);

    Eigen::MatrixXd xinv = lx;
    if (n > 0 && LAPACKE_dpotri(LAPACK_COL_MAJOR, 'L', n, xinv.data(), n) != 0) {
      stop_reason = "primal inverse failed";
      return classify_and_return();
    }
    xinv.triangularView<Eigen::StrictlyUpper>() =
        xinv.transpose().triangularView<Eigen::StrictlyUpper>();

    // Schur complement M_ij = <A_i, W A_j W> + sum_k a_ik a_jk wlin_k.
    schur.setZero();
#ifdef RBELL_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        double acc = 0.0;
        for (const FullEntry& e : w.rows_psd[i]) {
          double inner = 0.0;
          for (const FullEntry& f : w.rows_psd[j])
            inner += f.value * wnt(e.row, f.row) * wnt(f.col, e.col);
          acc += e.value * inner;
        }
        schur(j, i) = acc;
      }
    }
    for (int k = 0; k < nl; ++k) {
      const auto& rows = w.lin_to_rows[k];
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t bb = a; bb < rows.size(); ++bb) {
          const int i = std::min(rows[a].first, rows[bb].first);
          const int j = std::max(rows[a].first, rows[bb].first);
          schur(j, i) += rows[a].second * rows[bb].second * wlin(k);
        }
    }

    double ridge;
    {
      double maxdiag = 0.0;
      for (int i = 0; i < d; ++i) maxdiag = std::max(maxdiag, schur(i, i));
      ridge = 1e-14 * std::max(1.0, maxdiag);
    }
    Eigen::MatrixXd schur_fact;
    bool factored = false;
    for (int attempt = 0; attempt < 4 && !factored; ++attempt) {
      schur_fact = schur;
      for (int i = 0; i < d; ++i) schur_fact(i, i) += ridge;
      factored = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', d, schur_fact.data(), d) == 0;
      if (!factored) ridge *= 1e3;
    }
    if (!factored) {
      stop_reason = "Schur factorization failed";
      return classify_and_return();
    }

    auto schur_solve = [&](Eigen::VectorXd& v) {
      // One step of iterative refinement keeps late iterations honest.
      Eigen::VectorXd sol = v;
      LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', d, 1, schur_fact.data(), d, sol.data(), d);
      resid = v;
      resid.noalias() -= schur.selfadjointView<Eigen::Lower>() * sol;
      LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', d, 1, schur_fact.data(), d, resid.data(), d);
      v = sol + resid;
    };

    // corr: optional second-order term sym(dX_aff dS_aff X^{-1}) from the
    // predictor, in the same space as the linearized complementarity.
    Eigen::MatrixXd corr_psd = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd corr_lin = Eigen::VectorXd::Zero(nl);
    bool use_corr = false;
    auto solve_direction = [&](double target) {
      bmat = target * xinv - s - rd;
      if (use_corr) bmat -= corr_psd;
      t_psd = wnt * bmat * wnt;
      for (int k = 0; k < nl; ++k)
        tl(k) = wlin(k) * (target / xl(k) - sl(k) - rdl(k) - (use_corr ? corr_lin(k) : 0.0));
      for (int i = 0; i < d; ++i) {
        double v = rp(i);
        for (const FullEntry& e : w.rows_psd[i]) v -= e.value * t_psd(e.row, e.col);
        for (const auto& [k, c] : w.rows_lin[i]) v -= c * tl(k);
        rhs(i) = v;
      }
      dy = rhs;
      schur_solve(dy);
      accumulate_adjoint(w, dy, aty, atyl);
      ds = rd - aty;
      dsl = rdl - atyl;
      bmat = target * xinv - s - ds;
      if (use_corr) bmat -= corr_psd;
      dx = wnt * bmat * wnt;
      dx = 0.5 * (dx + dx.transpose()).eval();
      for (int k = 0; k < nl; ++k)
        dxl(k) = wlin(k) * (target / xl(k) - sl(k) - dsl(k) - (use_corr ? corr_lin(k) : 0.0));

      if (gram_ok) {
        // Project the primal direction back onto A(dx, dxl) = rp.
        Eigen::VectorXd defect(d);
        for (int i = 0; i < d; ++i) defect(i) = rp(i) - w.inner_row(i, dx, dxl);
        LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', d, 1, gram.data(), d, defect.data(), d);
        for (int i = 0; i < d; ++i) {
          const double ui = defect(i);
          if (ui == 0.0) continue;
          for (const FullEntry& e : w.rows_psd[i]) dx(e.row, e.col) += ui * e.value;
          for (const auto& [k, c] : w.rows_lin[i]) dxl(k) += ui * c;
        }
      }
    };

    auto lin_step = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < v.size(); ++k)
        if (dv(k) < 0.0) alpha = std::min(alpha, -v(k) / dv(k));
      return alpha;
    };

    // Predictor.
    use_corr = false;
    solve_direction(0.0);
    const double ap_aff = std::min({1.0, max_step(lx, dx), lin_step(xl, dxl)});
    const double ad_aff = std::min({1.0, max_step(ls, ds), lin_step(sl, dsl)});
    double mu_aff = ((x + ap_aff * dx).cwiseProduct(s + ad_aff * ds).sum() +
                     (xl + ap_aff * dxl).dot(sl + ad_aff * dsl)) /
                    nu;
    mu_aff = std::max(mu_aff, 0.0);
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::clamp(sigma, 1e-8, 0.95);

    // Mehrotra second-order term. In the NT frame (scale factor R with
    // W = R R', V = R^{-1} X R^{-T} = Sigma) the corrector solves the
    // Jordan equation V o Y = sym(dXhat dShat) elementwise and maps back.
    {
      Eigen::MatrixXd rinv = vt.topRows(n);
      for (int k = 0; k < n; ++k) rinv.row(k) *= std::sqrt(sing(k));
      lx.triangularView<Eigen::Lower>().solveInPlace<Eigen::OnTheRight>(rinv);
      const Eigen::MatrixXd dxhat = rinv * dx * rinv.transpose();
      const Eigen::MatrixXd dshat = r.transpose() * ds * r;
      Eigen::MatrixXd p = 0.5 * (dxhat * dshat + dshat * dxhat);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) *= 2.0 / (sing(i) + sing(j));
      corr_psd = rinv.transpose() * p * rinv;
      corr_psd = 0.5 * (corr_psd + corr_psd.transpose()).eval();
      for (int k = 0; k < nl; ++k) corr_lin(k) = dxl(k) * dsl(k) / xl(k);
      use_corr = true;
    }

    // Corrector / centering.
    solve_direction(sigma * mu);
    use_corr = false;
    const double gamma = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    const double ap = std::min({1.0, gamma * max_step(lx, dx), gamma * lin_step(xl, dxl)});
    const double ad = std::min({1.0, gamma * max_step(ls, ds), gamma * lin_step(sl, dsl)});
    if (!(ap > 1e-10) || !(ad > 1e-10)) {
      stop_reason = "step length collapsed";
      return classify_and_return();
    }

    x += ap * dx;
    xl += ap * dxl;
    y += ad * dy;
    s += ad * ds;
    sl += ad * dsl;
    x = 0.5 * (x + x.transpose()).eval();
    s = 0.5 * (s + s.transpose()).eval();
  }

  return classify_and_return();
}

DualCertificate certify_dual(const ConicProblem& problem, const SolveResult& result) {
  const int n = problem.psd_dim;
  DualCertificate cert;
  if (result.y.size() != static_cast<Eigen::Index>(problem.rows.size())) {
    cert.certified_value = -std::numeric_limits<double>::infinity();
    return cert;
  }

  // Recompute the dual slack from the multipliers in extended precision.
  std::vector<long double> slack(static_cast<std::size_t>(n) * n, 0.0L);
  auto at = [&](int r, int c) -> long double& {
    return slack[static_cast<std::size_t>(c) * n + r];
  };
  for (const auto& e : problem.objective_psd.entries) {
    at(e.row, e.col) += static_cast<long double>(e.value);
    if (e.row != e.col) at(e.col, e.row) += static_cast<long double>(e.value);
  }
  long double dual_obj = 0.0L;
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    const long double yi = result.y(static_cast<Eigen::Index>(i));
    dual_obj += yi * static_cast<long double>(problem.rows[i].rhs);
    for (const auto& e : problem.rows[i].psd.entries) {
      at(e.row, e.col) -= yi * static_cast<long double>(e.value);
      if (e.row != e.col) at(e.col, e.row) -= yi * static_cast<long double>(e.value);
    }
  }

  Eigen::MatrixXd smat(n, n);
  double smax = 0.0;
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      smat(r, c) = static_cast<double>(at(r, c));
      smax = std::max(smax, std::abs(smat(r, c)));
    }
  const double lmin = n > 0 ? min_eigenvalue(std::move(smat)) : 0.0;
  const double guard = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1, n) *
                       std::max(1.0, smax);
  cert.lambda_min = lmin - guard;

  long double penalty = 0.0L;
  if (cert.lambda_min < 0.0)
    penalty += static_cast<long double>(-cert.lambda_min) * problem.trace_bound;

  for (int k = 0; k < problem.lin_dim; ++k) {
    long double sk = static_cast<long double>(problem.objective_lin[k]);
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
      for (const auto& [idx, v] : problem.rows[i].lin)
        if (idx == k) sk -= static_cast<long double>(result.y(static_cast<Eigen::Index>(i))) * v;
    }
    const long double sguard = 1e3L * std::numeric_limits<double>::epsilon() *
                               std::max<long double>(1.0L, std::abs(sk));
    if (sk < -sguard) {
      const double bound = problem.lin_bound.empty() ? 0.0 : problem.lin_bound[k];
      if (bound <= 0.0) {
        cert.certified_value = -std::numeric_limits<double>::infinity();
        cert.penalty = std::numeric_limits<double>::infinity();
        return cert;
      }
      penalty += -sk * static_cast<long double>(bound);
    }
  }

  cert.penalty = static_cast<double>(penalty);
  cert.certified_value = static_cast<double>(dual_obj - penalty) + problem.objective_constant;
  return cert;
}

}  // namespace rbell
