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

#include "rbell/entropy_sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "rbell/conic.hpp"

namespace rbell {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Norm cushion under which the auxiliary operators can be restricted
// without loss; the per-node rescaling makes every generator unit-norm.
double z_operator_scale(double t) {
  const double safe_t = std::max(t, 1e-12);
  if (t >= 1.0 - 1e-12) return 1.5;
  return 1.5 * std::max(1.0 / safe_t, 1.0 / (1.0 - t));
}

struct EventExpansion {
  double constant = 0.0;
  std::vector<std::pair<Monomial, double>> words;
};

// P(a,b | x,y) over the independent-outcome generators via completeness:
// F_0 = G, F_1 = 1 - G for a binary measurement with generator G.
EventExpansion expand_event(const Event& e, const Scenario& scenario) {
  const auto& inputs = e.branch == Branch::Bob ? scenario.bob_inputs : scenario.ben_inputs;
  if (std::count(scenario.alice_inputs.begin(), scenario.alice_inputs.end(), e.x) == 0 ||
      std::count(inputs.begin(), inputs.end(), e.y) == 0)
    throw std::invalid_argument("constraint references event absent from the scenario: " +
                                to_string(e));
  const auto& a_alph = scenario.alice_outcomes.at(e.x);
  const auto& b_alph =
      e.branch == Branch::Bob ? scenario.bob_outcomes.at(e.y) : scenario.ben_outcomes.at(e.y);
  if (a_alph.regular != 2 || b_alph.regular != 2)
    throw std::invalid_argument("only binary test alphabets are supported in the relaxation");
  if (e.a < 0 || e.a >= a_alph.regular || e.b < 0 || e.b >= b_alph.regular)
    throw std::invalid_argument("constraint references event absent from the scenario: " +
                                to_string(e));

  const Monomial ga = Monomial::single(alice_op(e.x));
  const Monomial gb =
      Monomial::single(e.branch == Branch::Bob ? bob_op(e.y) : ben_op(e.y));
  const Monomial gab = ga * gb;

  EventExpansion out;
  if (e.a == 0 && e.b == 0) {
    out.words = {{gab, 1.0}};
  } else if (e.a == 0 && e.b == 1) {
    out.words = {{ga, 1.0}, {gab, -1.0}};
  } else if (e.a == 1 && e.b == 0) {
    out.words = {{gb, 1.0}, {gab, -1.0}};
  } else {
    out.constant = 1.0;
    out.words = {{ga, -1.0}, {gb, -1.0}, {gab, 1.0}};
  }
  return out;
}

}  // namespace

double EntropyProgram::objective_value(const std::vector<double>& moment_values) const {
  if (moment_values.size() != moments.size())
    throw std::invalid_argument("objective_value: moment vector size mismatch");
  double v = objective_constant;
  for (std::size_t k = 0; k < moments.size(); ++k) v += objective[k] * moment_values[k];
  return v;
}

EntropyProgram build_program(const Scenario& scenario,
                             const std::vector<ConstraintFunctional>& targets, double q,
                             const LevelSpec& level, int m, const BuildOptions& options) {
  scenario.validate();
  if (!(q >= 0.0 && q <= 0.5))
    throw std::invalid_argument("build_program: q must lie in [0,1/2]");
  if (m < 1) throw std::invalid_argument("build_program: quadrature size must be >= 1");

  EntropyProgram prog;
  prog.scenario = scenario;
  prog.level = level;
  prog.level.z_nodes = m;
  prog.quadrature = gauss_radau(m);
  prog.preprocessing_q = q;
  prog.tolerance_delta = scenario.tolerance_delta;
  prog.diag_bounds = options.diag_bounds;

  // Expand the constraint functionals first so generator usage is known
  // for pruning.
  struct ExpandedConstraint {
    std::string name;
    std::map<Monomial, double> words;
    double target;
  };
  std::vector<ExpandedConstraint> expanded;
  std::set<Generator> used;
  const int key_input = scenario.generation_inputs.first;
  used.insert(alice_op(key_input));
  for (const auto& f : targets) {
    ExpandedConstraint ec;
    ec.name = f.name;
    ec.target = f.target;
    for (const auto& [event, coeff] : f.terms) {
      EventExpansion ex = expand_event(event, scenario);
      ec.target -= coeff * ex.constant;
      for (const auto& [word, wcoeff] : ex.words) {
        ec.words[word] += coeff * wcoeff;
        for (const Generator& g : word.word()) used.insert(g);
      }
    }
    expanded.push_back(std::move(ec));
  }

  GeneratorSet gens = generator_set(scenario, m);
  if (options.prune_unused_generators) {
    auto keep = [&used](std::vector<Generator>& v) {
      std::erase_if(v, [&used](const Generator& g) { return used.count(g) == 0; });
    };
    keep(gens.bob);
    keep(gens.ben);
    std::erase_if(gens.alice, [&](const Generator& g) {
      return used.count(g) == 0 && g.input != key_input;
    });
  }
  gens.key_input = key_input;

  LevelSpec basis_spec = prog.level;
  prog.basis = monomial_basis(gens, basis_spec);
  const int n = prog.n();

  // Moment variables: canonical words up to adjoint equivalence.
  auto class_rep = [](const Monomial& w) {
    Monomial adj = w.adjoint();
    return adj < w ? adj : w;
  };
  auto intern = [&prog, &class_rep](const Monomial& w) {
    const Monomial rep = class_rep(w);
    auto it = prog.moment_id.find(rep);
    if (it != prog.moment_id.end()) return it->second;
    const int id = static_cast<int>(prog.moments.size());
    prog.moments.push_back(rep);
    prog.moment_id.emplace(rep, id);
    return id;
  };

  prog.entry_class = Eigen::MatrixXi::Constant(n, n, -1);
  for (int r = 0; r < n; ++r) {
    const Monomial row_adj = prog.basis[r].adjoint();
    for (int c = r; c < n; ++c) {
      const Monomial w = row_adj * prog.basis[c];
      if (w.is_zero()) continue;  // stays -1: pinned to zero
      const int id = intern(w);
      prog.entry_class(r, c) = id;
      prog.entry_class(c, r) = id;
    }
  }

  const int num_vars = static_cast<int>(prog.moments.size());
  prog.objective.assign(num_vars, 0.0);
  prog.moment_abs_bound.assign(num_vars, 1.0);  // unit-norm generators after rescaling

  auto lookup = [&prog, &class_rep](const Monomial& w) {
    auto it = prog.moment_id.find(class_rep(w));
    if (it == prog.moment_id.end())
      throw std::logic_error("objective/constraint word missing from moment matrix: " +
                             w.render());
    return it->second;
  };

  // Quadrature-expanded objective.
  prog.z_scale.resize(m);
  const Monomial a_key = Monomial::single(alice_op(key_input));
  double cm = 0.0;
  for (int node = 1; node <= m; ++node) {
    const double t = prog.quadrature.nodes[node - 1];
    const double wgt = prog.quadrature.weights[node - 1];
    const double cnode = wgt / (t * kLn2);
    const double kappa = z_operator_scale(t);
    prog.z_scale[node - 1] = kappa;
    cm += cnode;
    for (int key = 0; key < 2; ++key) {
      // Abar = (1-q) A^{key} + q A^{1-key} = qc * 1 + sc * A^{0|x*}.
      const double qc = key == 0 ? q : 1.0 - q;
      const double sc = key == 0 ? 1.0 - 2.0 * q : -(1.0 - 2.0 * q);
      const Monomial z = Monomial::single(z_op(key, node));
      const Monomial zdag = Monomial::single(zdag_op(key, node));
      const Monomial zdz = zdag * z;
      const Monomial zzd = z * zdag;
      // <Abar (Z + Z*)>: the two words form one adjoint class.
      prog.objective[lookup(z)] += 2.0 * cnode * kappa * qc;
      prog.objective[lookup(a_key * z)] += 2.0 * cnode * kappa * sc;
      // (1-t) <Abar Z* Z>.
      prog.objective[lookup(zdz)] += cnode * (1.0 - t) * kappa * kappa * qc;
      prog.objective[lookup(a_key * zdz)] += cnode * (1.0 - t) * kappa * kappa * sc;
      // t <Z Z*>.
      prog.objective[lookup(zzd)] += cnode * t * kappa * kappa;
    }
  }
  prog.objective_constant = cm;

  // Normalization first, then the statistics rows.
  EntropyProgram::Constraint norm;
  norm.name = "normalization";
  norm.terms = {{lookup(Monomial::identity()), 1.0}};
  norm.target = 1.0;
  prog.constraints.push_back(std::move(norm));
  for (const auto& ec : expanded) {
    EntropyProgram::Constraint con;
    con.name = ec.name;
    con.target = ec.target;
    for (const auto& [word, coeff] : ec.words) {
      if (coeff == 0.0) continue;
      con.terms.emplace_back(lookup(word), coeff);
    }
    prog.constraints.push_back(std::move(con));
  }

  return prog;
}

BoundResult lower_bound(const EntropyProgram& program, const SolveSettings& settings) {
  const ConicProblem conic = to_conic(program);
  const SolveResult sol = solve_conic(conic, settings);

  BoundResult out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.primal_objective = sol.primal_objective;
  out.dual_objective = sol.dual_objective;
  out.gap = sol.gap;
  out.message = sol.message;

  if (sol.status == SolveStatus::Infeasible) {
    out.h = 0.0;
    out.certified_raw = -std::numeric_limits<double>::infinity();
    out.message = "infeasible statistics targets (non-quantum or relaxation level too low): " +
                  sol.message;
    return out;
  }

  const DualCertificate cert = certify_dual(conic, sol);
  out.certified_raw = cert.certified_value;
  out.certificate_penalty = cert.penalty;
  out.dual_slack_min_eig = cert.lambda_min;
  // The conditional entropy of a classical bit is nonnegative, so 0 is
  // always a sound lower bound.
  out.h = std::max(0.0, cert.certified_value);
  return out;
}

}  // namespace rbell
