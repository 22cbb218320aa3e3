#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rbell/conic.hpp"

using namespace rbell;

namespace {

ConicProblem tiny_problem() {
  // minimize x11 + x22 s.t. x11 + x22 = 1, x12 = 0.25, X psd.
  ConicProblem p;
  p.psd_dim = 2;
  p.objective_psd.add(0, 0, 1.0);
  p.objective_psd.add(1, 1, 1.0);
  ConicProblem::Row trace;
  trace.psd.add(0, 0, 1.0);
  trace.psd.add(1, 1, 1.0);
  trace.rhs = 1.0;
  p.rows.push_back(trace);
  ConicProblem::Row off;
  off.psd.add(0, 1, 0.5);  // functional coefficient 1 on x12
  off.rhs = 0.25;
  p.rows.push_back(off);
  p.trace_bound = 1.0;
  return p;
}

}  // namespace

TEST_CASE("sdpa text layout for a one-block problem") {
  std::ostringstream out;
  export_sdpa(tiny_problem(), out);
  const std::string expected =
      "2\n"
      "1\n"
      "2\n"
      "1 0.25\n"
      "0 1 1 1 -1\n"
      "0 1 2 2 -1\n"
      "1 1 1 1 1\n"
      "1 1 2 2 1\n"
      "2 1 1 2 0.5\n";
  CHECK(out.str() == expected);
}

TEST_CASE("repeated exports are byte-identical") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::CoarseGrained);
  const auto funcs = coarse_functionals(sc, 0.01, 0.85);
  const EntropyProgram prog = build_program(sc, funcs, 0.05, LevelSpec::parse("2+mz+zz"), 2);
  const ConicProblem conic = to_conic(prog);
  std::ostringstream a, b;
  export_sdpa(conic, a);
  export_sdpa(conic, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().size() > 1000);
}

TEST_CASE("diagonal block for slack coordinates") {
  Scenario sc = build_routed_chsh_scenario(ConstraintMode::CoarseGrained);
  sc.tolerance_delta = 1e-4;
  const auto funcs = coarse_functionals(sc, 0.01, 0.85);
  const EntropyProgram prog = build_program(sc, funcs, 0.0, LevelSpec::parse("1"), 1);
  const ConicProblem conic = to_conic(prog);
  REQUIRE(conic.lin_dim > 0);
  std::ostringstream out;
  export_sdpa(conic, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // constraint count
  std::getline(in, line);
  CHECK(line == "2");  // psd block + diagonal block
  std::getline(in, line);
  CHECK(line == std::to_string(conic.psd_dim) + " -" + std::to_string(conic.lin_dim));
}

TEST_CASE("external solver agrees with the embedded one") {
  // Solve a small entropy program with the embedded solver and hand the
  // exported file to cvxopt through the bundled reader script.
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::CoarseGrained);
  const auto funcs = coarse_functionals(sc, 0.05, 0.8);
  const EntropyProgram prog = build_program(sc, funcs, 0.0, LevelSpec::parse("1"), 1);
  const ConicProblem conic = to_conic(prog);
  SolveSettings settings;
  const SolveResult res = solve_conic(conic, settings);
  REQUIRE(res.status == SolveStatus::Optimal);

  const std::string dat = "cross_check_tmp.dat-s";
  const std::string out = "cross_check_tmp.out";
  export_sdpa(conic, dat);
  const std::string cmd = std::string("python3 ") + RBELL_TEST_DIR +
                          "/cross_check_sdpa.py " + dat + " > " + out + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc == 0);
  std::ifstream in(out);
  double external = 0.0;
  REQUIRE(static_cast<bool>(in >> external));
  // The file encodes max tr(F0 Y) with F0 = -C: the external optimum is
  // the negated minimum (constant excluded).
  const double embedded = res.primal_objective - conic.objective_constant;
  CHECK(external == doctest::Approx(-embedded).epsilon(2e-5));
  std::remove(dat.c_str());
  std::remove(out.c_str());
}
