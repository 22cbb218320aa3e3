#include "rbell/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace rbell;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("honest embedding matches the honest model at unit efficiency") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  const HonestParams params = HonestParams::ideal();
  const ExplicitStrategy strat = honest_strategy(params);
  const ProbabilityTables direct = honest_statistics(params, sc);
  const ProbabilityTables via_strategy = strategy_statistics(strat, sc);

  for (int x : sc.alice_inputs) {
    for (int y : sc.bob_inputs)
      CHECK((via_strategy.bob_branch.at({x, y}) -
             direct.bob_branch.at({x, y}).leftCols(2))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    for (int y : sc.ben_inputs)
      CHECK((via_strategy.ben_branch.at({x, y}) - direct.ben_branch.at({x, y}))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
  }
}

TEST_CASE("strategy invariants are validated by name") {
  const HonestParams params = HonestParams::ideal();
  SUBCASE("bad state trace") {
    ExplicitStrategy s = honest_strategy(params);
    s.sigma *= 2.0;
    try {
      s.validate();
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("trace") != std::string::npos);
    }
  }
  SUBCASE("non-isometric attack") {
    ExplicitStrategy s = honest_strategy(params);
    s.attack(0, 0) = 2.0;
    try {
      s.validate();
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("isometry") != std::string::npos);
    }
  }
  SUBCASE("POVM not summing to identity") {
    ExplicitStrategy s = honest_strategy(params);
    s.ben_povm[0][1] *= 0.5;
    try {
      s.validate();
      FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("identity") != std::string::npos);
    }
  }
}

TEST_CASE("purifying Eve and maximal local CHSH") {
  // Maximally entangled A-Bnear pair with trivial (product) Eve reaches
  // the quantum maximum of the local game.
  HonestParams params = HonestParams::ideal();
  const ExplicitStrategy strat = honest_strategy(params);
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  const ProbabilityTables t = strategy_statistics(strat, sc);
  double win = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) win += 0.25 * t.ben(a, b, x, y);
  CHECK(win == doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-12));
}

TEST_CASE("strategy entropy limits") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  SUBCASE("product Eve with a uniform key bit gives one bit") {
    HonestParams params = HonestParams::ideal();  // theta = pi/4: uniform key marginal
    const ExplicitStrategy strat = honest_strategy(params);
    CHECK(strategy_entropy(strat, sc, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("Eve holding a perfect copy gives zero bits") {
    ExplicitStrategy s;
    s.dim_a = 2;
    s.dim_bnear = 2;
    s.dim_bfar = 2;
    s.dim_e = 2;
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(8, 8);
    // (|0 0 0> <...| + |1 1 1> <...|) / 2: classical copies everywhere.
    sigma(0, 0) = 0.5;
    sigma(7, 7) = 0.5;
    s.sigma = sigma;
    s.attack = Eigen::MatrixXcd::Identity(4, 4);
    for (int x = 0; x < 2; ++x) {
      s.alice_povm.push_back({planar_projector(0.0, 0), planar_projector(0.0, 1)});
      s.ben_povm.push_back({planar_projector(0.0, 0), planar_projector(0.0, 1)});
    }
    for (int y = 0; y < 3; ++y)
      s.bob_povm.push_back({planar_projector(0.0, 0), planar_projector(0.0, 1)});
    CHECK(strategy_entropy(s, sc, 0.0) == doctest::Approx(0.0).epsilon(1e-10));
    SUBCASE("full preprocessing noise restores one bit") {
      CHECK(strategy_entropy(s, sc, 0.5) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("entropy is nondecreasing in q") {
      double prev = -1.0;
      for (double q : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double h = strategy_entropy(s, sc, q);
        CHECK(h >= prev - 1e-12);
        prev = h;
      }
    }
  }
}

TEST_CASE("random strategies produce normalized tables and bounded entropy") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  std::mt19937_64 rng(20250501);
  for (int trial = 0; trial < 10; ++trial) {
    const ExplicitStrategy s = random_strategy(sc, rng);
    const ProbabilityTables t = strategy_statistics(s, sc);
    for (const auto& [key, table] : t.bob_branch) {
      CHECK(table.sum() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(table.minCoeff() > -1e-10);
    }
    for (const auto& [key, table] : t.ben_branch) {
      CHECK(table.sum() == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(table.minCoeff() > -1e-10);
    }
    const double h = strategy_entropy(s, sc, 0.0);
    CHECK(h >= -1e-10);
    CHECK(h <= 1.0 + 1e-10);
  }
}

TEST_CASE("an attack that swaps the routed register to Eve zeroes the entropy") {
  // sigma: maximally entangled A-Bnear, Eve in |0>. The attack swaps
  // Bnear and E, so Eve ends up holding the half entangled with Alice
  // while Bob receives the stale |0>.
  ExplicitStrategy s;
  s.dim_a = 2;
  s.dim_bnear = 2;
  s.dim_bfar = 2;
  s.dim_e = 2;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  // (|00> + |11>)/sqrt2 on A,Bnear tensored with |0>_E.
  psi(0) = 1.0 / std::sqrt(2.0);  // |0 0 0>
  psi(6) = 1.0 / std::sqrt(2.0);  // |1 1 0>
  s.sigma = psi * psi.adjoint();
  Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  s.attack = swap;
  for (int x = 0; x < 2; ++x) {
    s.alice_povm.push_back({planar_projector(0.0, 0), planar_projector(0.0, 1)});
    s.ben_povm.push_back({planar_projector(0.0, 0), planar_projector(0.0, 1)});
  }
  for (int y = 0; y < 3; ++y)
    s.bob_povm.push_back({planar_projector(0.0, 0), planar_projector(0.0, 1)});

  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  CHECK(strategy_entropy(s, sc, 0.0) == doctest::Approx(0.0).epsilon(1e-10));
  // Bob's received register is now uncorrelated with Alice.
  const ProbabilityTables t = strategy_statistics(s, sc);
  const double p_agree = t.bob(0, 0, 0, 2) + t.bob(1, 1, 0, 2);
  CHECK(p_agree == doctest::Approx(0.5).epsilon(1e-10));
}
