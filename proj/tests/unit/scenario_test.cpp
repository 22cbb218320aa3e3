#include "rbell/scenario.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "rbell/honest_model.hpp"

using namespace rbell;

TEST_CASE("routed CHSH scenario defaults") {
  for (ConstraintMode mode : {ConstraintMode::FullTable, ConstraintMode::CoarseGrained}) {
    const Scenario sc = build_routed_chsh_scenario(mode);
    CHECK(sc.alice_inputs == std::vector<int>{0, 1});
    CHECK(sc.bob_inputs == std::vector<int>{0, 1, 2});
    CHECK(sc.ben_inputs == std::vector<int>{0, 1});
    CHECK(sc.generation_inputs == std::pair<int, int>{0, 3});
    CHECK(sc.constraint_mode == mode);
    CHECK(sc.bob_outcomes.at(3).has_bot);
    CHECK_FALSE(sc.bob_outcomes.at(2).has_bot);
  }
}

TEST_CASE("scenario invariants are enforced") {
  Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  SUBCASE("generation input must stay out of the test set") {
    sc.bob_inputs.push_back(3);
    CHECK_THROWS(sc.validate());
  }
  SUBCASE("no-detection symbol confined to Bob's generation input") {
    sc.ben_outcomes[0].has_bot = true;
    CHECK_THROWS(sc.validate());
  }
  SUBCASE("alphabets must exist for every input") {
    sc.bob_outcomes.erase(1);
    CHECK_THROWS(sc.validate());
  }
}

TEST_CASE("scenario serialization round-trips") {
  Scenario sc = build_routed_chsh_scenario(ConstraintMode::CoarseGrained);
  sc.tolerance_delta = 1e-6;
  const std::string text = sc.serialize();
  const Scenario back = Scenario::deserialize(text);
  CHECK(back == sc);
  CHECK(back.hash() == sc.hash());
  // The hash reacts to content changes.
  Scenario other = sc;
  other.tolerance_delta = 0.0;
  CHECK(other.hash() != sc.hash());
}

TEST_CASE("full-table functionals from honest statistics") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  const HonestParams params = HonestParams::ideal();
  const ProbabilityTables stats = honest_statistics(params, sc);
  const auto funcs = constraint_functionals(sc, stats);

  // 2*3*2*2 Bob-branch events + 2*2*2*2 Ben-branch events.
  CHECK(funcs.size() == 40);
  for (const auto& f : funcs) {
    CHECK(f.target >= 0.0);
    CHECK(f.target <= 1.0);
  }
  // No constraint touches the generation input.
  for (const auto& f : funcs)
    for (const auto& [event, coeff] : f.terms)
      if (event.branch == Branch::Bob) CHECK(event.y != 3);

  // Per input pair the targets sum to one.
  for (int x : sc.alice_inputs) {
    for (int y : sc.bob_inputs) {
      double sum = 0.0;
      for (const auto& f : funcs)
        for (const auto& [event, coeff] : f.terms)
          if (event.branch == Branch::Bob && event.x == x && event.y == y) sum += f.target;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int y : sc.ben_inputs) {
      double sum = 0.0;
      for (const auto& f : funcs)
        for (const auto& [event, coeff] : f.terms)
          if (event.branch == Branch::Ben && event.x == x && event.y == y) sum += f.target;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("coarse-grained functionals") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::CoarseGrained);
  const HonestParams params = HonestParams::ideal();
  const ProbabilityTables stats = honest_statistics(params, sc);
  const auto funcs = constraint_functionals(sc, stats);
  REQUIRE(funcs.size() == 2);
  CHECK(funcs[0].name == "phi_ph");
  CHECK(funcs[1].name == "phi_chsh");

  SUBCASE("ideal targets are (0, (2+sqrt 2)/4)") {
    CHECK(funcs[0].target == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(funcs[1].target ==
          doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-12));
  }

  SUBCASE("uniformly random outputs win CHSH half the time") {
    ProbabilityTables uniform;
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 3; ++y) uniform.bob_branch[{x, y}] = Eigen::MatrixXd::Constant(2, 2, 0.25);
      for (int y = 0; y < 2; ++y) uniform.ben_branch[{x, y}] = Eigen::MatrixXd::Constant(2, 2, 0.25);
    }
    const auto ufuncs = constraint_functionals(sc, uniform);
    CHECK(ufuncs[1].target == doctest::Approx(0.5).epsilon(1e-13));
  }

  SUBCASE("coarse targets equal the matching full-table combinations") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    std::uniform_real_distribution<double> eff(0.3, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      HonestParams p;
      p.theta = angle(rng);
      p.alice_angles = {angle(rng), angle(rng)};
      p.bob_angles = {angle(rng), angle(rng), angle(rng), angle(rng)};
      p.ben_angles = {angle(rng), angle(rng)};
      p.eta_a = eff(rng);
      p.eta_b = eff(rng);
      p.eta_bhat = eff(rng);
      const ProbabilityTables t = honest_statistics(p, sc);
      const auto coarse = constraint_functionals(sc, t);
      // Recompute the coarse targets from single-event lookups.
      double phi_ph = t.bob(0, 1, 1, 2) + t.bob(1, 0, 1, 2);
      double phi_chsh = 0.0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              if ((a ^ b) == (x & y)) phi_chsh += 0.25 * t.ben(a, b, x, y);
      CHECK(coarse[0].target == doctest::Approx(phi_ph).epsilon(1e-12));
      CHECK(coarse[1].target == doctest::Approx(phi_chsh).epsilon(1e-12));
    }
  }
}

TEST_CASE("missing statistics entries are rejected with the event named") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  ProbabilityTables partial;
  partial.bob_branch[{0, 0}] = Eigen::MatrixXd::Constant(2, 2, 0.25);
  try {
    constraint_functionals(sc, partial);
    FAIL("expected a missing-event rejection");
  } catch (const std::invalid_argument& err) {
    CHECK(std::string(err.what()).find("P(") != std::string::npos);
  }
}

TEST_CASE("explicit coarse targets") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::CoarseGrained);
  const auto funcs = coarse_functionals(sc, 0.03, 0.82);
  REQUIRE(funcs.size() == 2);
  CHECK(funcs[0].target == 0.03);
  CHECK(funcs[1].target == 0.82);
  CHECK(funcs[1].terms.size() == 8);  // winning events of the CHSH game
}

TEST_CASE("generator set derives from the scenario") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  const GeneratorSet gens = generator_set(sc, 3);
  CHECK(gens.alice.size() == 2);
  CHECK(gens.bob.size() == 3);
  CHECK(gens.ben.size() == 2);
  CHECK(gens.z_nodes == 3);
  CHECK(gens.key_input == 0);
  CHECK(gens.z_generators().size() == 12);
}
