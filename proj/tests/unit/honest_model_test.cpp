#include "rbell/honest_model.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace rbell;

namespace {
constexpr double kPi = std::numbers::pi;
const double kPhiChshMax = (2.0 + std::sqrt(2.0)) / 4.0;
}  // namespace

TEST_CASE("two-qubit state family") {
  SUBCASE("maximally entangled at pi/4") {
    const Eigen::Matrix4cd rho = two_qubit_state(kPi / 4);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
    CHECK((rho - rho.adjoint()).norm() < 1e-14);
    // Both marginals maximally mixed.
    Eigen::Matrix2cd marg = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) marg(i, j) += rho(2 * i + k, 2 * j + k);
    CHECK((marg - 0.5 * Eigen::Matrix2cd::Identity()).norm() < 1e-14);
  }
  SUBCASE("product state at 0") {
    const Eigen::Matrix4cd rho = two_qubit_state(0.0);
    CHECK(std::abs(rho(0, 0).real() - 1.0) < 1e-14);
    CHECK(rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("marginal eigenvalues at pi/8") {
    const Eigen::Matrix4cd rho = two_qubit_state(kPi / 8);
    Eigen::Matrix2cd marg = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) marg(i, j) += rho(2 * i + k, 2 * j + k);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(marg);
    // cos^2(pi/8), sin^2(pi/8) frozen from a high-precision evaluation.
    CHECK(eig.eigenvalues()(0) == doctest::Approx(0.1464466094067262).epsilon(1e-12));
    CHECK(eig.eigenvalues()(1) == doctest::Approx(0.8535533905932738).epsilon(1e-12));
  }
}

TEST_CASE("planar projectors") {
  SUBCASE("angle 0 is the computational basis") {
    CHECK((planar_projector(0.0, 0) - (Eigen::Matrix2cd() << 1, 0, 0, 0).finished()).norm() <
          1e-14);
  }
  SUBCASE("angle pi/2 outcome 0 is |+><+|") {
    Eigen::Matrix2cd plus;
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK((planar_projector(kPi / 2, 0) - plus).norm() < 1e-14);
  }
  SUBCASE("projectors sum to identity and have unit trace") {
    for (double angle : {0.1, kPi / 3, -1.2, 2.9}) {
      const Eigen::Matrix2cd p0 = planar_projector(angle, 0);
      const Eigen::Matrix2cd p1 = planar_projector(angle, 1);
      CHECK((p0 + p1 - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
      CHECK(std::abs(p0.trace().real() - 1.0) < 1e-14);
      CHECK((p0 * p0 - p0).norm() < 1e-14);
    }
  }
  SUBCASE("Bloch vector at pi/3") {
    const Eigen::Matrix2cd p = planar_projector(kPi / 3, 0);
    const double bx = 2.0 * p(0, 1).real();
    const double bz = (p(0, 0) - p(1, 1)).real();
    CHECK(bx == doctest::Approx(std::sin(kPi / 3)).epsilon(1e-14));
    CHECK(bz == doctest::Approx(std::cos(kPi / 3)).epsilon(1e-14));
  }
}

TEST_CASE("detection postprocessing") {
  Eigen::VectorXd dist(2);
  dist << 0.3, 0.7;
  SUBCASE("eta 1 is the identity") {
    const Eigen::VectorXd out = detection_postprocess(dist, 1.0, false);
    CHECK(out(0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(out(1) == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("eta 0 merges everything into outcome 0") {
    const Eigen::VectorXd out = detection_postprocess(dist, 0.0, false);
    CHECK(out(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out(1) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("merged outcome-1 mass is eta * p") {
    for (double eta : {0.9, 0.5, 0.37}) {
      const Eigen::VectorXd out = detection_postprocess(dist, eta, false);
      CHECK(out(1) == doctest::Approx(eta * 0.7).epsilon(1e-14));
      CHECK(out.sum() == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  SUBCASE("kept no-detection symbol") {
    const Eigen::VectorXd out = detection_postprocess(dist, 0.9, true);
    REQUIRE(out.size() == 3);
    CHECK(out(2) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(out(0) == doctest::Approx(0.27).epsilon(1e-14));
  }
}

namespace {

// Independent brute-force evaluation of the CHSH game value: explicit
// state-vector amplitudes and exhaustive enumeration of detector
// failures, written without the channel-matrix machinery of the library.
double chsh_brute_force(double theta, const std::array<double, 2>& alice,
                        const std::array<double, 2>& ben, double eta_a, double eta_b) {
  auto amp = [&](int i, int j) {
    return (i == 0 && j == 0) ? std::cos(theta) : ((i == 1 && j == 1) ? std::sin(theta) : 0.0);
  };
  auto eigvec = [](double angle, int outcome) {
    // +1 eigenvector of cos Z + sin X is (cos(a/2), sin(a/2)).
    const double half = angle / 2.0;
    if (outcome == 0) return std::array<double, 2>{std::cos(half), std::sin(half)};
    return std::array<double, 2>{-std::sin(half), std::cos(half)};
  };
  double win = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a_ideal = 0; a_ideal < 2; ++a_ideal) {
        for (int b_ideal = 0; b_ideal < 2; ++b_ideal) {
          const auto va = eigvec(alice[x], a_ideal);
          const auto vb = eigvec(ben[y], b_ideal);
          double overlap = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) overlap += va[i] * vb[j] * amp(i, j);
          const double p_ideal = overlap * overlap;
          // Detector failure cases: each party independently keeps its
          // outcome with probability eta, else outputs 0.
          for (int fa = 0; fa < 2; ++fa) {
            for (int fb = 0; fb < 2; ++fb) {
              const double weight = (fa ? 1 - eta_a : eta_a) * (fb ? 1 - eta_b : eta_b);
              const int a = fa ? 0 : a_ideal;
              const int b = fb ? 0 : b_ideal;
              if ((a ^ b) == (x & y)) win += 0.25 * weight * p_ideal;
            }
          }
        }
      }
    }
  }
  return win;
}

double chsh_from_tables(const ProbabilityTables& t) {
  double win = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) win += 0.25 * t.ben(a, b, x, y);
  return win;
}

}  // namespace

TEST_CASE("honest statistics") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  HonestParams params = HonestParams::ideal();

  SUBCASE("ideal CHSH value is maximal") {
    const ProbabilityTables t = honest_statistics(params, sc);
    CHECK(chsh_from_tables(t) == doctest::Approx(kPhiChshMax).epsilon(1e-12));
  }
  SUBCASE("aligned pi/2 measurements give zero qPER") {
    const ProbabilityTables t = honest_statistics(params, sc);
    const double phi_ph = t.bob(0, 1, 1, 2) + t.bob(1, 0, 1, 2);
    CHECK(phi_ph == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("lossy CHSH matches the brute-force oracle") {
    params.eta_a = 0.9;
    params.eta_bhat = 0.9;
    const ProbabilityTables t = honest_statistics(params, sc);
    const double expected =
        chsh_brute_force(params.theta, params.alice_angles, params.ben_angles, 0.9, 0.9);
    CHECK(chsh_from_tables(t) == doctest::Approx(expected).epsilon(1e-12));
    // Cross-language frozen value for the same configuration.
    CHECK(chsh_from_tables(t) == doctest::Approx(0.7888782463805518).epsilon(1e-12));
  }
  SUBCASE("all tables are normalized per input pair") {
    params.eta_a = 0.83;
    params.eta_b = 0.71;
    params.eta_bhat = 0.95;
    const ProbabilityTables t = honest_statistics(params, sc);
    for (const auto& [key, table] : t.bob_branch) {
      CHECK(table.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(table.minCoeff() >= 0.0);
    }
    for (const auto& [key, table] : t.ben_branch) {
      CHECK(table.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(table.minCoeff() >= 0.0);
    }
  }
  SUBCASE("Tsirelson bound holds across random parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> eff(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      HonestParams p;
      p.theta = angle(rng);
      p.alice_angles = {angle(rng), angle(rng)};
      p.bob_angles = {angle(rng), angle(rng), angle(rng), angle(rng)};
      p.ben_angles = {angle(rng), angle(rng)};
      p.eta_a = eff(rng);
      p.eta_b = eff(rng);
      p.eta_bhat = eff(rng);
      const ProbabilityTables t = honest_statistics(p, sc);
      CHECK(chsh_from_tables(t) <= kPhiChshMax + 1e-9);
    }
  }
}

TEST_CASE("honest conditional entropy") {
  const Scenario sc = build_routed_chsh_scenario(ConstraintMode::FullTable);
  HonestParams params = HonestParams::ideal();

  SUBCASE("perfectly correlated outputs have zero entropy") {
    CHECK(honest_conditional_entropy(params, sc) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("independent uniform outputs have unit entropy") {
    params.bob_angles[3] = kPi / 2;  // conjugate basis: outcomes independent
    CHECK(honest_conditional_entropy(params, sc) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("lossy Bob contributes his failure probability times Alice's entropy") {
    params.eta_b = 0.9;
    const double expected = 0.1 * binary_entropy(0.5);
    CHECK(honest_conditional_entropy(params, sc) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("nondecreasing in the preprocessing noise") {
    params.eta_b = 0.85;
    params.eta_a = 0.92;
    double prev = -1.0;
    for (double q : {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
      params.q = q;
      const double h = honest_conditional_entropy(params, sc);
      CHECK(h >= prev - 1e-12);
      prev = h;
    }
  }
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // Frozen from a 50-digit evaluation.
  CHECK(binary_entropy(0.11) == doctest::Approx(0.4999159581645280).epsilon(1e-12));
  CHECK_THROWS(binary_entropy(-0.01));
  CHECK_THROWS(binary_entropy(1.01));
}

TEST_CASE("closed-form bound") {
  SUBCASE("maximal CHSH with zero qPER certifies one bit") {
    CHECK(closed_form_bound(0.0, kPhiChshMax) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("beta = 2 reduces to minus the binary entropy") {
    for (double p : {0.0, 0.05, 0.11, 0.5})
      CHECK(closed_form_bound(p, 0.75) == doctest::Approx(-binary_entropy(p)).epsilon(1e-13));
  }
  SUBCASE("frozen interior value") {
    CHECK(closed_form_bound(0.05, 0.84) == doctest::Approx(0.1024990746648272).epsilon(1e-12));
  }
  SUBCASE("boundary identity holds exactly") {
    for (double p : {0.0, 0.01, 0.2, 0.37})
      CHECK(closed_form_bound(p, kPhiChshMax) ==
            doctest::Approx(1.0 - binary_entropy(p)).epsilon(1e-12));
  }
  SUBCASE("correlator above the quantum maximum is rejected") {
    CHECK_THROWS(closed_form_bound(0.0, 0.9));
    CHECK_THROWS(closed_form_bound(0.0, 0.05));  // beta^2 > 8 from below
  }
}

TEST_CASE("keyrate is the difference") {
  CHECK(keyrate(1.0, 0.0) == 1.0);
  CHECK(keyrate(0.6, 0.6) == 0.0);
  CHECK(keyrate(0.3, 0.5) == doctest::Approx(-0.2));
}
