#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qpair/micro.hpp"
#include "qpair/observables.hpp"
#include "qpair/rng.hpp"

using namespace qpair;

namespace {

constexpr double kPi = std::numbers::pi;

// Two-configuration environment with per-site chi values chosen directly.
MicroModel two_point_model(double omega, double chiA, double chiB) {
  MicroModel m;
  m.omega = omega;
  m.hA.resize(2, 2);
  m.hB.resize(2, 2);
  m.hA << chiA, -chiA, 0.0, 0.0;  // chi_A = (+chiA, -chiA)
  m.hB << chiB, -chiB, 0.0, 0.0;
  m.weights = Eigen::VectorXd::Constant(2, 0.5);
  m.phases = Eigen::VectorXd::Zero(2);
  m.energies = Eigen::VectorXd::Zero(2);
  return m;
}

}  // namespace

TEST_CASE("gamma is one when both rows coincide") {
  MicroModel m = random_model(0.8, 3, 5);
  m.hA.row(1) = m.hA.row(0);
  for (double t : {0.0, 0.3, 2.7, 11.0}) {
    CHECK(std::abs(gamma(m, Site::A, t) - Complex(1.0, 0.0)) < 1e-14);
  }
}

TEST_CASE("gamma of a single configuration is a pure phase") {
  MicroModel m;
  m.omega = 1.0;
  m.hA.resize(2, 1);
  m.hB.resize(2, 1);
  m.hA << 0.9, 0.2;  // chi_A = 0.7
  m.hB << 0.0, 0.0;
  m.weights = Eigen::VectorXd::Constant(1, 1.0);
  m.phases = Eigen::VectorXd::Zero(1);
  m.energies = Eigen::VectorXd::Zero(1);
  const double c = 0.7;
  for (double t : {0.1, 1.0, 4.0}) {
    const Complex g = gamma(m, Site::A, t);
    CHECK(std::abs(g - std::exp(Complex(0.0, -c * t))) < 1e-14);
    CHECK(std::abs(std::abs(g) - 1.0) < 1e-14);
  }
}

TEST_CASE("gamma of a symmetric two-point distribution is a cosine") {
  const double c = 1.3;
  const MicroModel m = two_point_model(0.5, c, 0.4);
  for (double t : {0.0, 0.2, 1.0, 3.5}) {
    CHECK(std::abs(gamma(m, Site::A, t) - Complex(std::cos(c * t), 0.0)) < 1e-14);
  }
  CHECK(std::abs(gamma(m, Site::A, 0.0) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("lambda_pm reference cases") {
  {
    MicroModel m = random_model(0.5, 3, 17);
    m.hA.row(1) = m.hA.row(0);
    m.hB.row(1) = m.hB.row(0);
    for (double t : {0.4, 2.0})
      CHECK(std::abs(lambda_pm(m, +1, t) - Complex(1.0, 0.0)) < 1e-14);
  }
  {
    // chi_B = -chi_A: the plus combination cancels identically.
    MicroModel m = random_model(0.5, 4, 19);
    m.hB.row(0) = m.hA.row(1);
    m.hB.row(1) = m.hA.row(0);
    for (double t : {0.3, 1.7})
      CHECK(std::abs(lambda_pm(m, +1, t) - Complex(1.0, 0.0)) < 1e-13);
  }
  {
    const double c = 0.9;
    const MicroModel m = two_point_model(0.5, c, c);
    for (double t : {0.2, 1.1}) {
      CHECK(std::abs(lambda_pm(m, +1, t) - Complex(std::cos(2.0 * c * t), 0.0)) < 1e-14);
      CHECK(std::abs(lambda_pm(m, -1, t) - Complex(1.0, 0.0)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(lambda_pm(two_point_model(0.5, 1.0, 1.0), 2, 0.1),
                  std::invalid_argument);
}

TEST_CASE("reduced_state at t=0 is the plus-state projector") {
  const MicroModel m = random_model(1.1, 5, 23);
  const DensityMatrix rho = reduced_state(m, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(rho(i, j) - Complex(0.25, 0.0)) < 1e-15);
}

TEST_CASE("decoupled reduced_state reproduces the isolated concurrence") {
  const MicroModel m = isolated_model(0.8);
  for (int i = 0; i <= 40; ++i) {
    const double t = i * (kPi / (2.0 * 0.8)) / 40.0;
    const DensityMatrix rho = reduced_state(m, t);
    CHECK(std::abs(concurrence(rho) - isolated_concurrence(0.8, t)) < 1e-10);
    CHECK(std::abs(purity(rho) - 1.0) < 1e-12);
  }
}

TEST_CASE("reduced_state equals the brute-force oracle") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const MicroModel m = random_model(0.7, 5, seed);
    for (double t : {0.1, 0.5, 1.0}) {
      CHECK(max_abs(reduced_state(m, t) - brute_force_reduced_state(m, t)) < 1e-10);
    }
  }
}

TEST_CASE("reduced_state diagonal never moves") {
  const MicroModel m = random_model(1.3, 6, 31);
  for (double t : {0.05, 0.9, 4.2}) {
    const DensityMatrix rho = reduced_state(m, t);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rho(i, i) - Complex(0.25, 0.0)) < 1e-14);
  }
}

TEST_CASE("brute force ignores environment self-energies") {
  MicroModel m = random_model(0.9, 5, 37);
  const DensityMatrix base = brute_force_reduced_state(m, 0.8);
  Rng rng(101);
  for (Eigen::Index k = 0; k < m.energies.size(); ++k)
    m.energies(k) = rng.uniform(-5.0, 5.0);
  CHECK(max_abs(brute_force_reduced_state(m, 0.8) - base) < 1e-12);
}

TEST_CASE("brute force with zero Hamiltonian is static") {
  MicroModel m = random_model(0.0, 3, 41);
  m.hA.setZero();
  m.hB.setZero();
  for (double t : {0.5, 2.0}) {
    const DensityMatrix rho = brute_force_reduced_state(m, t);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(rho(i, j) - Complex(0.25, 0.0)) < 1e-13);
  }
}

TEST_CASE("brute force guards the environment dimension") {
  MicroModel m;
  m.omega = 1.0;
  const Eigen::Index big = 8192;
  m.hA = Eigen::Matrix2Xd::Zero(2, big);
  m.hB = Eigen::Matrix2Xd::Zero(2, big);
  m.weights = Eigen::VectorXd::Constant(big, 1.0 / static_cast<double>(big));
  m.phases = Eigen::VectorXd::Zero(big);
  m.energies = Eigen::VectorXd::Zero(big);
  CHECK_THROWS_AS(brute_force_reduced_state(m, 0.1), std::invalid_argument);
}

TEST_CASE("local z terms cannot change the concurrence") {
  const MicroModel m = random_model(0.85, 5, 43);
  for (double t : {0.2, 0.7, 1.4}) {
    const double base = concurrence(brute_force_reduced_state(m, t));
    const double shifted = concurrence(brute_force_reduced_state(m, t, 0.9, -1.7));
    CHECK(std::abs(base - shifted) <= 1e-10);
  }
}

TEST_CASE("mixed environment preparation gives the same reduced state") {
  const MicroModel m = random_model(0.75, 4, 47);
  CHECK(max_abs(mixed_environment_reduced_state(m, 0.7) - reduced_state(m, 0.7))
        < 1e-12);
  CHECK(max_abs(mixed_environment_reduced_state(m, 0.0) - reduced_state(m, 0.0))
        < 1e-14);
}

TEST_CASE("env_moments on reference distributions") {
  {
    MicroModel m = random_model(0.5, 3, 53);
    m.hA.row(1) = m.hA.row(0);
    m.hB.row(1) = m.hB.row(0);
    const EnvMoments mo = env_moments(m);
    CHECK(std::abs(mo.muA) < 1e-14);
    CHECK(std::abs(mo.sigmaA2) < 1e-14);
    CHECK(std::abs(mo.sigmaC2) < 1e-14);
  }
  {
    const double c = 0.8;
    const EnvMoments mo = env_moments(two_point_model(0.5, c, 0.3));
    CHECK(std::abs(mo.muA) < 1e-14);
    CHECK(mo.sigmaA2 == doctest::Approx(c * c).epsilon(1e-13));
  }
  {
    MicroModel m = random_model(0.5, 4, 59);
    m.hB = m.hA;
    const EnvMoments mo = env_moments(m);
    CHECK(mo.sigmaC2 == doctest::Approx(mo.sigmaA2).epsilon(1e-13));
    CHECK(mo.sigmaB2 == doctest::Approx(mo.sigmaA2).epsilon(1e-13));
  }
  {
    // Cauchy-Schwarz bound on the cross covariance.
    const MicroModel m = random_model(0.5, 6, 61);
    const EnvMoments mo = env_moments(m);
    CHECK(std::abs(mo.sigmaC2) <= std::sqrt(mo.sigmaA2 * mo.sigmaB2) + 1e-14);
  }
}

TEST_CASE("gaussian approximants equal the exact factors at t=0") {
  const MicroModel m = random_model(0.5, 5, 67);
  const EnvMoments mo = env_moments(m);
  const OffDiagonals od = gaussian_offdiagonals(mo, 0.0);
  CHECK(std::abs(od.gammaA - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(od.gammaB - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(od.lambdaPlus - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(od.lambdaMinus - Complex(1.0, 0.0)) < 1e-15);

  EnvMoments zero;
  const OffDiagonals all_one = gaussian_offdiagonals(zero, 7.0);
  CHECK(std::abs(all_one.gammaA - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(all_one.lambdaMinus - Complex(1.0, 0.0)) < 1e-15);
}

namespace {

// Rigorous cubic remainder for e^{-i mu t} + (e^{-v} - 1), v = sigma^2 t^2 / 2:
// |exact - approx| <= (E|y|^3/6 + |mu| sigma^2/2) t^3 + sigma^4 t^4 / 8.
double cubic_bound(const MicroModel& m, const Eigen::VectorXd& x, double t) {
  const double mu = m.weights.dot(x);
  double sigma2 = 0.0, m3 = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double y = x(k) - mu;
    sigma2 += m.weights(k) * y * y;
    m3 += m.weights(k) * std::abs(y * y * y);
  }
  const double t3 = t * t * t;
  return (m3 / 6.0 + std::abs(mu) * sigma2 / 2.0) * t3
         + sigma2 * sigma2 * t3 * t / 8.0;
}

}  // namespace

TEST_CASE("gaussian approximant error is cubic in t") {
  const MicroModel sym = two_point_model(0.5, 0.8, 0.3);
  const MicroModel skew = random_model(0.5, 5, 65);
  for (const MicroModel* m : {&sym, &skew}) {
    const EnvMoments mo = env_moments(*m);
    const Eigen::VectorXd chiA = (m->hA.row(0) - m->hA.row(1)).transpose();
    const Eigen::VectorXd chiB = (m->hB.row(0) - m->hB.row(1)).transpose();
    for (double t : {0.5, 0.1, 0.01}) {
      const OffDiagonals od = gaussian_offdiagonals(mo, t);
      CHECK(std::abs(gamma(*m, Site::A, t) - od.gammaA)
            <= cubic_bound(*m, chiA, t) + 1e-13);
      CHECK(std::abs(gamma(*m, Site::B, t) - od.gammaB)
            <= cubic_bound(*m, chiB, t) + 1e-13);
      CHECK(std::abs(lambda_pm(*m, +1, t) - od.lambdaPlus)
            <= cubic_bound(*m, chiA + chiB, t) + 1e-13);
      CHECK(std::abs(lambda_pm(*m, -1, t) - od.lambdaMinus)
            <= cubic_bound(*m, chiA - chiB, t) + 1e-13);
    }
  }
}

TEST_CASE("short-time purity prediction") {
  EnvMoments zero;
  CHECK(micro_shorttime_purity(zero, 3.0) == 1.0);

  EnvMoments sym;
  sym.sigmaA2 = 0.49;
  sym.sigmaB2 = 0.49;
  CHECK(micro_shorttime_purity(sym, 0.1)
        == doctest::Approx(1.0 - 0.49 * 0.01).epsilon(1e-14));

  // Remainder against the exact engine is higher order than t^2.
  const MicroModel m = random_model(0.9, 6, 71);
  const EnvMoments mo = env_moments(m);
  const double sigma = std::sqrt(0.5 * (mo.sigmaA2 + mo.sigmaB2));
  double previous_ratio = 1e300;
  for (double t : {1e-1 / sigma, 1e-2 / sigma, 1e-3 / sigma}) {
    const double exact = purity(reduced_state(m, t));
    const double predicted = micro_shorttime_purity(mo, t);
    const double ratio = std::abs(exact - predicted) / (t * t);
    CHECK(ratio <= previous_ratio + 1e-9);  // vanishes relative to t^2
    previous_ratio = ratio;
  }
}

TEST_CASE("gravitational model matches the closed variance formula") {
  GravitationalSpec spec;
  spec.G = 1.0;
  spec.m1 = 2.0;
  spec.m2 = 1.0;
  spec.dA = {1.0, 2.0};
  spec.dB = {1.5, 0.7};
  const GravitationalModel gm = gravitational_model(spec, true);
  CHECK(gm.predicted_sigmaA2 == doctest::Approx(0.3125).epsilon(1e-14));
  const EnvMoments mo = env_moments(gm.model);
  CHECK(std::abs(mo.sigmaA2 - gm.predicted_sigmaA2) < 1e-12);
  CHECK(std::abs(mo.sigmaB2 - gm.predicted_sigmaB2) < 1e-12);

  // N=8 with random geometry.
  Rng rng(73);
  GravitationalSpec big;
  big.G = 0.8;
  big.m1 = 1.9;
  big.m2 = 1.1;
  for (int n = 0; n < 8; ++n) {
    big.dA.push_back(rng.uniform(0.5, 3.0));
    big.dB.push_back(rng.uniform(0.5, 3.0));
  }
  const GravitationalModel gm8 = gravitational_model(big, true);
  const EnvMoments mo8 = env_moments(gm8.model);
  CHECK(std::abs(mo8.sigmaA2 - gm8.predicted_sigmaA2) < 1e-12);
  CHECK(std::abs(mo8.sigmaB2 - gm8.predicted_sigmaB2) < 1e-12);
}

TEST_CASE("equal masses freeze the environment") {
  GravitationalSpec spec;
  spec.G = 1.0;
  spec.m1 = 1.4;
  spec.m2 = 1.4;
  spec.dA = {1.0, 2.0, 0.8};
  spec.dB = {1.1, 0.9, 2.2};
  GravitationalModel gm = gravitational_model(spec, true);
  CHECK(gm.predicted_sigmaA2 == 0.0);
  const EnvMoments mo = env_moments(gm.model);
  CHECK(mo.sigmaA2 == 0.0);
  CHECK(mo.sigmaB2 == 0.0);
  // With a pair coupling switched on, dynamics reduce to the isolated pair.
  gm.model.omega = 0.6;
  for (double t : {0.3, 0.9}) {
    CHECK(std::abs(concurrence(reduced_state(gm.model, t))
                   - isolated_concurrence(0.6, t))
          < 1e-10);
    CHECK(std::abs(purity(reduced_state(gm.model, t)) - 1.0) < 1e-12);
  }
}

TEST_CASE("gravitational model guards the particle count") {
  GravitationalSpec spec;
  spec.dA.assign(13, 1.0);
  spec.dB.assign(13, 1.0);
  CHECK_THROWS_AS(gravitational_model(spec, true), std::invalid_argument);
}

TEST_CASE("isolated_concurrence reference points") {
  CHECK(isolated_concurrence(1.0, 0.0) == 0.0);
  CHECK(isolated_concurrence(0.25, kPi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(isolated_concurrence(-0.25, kPi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(isolated_concurrence(1.0, kPi / 2.0) < 1e-15);
}

TEST_CASE("short-time concurrence slope approaches 2|omega|") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL}) {
    const MicroModel m = random_model(1.2, 6, seed);
    const EnvMoments mo = env_moments(m);
    const double sigma =
        std::max(std::sqrt(mo.sigmaA2), std::sqrt(mo.sigmaB2));
    const double t = 1e-3 / std::max(std::abs(m.omega), sigma);
    const double ratio =
        concurrence(reduced_state(m, t)) / (2.0 * std::abs(m.omega) * t);
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
  }
}

TEST_CASE("validate_model rejects broken weight vectors") {
  MicroModel m = random_model(1.0, 3, 79);
  m.weights(0) += 0.5;
  CHECK_THROWS_AS(validate_model(m), std::invalid_argument);
  MicroModel n = random_model(1.0, 3, 79);
  n.weights(0) = -n.weights(0);
  CHECK_THROWS_AS(validate_model(n), std::invalid_argument);
}

TEST_CASE("random_model is deterministic in the seed") {
  const MicroModel a = random_model(0.9, 5, 1234);
  const MicroModel b = random_model(0.9, 5, 1234);
  const MicroModel c = random_model(0.9, 5, 1235);
  CHECK((a.hA - b.hA).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.phases - b.phases).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.hA - c.hA).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("rescale_to_sigma hits the target spread on both sites") {
  const MicroModel m = rescale_to_sigma(random_model(0.7, 6, 83), 0.45);
  const EnvMoments mo = env_moments(m);
  CHECK(std::sqrt(mo.sigmaA2) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(std::sqrt(mo.sigmaB2) == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("environment phases do not alter the reduced state") {
  MicroModel m = random_model(0.8, 5, 89);
  const DensityMatrix base = reduced_state(m, 0.6);
  Rng rng(10101);
  for (Eigen::Index k = 0; k < m.phases.size(); ++k)
    m.phases(k) = rng.uniform(0.0, 2.0 * kPi);
  CHECK(max_abs(reduced_state(m, 0.6) - base) < 1e-14);
  CHECK(max_abs(brute_force_reduced_state(m, 0.6) - base) < 1e-12);
}
