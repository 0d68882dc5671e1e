#include "qpair/micro.hpp"

#include <cmath>
#include <stdexcept>

#include "qpair/rng.hpp"

namespace qpair {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

double chi(const MicroModel& model, Site site, Eigen::Index k) {
  const Eigen::Matrix2Xd& h = site == Site::A ? model.hA : model.hB;
  return h(0, k) - h(1, k);
}

}  // namespace

void validate_model(const MicroModel& model) {
  const Eigen::Index m = model.env_dim();
  if (m < 1) throw std::invalid_argument("environment dimension must be >= 1");
  if (model.hA.cols() != m || model.hB.cols() != m || model.phases.size() != m
      || model.energies.size() != m)
    throw std::invalid_argument("model arrays disagree on the environment dimension");
  if (!model.hA.allFinite() || !model.hB.allFinite() || !model.weights.allFinite()
      || !model.phases.allFinite() || !model.energies.allFinite()
      || !std::isfinite(model.omega))
    throw std::invalid_argument("model entries must be finite");
  if (model.weights.minCoeff() < 0.0)
    throw std::invalid_argument("weights must be nonnegative");
  if (std::abs(model.weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("weights must sum to 1");
}

Complex gamma(const MicroModel& model, Site site, double t) {
  Complex sum = 0.0;
  for (Eigen::Index k = 0; k < model.env_dim(); ++k)
    sum += model.weights(k) * std::exp(-kI * chi(model, site, k) * t);
  return sum;
}

Complex lambda_pm(const MicroModel& model, int sign, double t) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  Complex sum = 0.0;
  for (Eigen::Index k = 0; k < model.env_dim(); ++k) {
    const double exponent = chi(model, Site::A, k) + sign * chi(model, Site::B, k);
    sum += model.weights(k) * std::exp(-kI * exponent * t);
  }
  return sum;
}

DensityMatrix reduced_state(const MicroModel& model, double t) {
  const Complex gA = gamma(model, Site::A, t);
  const Complex gB = gamma(model, Site::B, t);
  const Complex lp = lambda_pm(model, +1, t);
  const Complex lm = lambda_pm(model, -1, t);
  const Complex p = std::exp(2.0 * kI * model.omega * t);

  DensityMatrix rho;
  rho(0, 0) = 1.0;
  rho(0, 1) = p * gB;
  rho(0, 2) = p * gA;
  rho(0, 3) = lp;
  rho(1, 1) = 1.0;
  rho(1, 2) = lm;
  rho(1, 3) = std::conj(p) * gA;
  rho(2, 2) = 1.0;
  rho(2, 3) = std::conj(p) * gB;
  rho(3, 3) = 1.0;
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) rho(i, j) = std::conj(rho(j, i));
  return rho / 4.0;
}

DensityMatrix brute_force_reduced_state(const MicroModel& model, double t,
                                        double cA, double cB) {
  validate_model(model);
  const Eigen::Index m = model.env_dim();
  if (m > 4096) throw std::invalid_argument("brute force limited to environment dimension 4096");

  // z eigenvalue +1 on qubit state index 0.
  const double z[2] = {1.0, -1.0};
  // psi[(i, j), k] amplitudes of |a_i b_j> |e_k> at time t.
  Eigen::MatrixXcd psi(4, m);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const double energy = -model.omega * z[i] * z[j] + cA * z[i] + cB * z[j]
                              + model.hA(i, k) + model.hB(j, k) + model.energies(k);
        const Complex amplitude =
            0.5 * std::sqrt(model.weights(k)) * std::exp(kI * model.phases(k));
        psi(2 * i + j, k) = amplitude * std::exp(-kI * energy * t);
      }
    }
  }

  DensityMatrix rho = DensityMatrix::Zero();
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col)
      for (Eigen::Index k = 0; k < m; ++k)
        rho(row, col) += psi(row, k) * std::conj(psi(col, k));
  return rho;
}

DensityMatrix mixed_environment_reduced_state(const MicroModel& model, double t) {
  validate_model(model);
  const Eigen::Index m = model.env_dim();
  DensityMatrix rho = DensityMatrix::Zero();
  for (Eigen::Index k = 0; k < m; ++k) {
    MicroModel single = model;
    single.weights = Eigen::VectorXd::Zero(m);
    single.weights(k) = 1.0;
    single.phases = Eigen::VectorXd::Zero(m);
    rho += model.weights(k) * brute_force_reduced_state(single, t);
  }
  return rho;
}

EnvMoments env_moments(const MicroModel& model) {
  validate_model(model);
  EnvMoments mom;
  for (Eigen::Index k = 0; k < model.env_dim(); ++k) {
    mom.muA += model.weights(k) * chi(model, Site::A, k);
    mom.muB += model.weights(k) * chi(model, Site::B, k);
  }
  for (Eigen::Index k = 0; k < model.env_dim(); ++k) {
    const double dA = chi(model, Site::A, k) - mom.muA;
    const double dB = chi(model, Site::B, k) - mom.muB;
    mom.sigmaA2 += model.weights(k) * dA * dA;
    mom.sigmaB2 += model.weights(k) * dB * dB;
    mom.sigmaC2 += model.weights(k) * dA * dB;
  }
  return mom;
}

OffDiagonals gaussian_offdiagonals(const EnvMoments& m, double t) {
  OffDiagonals d;
  d.gammaA = std::exp(-kI * m.muA * t) + (std::exp(-m.sigmaA2 * t * t / 2.0) - 1.0);
  d.gammaB = std::exp(-kI * m.muB * t) + (std::exp(-m.sigmaB2 * t * t / 2.0) - 1.0);
  const double vPlus = m.sigmaA2 + m.sigmaB2 + 2.0 * m.sigmaC2;
  const double vMinus = m.sigmaA2 + m.sigmaB2 - 2.0 * m.sigmaC2;
  d.lambdaPlus = std::exp(-kI * (m.muA + m.muB) * t) + (std::exp(-vPlus * t * t / 2.0) - 1.0);
  d.lambdaMinus = std::exp(-kI * (m.muA - m.muB) * t) + (std::exp(-vMinus * t * t / 2.0) - 1.0);
  return d;
}

double micro_shorttime_purity(const EnvMoments& m, double t) {
  return 1.0 - ((m.sigmaA2 + m.sigmaB2) / 2.0) * t * t;
}

GravitationalModel gravitational_model(const GravitationalSpec& spec,
                                       bool uniform_weights, std::uint64_t seed) {
  const std::size_t n = spec.dA.size();
  if (n == 0 || spec.dB.size() != n)
    throw std::invalid_argument("distance lists must be nonempty and equal length");
  if (n > 12) throw std::invalid_argument("gravitational model limited to 12 particles");
  for (std::size_t i = 0; i < n; ++i)
    if (!(spec.dA[i] > 0.0) || !(spec.dB[i] > 0.0))
      throw std::invalid_argument("distances must be positive");

  const Eigen::Index m = Eigen::Index{1} << n;
  MicroModel model;
  model.omega = 0.0;
  model.hA.resize(2, m);
  model.hB.resize(2, m);
  const double mass[2] = {spec.m1, spec.m2};
  for (Eigen::Index k = 0; k < m; ++k) {
    double sumA = 0.0, sumB = 0.0;
    for (std::size_t bit = 0; bit < n; ++bit) {
      const double mEnv = mass[(k >> bit) & 1];
      sumA += mEnv / spec.dA[bit];
      sumB += mEnv / spec.dB[bit];
    }
    for (int i = 0; i < 2; ++i) {
      model.hA(i, k) = -spec.G * mass[i] * sumA;
      model.hB(i, k) = -spec.G * mass[i] * sumB;
    }
  }

  if (uniform_weights) {
    model.weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  } else {
    Rng rng(seed);
    std::vector<double> w = rng.simplex(static_cast<int>(m));
    model.weights = Eigen::Map<Eigen::VectorXd>(w.data(), m);
  }
  model.phases = Eigen::VectorXd::Zero(m);
  model.energies = Eigen::VectorXd::Zero(m);

  double invA2 = 0.0, invB2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    invA2 += 1.0 / (spec.dA[i] * spec.dA[i]);
    invB2 += 1.0 / (spec.dB[i] * spec.dB[i]);
  }
  const double dm = spec.m1 - spec.m2;
  const double common = spec.G * spec.G / 4.0 * dm * dm * dm * dm;

  GravitationalModel out;
  out.model = std::move(model);
  out.predicted_sigmaA2 = common * invA2;
  out.predicted_sigmaB2 = common * invB2;
  return out;
}

double isolated_concurrence(double omega, double t) {
  const double value = std::abs(std::sin(2.0 * std::abs(omega) * t));
  return std::min(1.0, std::max(0.0, value));
}

MicroModel isolated_model(double omega) {
  MicroModel model;
  model.omega = omega;
  model.hA = Eigen::Matrix2Xd::Zero(2, 1);
  model.hB = Eigen::Matrix2Xd::Zero(2, 1);
  model.weights = Eigen::VectorXd::Ones(1);
  model.phases = Eigen::VectorXd::Zero(1);
  model.energies = Eigen::VectorXd::Zero(1);
  return model;
}

MicroModel random_model(double omega, int n_particles, std::uint64_t seed) {
  if (n_particles < 1 || n_particles > 12)
    throw std::invalid_argument("n_particles must be in [1, 12]");
  const Eigen::Index m = Eigen::Index{1} << n_particles;
  Rng rng(seed);
  MicroModel model;
  model.omega = omega;
  model.hA.resize(2, m);
  model.hB.resize(2, m);
  for (int i = 0; i < 2; ++i)
    for (Eigen::Index k = 0; k < m; ++k) model.hA(i, k) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < 2; ++i)
    for (Eigen::Index k = 0; k < m; ++k) model.hB(i, k) = rng.uniform(-1.0, 1.0);
  std::vector<double> w = rng.simplex(static_cast<int>(m));
  model.weights = Eigen::Map<Eigen::VectorXd>(w.data(), m);
  model.phases.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) model.phases(k) = rng.uniform(0.0, 2.0 * kPi);
  model.energies.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) model.energies(k) = rng.uniform(-1.0, 1.0);
  return model;
}

MicroModel rescale_to_sigma(const MicroModel& model, double sigma_target) {
  if (!(sigma_target > 0.0)) throw std::invalid_argument("sigma target must be positive");
  const EnvMoments mom = env_moments(model);
  if (mom.sigmaA2 <= 0.0 || mom.sigmaB2 <= 0.0)
    throw std::invalid_argument("model has no coupling spread to rescale");
  MicroModel out = model;
  out.hA *= sigma_target / std::sqrt(mom.sigmaA2);
  out.hB *= sigma_target / std::sqrt(mom.sigmaB2);
  return out;
}

}  // namespace qpair
