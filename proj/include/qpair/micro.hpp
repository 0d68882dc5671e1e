#pragma once

#include <cstdint>
#include <vector>

#include "qpair/qcore.hpp"

namespace qpair {

enum class Site { A, B };

// Exact microscopic description: two qubits coupled diagonally to an
// M-dimensional environment. Row i of hA/hB holds the energies h^alpha_{ik}
// paired with qubit state i; weights are |f_k|^2, phases are arg(f_k).
// Environment self-energies eps_k never influence the reduced state; they
// are kept so tests can prove exactly that.
struct MicroModel {
  double omega = 0.0;
  Eigen::Matrix2Xd hA;  // 2 x M
  Eigen::Matrix2Xd hB;  // 2 x M
  Eigen::VectorXd weights;
  Eigen::VectorXd phases;
  Eigen::VectorXd energies;

  Eigen::Index env_dim() const { return weights.size(); }
};

struct EnvMoments {
  double muA = 0.0, muB = 0.0;
  double sigmaA2 = 0.0, sigmaB2 = 0.0;
  double sigmaC2 = 0.0;
};

// Environment of N particles whose two mass states gravitationally couple to
// the qubit mass states; dA[n], dB[n] are the particle-to-qubit distances.
struct GravitationalSpec {
  double G = 1.0;
  double m1 = 2.0, m2 = 1.0;
  std::vector<double> dA, dB;
};

struct GravitationalModel {
  MicroModel model;
  double predicted_sigmaA2 = 0.0;
  double predicted_sigmaB2 = 0.0;
};

struct OffDiagonals {
  Complex gammaA, gammaB, lambdaPlus, lambdaMinus;
};

void validate_model(const MicroModel& model);

// Dephasing factor Gamma_alpha(t) = sum_k w_k exp(-i chi_{alpha,k} t) with
// chi_{alpha,k} = h^alpha_{1k} - h^alpha_{2k}.
Complex gamma(const MicroModel& model, Site site, double t);

// Lambda_pm(t) = sum_k w_k exp(-i (chi_{A,k} +/- chi_{B,k}) t); sign is +1 or -1.
Complex lambda_pm(const MicroModel& model, int sign, double t);

// Closed-form reduced state of the qubit pair at time t.
DensityMatrix reduced_state(const MicroModel& model, double t);

// Independent oracle: evolve the full 4M-dimensional product state by phase
// multiplication and partial-trace the environment. Optional local z terms
// cA, cB extend the Hamiltonian for invariance tests. Guarded at M <= 4096.
DensityMatrix brute_force_reduced_state(const MicroModel& model, double t,
                                        double cA = 0.0, double cB = 0.0);

// Environment prepared as the diagonal mixture with probabilities w_k:
// convex sum of single-basis-state brute-force runs.
DensityMatrix mixed_environment_reduced_state(const MicroModel& model, double t);

EnvMoments env_moments(const MicroModel& model);

// Short-time Gaussian approximants of Gamma_A, Gamma_B, Lambda_+/-.
OffDiagonals gaussian_offdiagonals(const EnvMoments& m, double t);

// Leading-order purity 1 - ((sigmaA^2 + sigmaB^2)/2) t^2; the cross
// covariance cancels exactly at this order.
double micro_shorttime_purity(const EnvMoments& m, double t);

// Builds the 2^N-configuration gravitational model. With uniform_weights the
// predicted variances follow the closed formula
// (G^2/4)(m1 - m2)^4 sum_n d_{n,alpha}^{-2}; otherwise weights are drawn from
// a flat simplex seeded by `seed` and the prediction (still reported) only
// applies to the equal-probability case. Guarded at N <= 12.
GravitationalModel gravitational_model(const GravitationalSpec& spec,
                                       bool uniform_weights,
                                       std::uint64_t seed = 0);

// Concurrence of the decoupled pair: |sin(2 |omega| t)|, clipped to [0, 1].
double isolated_concurrence(double omega, double t);

// Decoupled-environment model (M = 1, zero couplings).
MicroModel isolated_model(double omega);

// Random model used by property tests and the micro_random scenario:
// couplings i.i.d. uniform on [-1,1], weights flat on the simplex, phases
// uniform on [0,2pi), energies uniform on [-1,1]; M = 2^n_particles.
MicroModel random_model(double omega, int n_particles, std::uint64_t seed);

// Rescales both coupling tables so each site's chi distribution has standard
// deviation sigma_target (requires nonzero initial spread on both sites).
MicroModel rescale_to_sigma(const MicroModel& model, double sigma_target);

}  // namespace qpair
