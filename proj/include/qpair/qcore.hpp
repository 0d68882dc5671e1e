#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>

namespace qpair {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using ComplexMatrix = Eigen::MatrixXcd;
using DensityMatrix = Matrix4;

// Two-qubit basis ordering throughout the repo: |a1 b1>, |a1 b2>, |a2 b1>,
// |a2 b2>, with sigma_z eigenvalue +1 on the first state of each site.
// Pauli index order is (0, x, y, z); two-qubit pairs (mu, nu) are indexed
// 4*mu + nu with the A site first. Both conventions are fixed here and
// relied on everywhere else.

// Real coefficients r_{mu nu} = Tr(rho sigma^mu x sigma^nu); r_{00} = 1 for
// unit-trace states.
struct PauliCoefficients {
  std::array<double, 16> r{};

  double& operator()(int mu, int nu) { return r[static_cast<std::size_t>(4 * mu + nu)]; }
  double operator()(int mu, int nu) const { return r[static_cast<std::size_t>(4 * mu + nu)]; }
};

// Diagonal pair couplings g_ij of the joint two-qubit Hamiltonian.
struct CouplingTable {
  double g11 = 0.0, g12 = 0.0, g21 = 0.0, g22 = 0.0;
};

// Linear combinations of the g_ij: identity shift, local z strengths, and
// the entangling strength omega.
struct ReducedCouplings {
  double c0 = 0.0, cA = 0.0, cB = 0.0, omega = 0.0;
};

struct EigenSystem {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXcd vectors;  // orthonormal columns, matching order
};

struct ValidationReport {
  double hermiticity_defect = 0.0;  // max |M - M^dagger|
  double trace_defect = 0.0;        // |Tr M - 1|
  double min_eigenvalue = 0.0;
  bool ok = false;
  std::string message;  // empty when ok
};

const Matrix2& pauli(int mu);
Matrix4 pauli_pair(int mu, int nu);

ReducedCouplings reduce_couplings(const CouplingTable& g);
// diag(g11, g12, g21, g22) and its expansion c0*II + cA*zI + cB*Iz - omega*zz.
Matrix4 coupling_hamiltonian(const CouplingTable& g);
Matrix4 reconstruct_hamiltonian(const ReducedCouplings& c);

PauliCoefficients pauli_decompose(const DensityMatrix& rho);
Matrix4 pauli_reconstruct(const PauliCoefficients& r);

// Cyclic Jacobi iteration for complex Hermitian matrices (any small dim).
// Rejects inputs farther than 1e-10 from Hermitian.
EigenSystem hermitian_eigensystem(const ComplexMatrix& M);

ValidationReport validate_density_matrix(const ComplexMatrix& M, double tol = 1e-10);

// Eigenvalue square roots for positive semi-definite matrices. Eigenvalues
// below 100*eps*max|eigenvalue| are mapped to exactly zero first: they are
// indistinguishable from zero at working precision, and sqrt would otherwise
// amplify that noise to the 1e-8 scale.
Eigen::VectorXd psd_sqrt_eigenvalues(const Eigen::VectorXd& eigenvalues);
ComplexMatrix psd_sqrt(const ComplexMatrix& M);

// Pade-[6/6] scaling-and-squaring matrix exponential for real square
// matrices (used on the 16x16 generator).
Eigen::MatrixXd real_expm(const Eigen::MatrixXd& A);

double max_abs(const ComplexMatrix& M);

}  // namespace qpair
