#include "qpair/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qpair {

namespace {

constexpr Complex kI{0.0, 1.0};

std::array<Matrix2, 4> make_paulis() {
  std::array<Matrix2, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, -kI, kI, 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

double hermiticity_defect(const ComplexMatrix& M) {
  return max_abs(M - M.adjoint());
}

}  // namespace

const Matrix2& pauli(int mu) {
  static const std::array<Matrix2, 4> s = make_paulis();
  if (mu < 0 || mu > 3) throw std::invalid_argument("pauli index out of range");
  return s[static_cast<std::size_t>(mu)];
}

Matrix4 pauli_pair(int mu, int nu) {
  Matrix4 out;
  const Matrix2& a = pauli(mu);
  const Matrix2& b = pauli(nu);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

double max_abs(const ComplexMatrix& M) {
  return M.cwiseAbs().maxCoeff();
}

ReducedCouplings reduce_couplings(const CouplingTable& g) {
  for (double v : {g.g11, g.g12, g.g21, g.g22})
    if (!std::isfinite(v)) throw std::invalid_argument("coupling table entries must be finite");
  ReducedCouplings c;
  c.c0 = (g.g11 + g.g12 + g.g21 + g.g22) / 4.0;
  c.cA = (g.g11 + g.g12 - g.g21 - g.g22) / 4.0;
  c.cB = (g.g11 - g.g12 + g.g21 - g.g22) / 4.0;
  c.omega = (g.g12 + g.g21 - g.g11 - g.g22) / 4.0;
  return c;
}

Matrix4 coupling_hamiltonian(const CouplingTable& g) {
  Matrix4 h = Matrix4::Zero();
  h(0, 0) = g.g11;
  h(1, 1) = g.g12;
  h(2, 2) = g.g21;
  h(3, 3) = g.g22;
  return h;
}

Matrix4 reconstruct_hamiltonian(const ReducedCouplings& c) {
  return c.c0 * pauli_pair(0, 0) + c.cA * pauli_pair(3, 0) + c.cB * pauli_pair(0, 3)
         - c.omega * pauli_pair(3, 3);
}

PauliCoefficients pauli_decompose(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-10)
    throw std::invalid_argument("pauli_decompose requires a unit-trace state");
  if (hermiticity_defect(rho) > 1e-10)
    throw std::invalid_argument("pauli_decompose requires a Hermitian state");
  PauliCoefficients r;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      r(mu, nu) = (pauli_pair(mu, nu) * rho).trace().real();
  return r;
}

Matrix4 pauli_reconstruct(const PauliCoefficients& r) {
  Matrix4 out = Matrix4::Zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      out += (r(mu, nu) / 4.0) * pauli_pair(mu, nu);
  return out;
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& M) {
  if (M.rows() != M.cols() || M.rows() < 1)
    throw std::invalid_argument("hermitian_eigensystem requires a square matrix");
  if (hermiticity_defect(M) > 1e-10)
    throw std::invalid_argument("hermitian_eigensystem requires a Hermitian matrix");

  const Eigen::Index n = M.rows();
  ComplexMatrix A = (M + M.adjoint()) / 2.0;
  ComplexMatrix V = ComplexMatrix::Identity(n, n);
  const double scale = std::max(1.0, A.norm());

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q)
        if (p != q) off += std::norm(A(p, q));
    if (std::sqrt(off) <= 1e-14 * scale) break;

    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex b = A(p, q);
        const double babs = std::abs(b);
        if (babs == 0.0) continue;
        const double a = A(p, p).real();
        const double d = A(q, q).real();
        const Complex phase = b / babs;  // e^{i phi}
        const double tau = (d - a) / (2.0 * babs);
        // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
        double tan_theta;
        if (tau == 0.0)
          tan_theta = 1.0;
        else
          tan_theta = -std::copysign(1.0, tau) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, tan_theta);
        const double s = tan_theta * c;

        // unitary on (p,q): [[c, -s e^{i phi}], [s e^{-i phi}, c]]
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex aip = A(i, p);
          const Complex aiq = A(i, q);
          A(i, p) = c * aip + s * std::conj(phase) * aiq;
          A(i, q) = -s * phase * aip + c * aiq;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex apj = A(p, j);
          const Complex aqj = A(q, j);
          A(p, j) = c * apj + s * phase * aqj;
          A(q, j) = -s * std::conj(phase) * apj + c * aqj;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vip = V(i, p);
          const Complex viq = V(i, q);
          V(i, p) = c * vip + s * std::conj(phase) * viq;
          V(i, q) = -s * phase * vip + c * viq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return A(i, i).real() > A(j, j).real();
  });

  EigenSystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = A(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = V.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

ValidationReport validate_density_matrix(const ComplexMatrix& M, double tol) {
  if (M.rows() != 4 || M.cols() != 4)
    throw std::invalid_argument("validate_density_matrix requires a 4x4 matrix");
  ValidationReport report;
  report.hermiticity_defect = hermiticity_defect(M);
  report.trace_defect = std::abs(M.trace() - Complex{1.0, 0.0});
  EigenSystem es = hermitian_eigensystem((M + M.adjoint()) / 2.0);
  report.min_eigenvalue = es.values(es.values.size() - 1);

  report.ok = true;
  if (!M.allFinite()) {
    report.ok = false;
    report.message = "non-finite entries";
  } else if (report.hermiticity_defect > tol) {
    report.ok = false;
    report.message = "hermiticity defect " + std::to_string(report.hermiticity_defect)
                     + " exceeds tolerance";
  } else if (report.trace_defect > tol) {
    report.ok = false;
    report.message = "trace defect " + std::to_string(report.trace_defect)
                     + " exceeds tolerance";
  } else if (report.min_eigenvalue < -tol) {
    report.ok = false;
    report.message = "negative eigenvalue " + std::to_string(report.min_eigenvalue);
  }
  return report;
}

Eigen::VectorXd psd_sqrt_eigenvalues(const Eigen::VectorXd& eigenvalues) {
  const double largest = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double clip = 100.0 * std::numeric_limits<double>::epsilon() * largest;
  Eigen::VectorXd out(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    out(i) = eigenvalues(i) > clip ? std::sqrt(eigenvalues(i)) : 0.0;
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& M) {
  EigenSystem es = hermitian_eigensystem(M);
  Eigen::VectorXd roots = psd_sqrt_eigenvalues(es.values);
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

Eigen::MatrixXd real_expm(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("real_expm requires a square matrix");
  const Eigen::Index n = A.rows();
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();

  int squarings = 0;
  if (norm > 0.25)
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm))) + 1);
  const Eigen::MatrixXd As = A / std::ldexp(1.0, squarings);

  // Pade-[6/6]: N = sum c_k A^k, D = sum (-1)^k c_k A^k.
  Eigen::MatrixXd X = As;
  double c = 0.5;
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n) + c * As;
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n) - c * As;
  constexpr int q = 6;
  double sign = -1.0;
  for (int k = 2; k <= q; ++k) {
    c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
    X = As * X;
    N += c * X;
    sign = -sign;
    D += sign * c * X;
  }

  Eigen::MatrixXd F = D.partialPivLu().solve(N);
  for (int i = 0; i < squarings; ++i) F = F * F;
  return F;
}

}  // namespace qpair
