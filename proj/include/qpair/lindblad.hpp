#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qpair/qcore.hpp"

namespace qpair {

// Single-site dissipator coefficients in the Pauli basis; the matrix has
// zero first row and column and acts on a site's Pauli index. Within a
// LindbladModel these entries are shapes: the lambda schedule multiplies
// them uniformly at each time.
struct DissipatorMatrix {
  double Kx = 0.0, Ky = 0.0, Kz = 0.0;
  double fxy = 0.0, fxz = 0.0, fyz = 0.0;

  Eigen::Matrix4d matrix() const;
  double max_rate() const;
};

struct DissipatorValidation {
  bool ok = false;
  std::string violation;  // empty when ok
};

struct LambdaSchedule {
  enum class Kind { Constant, Linear, Tabulated };

  Kind kind = Kind::Constant;
  double lambda = 0.0;        // constant case
  double lambda_tilde = 0.0;  // linear case, rate(t) = lambda_tilde * t
  std::vector<std::pair<double, double>> table;  // (time, rate), ascending

  static LambdaSchedule constant(double lambda);
  static LambdaSchedule linear(double lambda_tilde);
  static LambdaSchedule tabulated(std::vector<std::pair<double, double>> table);

  double rate(double t) const;
  double integral(double t) const;  // int_0^t rate(s) ds
  double max_rate(double t_max) const;
};

struct LindbladModel {
  double omega = 0.0;
  DissipatorMatrix dissipatorA, dissipatorB;
  LambdaSchedule schedule;
  // Optional local z terms cA sz x I + cB I x sz in the coherent part; they
  // provably leave concurrence and purity unchanged and exist for sanity
  // checks only.
  bool include_local_z = false;
  double cA = 0.0, cB = 0.0;
};

// Standard pure-dephasing choice: unit K_x = K_y shapes on both sites, all
// strength carried by the schedule.
LindbladModel dephasing_model(double omega, LambdaSchedule schedule);

// Nonnegative diagonal rates, pairwise minor conditions f^2 <= K K, then a
// trajectory probe: the propagated single-site map must keep a set of pure
// probe states inside the Bloch ball over t in [0, 5/max rate].
DissipatorValidation validate_dissipator(const DissipatorMatrix& D);

enum class EvolveMethod { Exponential, Stepped };

// Generator G(t) of dr/dt = G(t) r acting on Pauli coefficients: coherent
// part from H = -omega sz x sz (plus optional local z terms), dissipative
// part -2 times the per-site dissipator contracted on that site's index,
// scaled by the schedule rate at t. The r_00 row is identically zero.
Eigen::Matrix<double, 16, 16> gksl_generator(const LindbladModel& model, double t);

// Exponential: matrix exponential of the constant generator (constant
// schedules only; usage error otherwise). Stepped: classical fixed-step
// 4th-order integration, step 1e-3/max(|omega|, max rate), with a halve-step
// self-check at 1e-9. Both validate the returned state (positivity tolerance
// 1e-9, integrity error beyond it).
DensityMatrix evolve(const LindbladModel& model, const DensityMatrix& rho0,
                     double t, EvolveMethod method);

// Evaluates one trajectory over an ascending time grid; the stepped method
// integrates once across the grid instead of restarting per point.
std::vector<DensityMatrix> evolve_grid(const LindbladModel& model,
                                       const DensityMatrix& rho0,
                                       const std::vector<double>& times,
                                       EvolveMethod method);

// Closed-form dephasing state: diagonal 1/4, single coherences
// e^{-2 lambda t} e^{+/- 2 i omega t}/4, double coherences e^{-4 lambda t}/4.
DensityMatrix dephasing_closed_form(double omega, double lambda, double t);

// Same closed form under lambda(t) = lambda_tilde * t: every exponent
// 2 lambda t is replaced by the integral lambda_tilde t^2. Exact, because
// the coherent and dissipative generator parts commute; tests verify that
// against the stepped integrator rather than assuming it.
DensityMatrix dephasing_time_dependent(double omega, double lambda_tilde, double t);

// Early-time concurrence growth rate of the dephasing model,
// sqrt(l^2+2w^2+D) - sqrt(l^2+2w^2-D) - 2l with D = 2 sqrt(w^2(l^2+w^2)).
// Evaluated through the exact factorization l^2+2w^2+/-D = (sqrt(l^2+w^2)
// +/- |w|)^2, which avoids catastrophic cancellation at l -> 0; negative
// values are returned as-is (clamping is the caller's reporting concern).
double lindblad_concurrence_rate(double omega, double lambda);

}  // namespace qpair
