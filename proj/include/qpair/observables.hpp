#pragma once

#include <utility>
#include <vector>

#include "qpair/lindblad.hpp"
#include "qpair/qcore.hpp"

namespace qpair {

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0, t_max = 0.0;  // fitted window
};

struct ThresholdResult {
  double lambda_star = 0.0;
  double bracket_low = 0.0, bracket_high = 0.0;
  std::vector<std::pair<double, double>> scan_points;  // (lambda, growth rate)
};

// Wootters concurrence via the Hermitian product form R = sqrt(rho) rho~
// sqrt(rho) with rho~ = (sy x sy) rho* (sy x sy); negative differences clamp
// to exactly 0. Rejects states that fail validation at 1e-9.
double concurrence(const DensityMatrix& rho);

// 2|ad - bc| for a pure state a|00> + b|01> + c|10> + d|11>; independent
// oracle for the Wootters pipeline.
double pure_state_concurrence(const Eigen::Vector4cd& psi);

double purity(const DensityMatrix& rho);

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Least-squares line in log-log space. Samples with y < 1e-13 are dropped as
// arithmetic noise; the remaining set must hold >= 5 points spanning >= one
// decade of t, all y > 0 (usage error otherwise).
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& samples);

// Central-difference concurrence growth rate of the dephasing model at
// t0 = 1e-3/|omega| with spacing t0/10.
double dephasing_growth_estimate(double omega, double lambda);

// Bisection for the entanglement threshold: the clamped growth rate is
// positive below lambda* and exactly zero above, so the predicate is
// "estimated rate > 1e-6 |omega|" (far above rounding noise, far below the
// estimator's resolution near threshold). Requires the range to bracket the
// transition.
ThresholdResult threshold_scan(double omega, double lambda_low, double lambda_high,
                               double resolution);

// Same bisection on the sign of the analytic rate formula.
ThresholdResult threshold_scan_analytic(double omega, double lambda_low,
                                        double lambda_high, double resolution);

}  // namespace qpair
