#include "qpair/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpair {

namespace {

Matrix4 spin_flip(const DensityMatrix& rho) {
  static const Matrix4 yy = pauli_pair(2, 2);
  return yy * rho.conjugate() * yy;
}

void require_valid(const DensityMatrix& rho, const char* op) {
  ValidationReport report = validate_density_matrix(rho, 1e-9);
  if (!report.ok)
    throw std::invalid_argument(std::string(op) + " requires a valid density matrix: "
                                + report.message);
}

const DensityMatrix& plus_state() {
  static const DensityMatrix rho = DensityMatrix::Constant(Complex{0.25, 0.0});
  return rho;
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  require_valid(rho, "concurrence");
  const ComplexMatrix root = psd_sqrt(rho);
  const ComplexMatrix R = root * spin_flip(rho) * root;
  const EigenSystem es = hermitian_eigensystem((R + R.adjoint()) / 2.0);
  const Eigen::VectorXd lam = psd_sqrt_eigenvalues(es.values);  // descending
  const double diff = lam(0) - lam(1) - lam(2) - lam(3);
  return diff > 0.0 ? std::min(diff, 1.0) : 0.0;
}

double pure_state_concurrence(const Eigen::Vector4cd& psi) {
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

double purity(const DensityMatrix& rho) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sum += std::norm(rho(i, j));
  return sum;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_valid(rho, "fidelity");
  require_valid(sigma, "fidelity");
  const ComplexMatrix root = psd_sqrt(rho);
  const ComplexMatrix inner = root * sigma * root;
  const EigenSystem es = hermitian_eigensystem((inner + inner.adjoint()) / 2.0);
  const double trace_root = psd_sqrt_eigenvalues(es.values).sum();
  return std::min(1.0, trace_root * trace_root);
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& samples) {
  for (const auto& [t, y] : samples) {
    if (!(t > 0.0)) throw std::invalid_argument("fit_power_law requires positive times");
    if (!(y > 0.0)) throw std::invalid_argument("fit_power_law requires positive samples");
  }
  std::vector<std::pair<double, double>> kept;
  for (const auto& s : samples)
    if (s.second >= 1e-13) kept.push_back(s);  // below purity arithmetic noise
  if (kept.size() < 5)
    throw std::invalid_argument("fit_power_law needs >= 5 usable samples");
  double t_min = kept.front().first, t_max = kept.front().first;
  for (const auto& [t, y] : kept) {
    t_min = std::min(t_min, t);
    t_max = std::max(t_max, t);
  }
  if (t_max < 10.0 * (1.0 - 1e-9) * t_min)
    throw std::invalid_argument("fit_power_law needs samples spanning >= 1 decade");

  const double n = static_cast<double>(kept.size());
  double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0, szz = 0.0;
  for (const auto& [t, y] : kept) {
    const double x = std::log(t);
    const double z = std::log(y);
    sx += x;
    sz += z;
    sxx += x * x;
    sxz += x * z;
    szz += z * z;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxz - sx * sz) / denom;
  const double intercept = (sz - slope * sx) / n;

  double ss_res = 0.0;
  const double z_mean = sz / n;
  double ss_tot = 0.0;
  for (const auto& [t, y] : kept) {
    const double x = std::log(t);
    const double z = std::log(y);
    const double fit = intercept + slope * x;
    ss_res += (z - fit) * (z - fit);
    ss_tot += (z - z_mean) * (z - z_mean);
  }

  PowerLawFit out;
  out.exponent = slope;
  out.prefactor = std::exp(intercept);
  out.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  out.t_min = t_min;
  out.t_max = t_max;
  return out;
}

double dephasing_growth_estimate(double omega, double lambda) {
  if (omega == 0.0) throw std::invalid_argument("growth estimate requires omega != 0");
  const double t0 = 1e-3 / std::abs(omega);
  const double dt = t0 / 10.0;
  const LindbladModel model = dephasing_model(omega, LambdaSchedule::constant(lambda));
  const double c_plus = concurrence(evolve(model, plus_state(), t0 + dt,
                                           EvolveMethod::Exponential));
  const double c_minus = concurrence(evolve(model, plus_state(), t0 - dt,
                                            EvolveMethod::Exponential));
  return (c_plus - c_minus) / (2.0 * dt);
}

namespace {

template <typename Rate>
ThresholdResult bisect_threshold(double lambda_low, double lambda_high,
                                 double resolution, double epsilon, Rate rate) {
  if (!(lambda_low < lambda_high))
    throw std::invalid_argument("threshold scan range must have low < high");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");

  ThresholdResult out;
  double lo = lambda_low, hi = lambda_high;
  const double g_lo = rate(lo);
  const double g_hi = rate(hi);
  out.scan_points.push_back({lo, g_lo});
  out.scan_points.push_back({hi, g_hi});
  if (!(g_lo > epsilon) || g_hi > epsilon)
    throw std::invalid_argument(
        "threshold scan range does not bracket the growth-rate transition");

  while (hi - lo > resolution) {
    const double mid = (lo + hi) / 2.0;
    const double g = rate(mid);
    out.scan_points.push_back({mid, g});
    if (g > epsilon)
      lo = mid;
    else
      hi = mid;
  }
  out.lambda_star = (lo + hi) / 2.0;
  out.bracket_low = lo;
  out.bracket_high = hi;
  std::sort(out.scan_points.begin(), out.scan_points.end());
  return out;
}

}  // namespace

ThresholdResult threshold_scan(double omega, double lambda_low, double lambda_high,
                               double resolution) {
  const double epsilon = 1e-6 * std::abs(omega);
  return bisect_threshold(lambda_low, lambda_high, resolution, epsilon,
                          [&](double lam) { return dephasing_growth_estimate(omega, lam); });
}

ThresholdResult threshold_scan_analytic(double omega, double lambda_low,
                                        double lambda_high, double resolution) {
  return bisect_threshold(lambda_low, lambda_high, resolution, 0.0,
                          [&](double lam) { return lindblad_concurrence_rate(omega, lam); });
}

}  // namespace qpair
