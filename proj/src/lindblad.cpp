#include "qpair/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpair/errors.hpp"

namespace qpair {

namespace {

constexpr Complex kI{0.0, 1.0};
using Generator = Eigen::Matrix<double, 16, 16>;
using RVector = Eigen::Matrix<double, 16, 1>;

Matrix4 coherent_hamiltonian(const LindbladModel& model) {
  Matrix4 h = -model.omega * pauli_pair(3, 3);
  if (model.include_local_z)
    h += model.cA * pauli_pair(3, 0) + model.cB * pauli_pair(0, 3);
  return h;
}

// d r_a/dt = sum_b G_ab r_b with G_ab = Re[-(i/4) Tr(sigma_a [H, sigma_b])].
Generator coherent_generator(const LindbladModel& model) {
  const Matrix4 h = coherent_hamiltonian(model);
  Generator g = Generator::Zero();
  for (int a = 0; a < 16; ++a) {
    const Matrix4 sa = pauli_pair(a / 4, a % 4);
    for (int b = 0; b < 16; ++b) {
      const Matrix4 sb = pauli_pair(b / 4, b % 4);
      const Complex tr = (sa * (h * sb - sb * h)).trace();
      g(a, b) = (-kI / 4.0 * tr).real();
    }
  }
  return g;
}

// Unit-rate dissipative part: -2 D_A on the A index plus -2 D_B on the B
// index; the schedule rate multiplies this whole block.
Generator dissipative_shape(const LindbladModel& model) {
  const Eigen::Matrix4d dA = model.dissipatorA.matrix();
  const Eigen::Matrix4d dB = model.dissipatorB.matrix();
  Generator g = Generator::Zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int k = 0; k < 4; ++k) {
        g(4 * mu + nu, 4 * k + nu) += -2.0 * dA(mu, k);
        g(4 * mu + nu, 4 * mu + k) += -2.0 * dB(nu, k);
      }
  return g;
}

struct GeneratorParts {
  Generator coherent;
  Generator shape;
};

GeneratorParts generator_parts(const LindbladModel& model) {
  for (const DissipatorMatrix* d : {&model.dissipatorA, &model.dissipatorB}) {
    DissipatorValidation check = validate_dissipator(*d);
    if (!check.ok) throw std::invalid_argument("invalid dissipator: " + check.violation);
  }
  return GeneratorParts{coherent_generator(model), dissipative_shape(model)};
}

RVector to_rvector(const PauliCoefficients& r) {
  RVector v;
  for (int i = 0; i < 16; ++i) v(i) = r.r[static_cast<std::size_t>(i)];
  return v;
}

DensityMatrix from_rvector(const RVector& v) {
  PauliCoefficients r;
  for (int i = 0; i < 16; ++i) r.r[static_cast<std::size_t>(i)] = v(i);
  return pauli_reconstruct(r);
}

void check_state(const DensityMatrix& rho, const char* where) {
  ValidationReport report = validate_density_matrix(rho, 1e-9);
  if (!report.ok)
    throw integrity_error(std::string(where) + " produced an invalid state: " + report.message);
}

// One integration pass across ascending targets with fixed step h; calls
// emit(index, r) as each target time is reached.
template <typename Emit>
void rk4_integrate(const GeneratorParts& parts, const LambdaSchedule& schedule,
                   RVector r, const std::vector<double>& targets, double h, Emit emit) {
  double t = 0.0;
  auto derivative = [&](double s, const RVector& x) -> RVector {
    return parts.coherent * x + schedule.rate(s) * (parts.shape * x);
  };
  for (std::size_t idx = 0; idx < targets.size(); ++idx) {
    const double target = targets[idx];
    while (t < target - 1e-15 * std::max(1.0, target)) {
      const double step = std::min(h, target - t);
      const RVector k1 = derivative(t, r);
      const RVector k2 = derivative(t + step / 2.0, r + (step / 2.0) * k1);
      const RVector k3 = derivative(t + step / 2.0, r + (step / 2.0) * k2);
      const RVector k4 = derivative(t + step, r + step * k3);
      r += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += step;
    }
    emit(idx, r);
  }
}

std::vector<DensityMatrix> evolve_grid_impl(const LindbladModel& model,
                                            const DensityMatrix& rho0,
                                            const std::vector<double>& times,
                                            EvolveMethod method) {
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("evolution times must be finite and nonnegative");
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("evolution time grid must be ascending");

  const GeneratorParts parts = generator_parts(model);
  const RVector r0 = to_rvector(pauli_decompose(rho0));
  std::vector<DensityMatrix> states(times.size());

  if (method == EvolveMethod::Exponential) {
    if (model.schedule.kind != LambdaSchedule::Kind::Constant)
      throw std::invalid_argument("exponential method requires a constant schedule");
    const Generator g = parts.coherent + model.schedule.rate(0.0) * parts.shape;
    for (std::size_t i = 0; i < times.size(); ++i)
      states[i] = from_rvector(RVector(real_expm(g * times[i]) * r0));
  } else {
    const double t_end = times.empty() ? 0.0 : times.back();
    const double scale = std::max({std::abs(model.omega),
                                   model.schedule.max_rate(t_end), 1e-12});
    const double h = 1e-3 / scale;
    std::vector<RVector> coarse(times.size()), fine(times.size());
    rk4_integrate(parts, model.schedule, r0, times, h,
                  [&](std::size_t i, const RVector& r) { coarse[i] = r; });
    rk4_integrate(parts, model.schedule, r0, times, h / 2.0,
                  [&](std::size_t i, const RVector& r) { fine[i] = r; });
    for (std::size_t i = 0; i < times.size(); ++i) {
      if ((coarse[i] - fine[i]).cwiseAbs().maxCoeff() > 1e-9)
        throw integrity_error("stepped integrator halve-step self-check failed");
      states[i] = from_rvector(fine[i]);
    }
  }

  for (const DensityMatrix& rho : states) check_state(rho, "evolve");
  return states;
}

}  // namespace

Eigen::Matrix4d DissipatorMatrix::matrix() const {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(1, 1) = Kx;
  d(2, 2) = Ky;
  d(3, 3) = Kz;
  d(1, 2) = d(2, 1) = fxy;
  d(1, 3) = d(3, 1) = fxz;
  d(2, 3) = d(3, 2) = fyz;
  return d;
}

double DissipatorMatrix::max_rate() const {
  return std::max({std::abs(Kx), std::abs(Ky), std::abs(Kz),
                   std::abs(fxy), std::abs(fxz), std::abs(fyz)});
}

LambdaSchedule LambdaSchedule::constant(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("schedule rate must be >= 0");
  LambdaSchedule s;
  s.kind = Kind::Constant;
  s.lambda = lambda;
  return s;
}

LambdaSchedule LambdaSchedule::linear(double lambda_tilde) {
  if (lambda_tilde < 0.0) throw std::invalid_argument("schedule rate must be >= 0");
  LambdaSchedule s;
  s.kind = Kind::Linear;
  s.lambda_tilde = lambda_tilde;
  return s;
}

LambdaSchedule LambdaSchedule::tabulated(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) throw std::invalid_argument("tabulated schedule needs >= 2 nodes");
  for (std::size_t i = 0; i + 1 < table.size(); ++i)
    if (!(table[i].first < table[i + 1].first))
      throw std::invalid_argument("tabulated schedule times must be strictly ascending");
  for (const auto& [t, rate] : table)
    if (rate < 0.0) throw std::invalid_argument("tabulated schedule rates must be >= 0");
  LambdaSchedule s;
  s.kind = Kind::Tabulated;
  s.table = std::move(table);
  return s;
}

double LambdaSchedule::rate(double t) const {
  switch (kind) {
    case Kind::Constant:
      return lambda;
    case Kind::Linear:
      return lambda_tilde * t;
    case Kind::Tabulated: {
      if (t <= table.front().first) return table.front().second;
      if (t >= table.back().first) return table.back().second;
      for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        const auto& [t0, r0] = table[i];
        const auto& [t1, r1] = table[i + 1];
        if (t <= t1) return r0 + (r1 - r0) * (t - t0) / (t1 - t0);
      }
      return table.back().second;
    }
  }
  return 0.0;
}

double LambdaSchedule::integral(double t) const {
  switch (kind) {
    case Kind::Constant:
      return lambda * t;
    case Kind::Linear:
      return lambda_tilde * t * t / 2.0;
    case Kind::Tabulated: {
      double acc = 0.0;
      double prev_t = 0.0;
      double prev_r = rate(0.0);
      for (const auto& [tk, rk] : table) {
        if (tk <= prev_t) continue;
        const double upto = std::min(tk, t);
        if (upto > prev_t) {
          const double r_upto = rate(upto);
          acc += (prev_r + r_upto) / 2.0 * (upto - prev_t);
          prev_t = upto;
          prev_r = r_upto;
        }
        if (tk >= t) break;
      }
      if (t > prev_t) acc += (prev_r + rate(t)) / 2.0 * (t - prev_t);
      return acc;
    }
  }
  return 0.0;
}

double LambdaSchedule::max_rate(double t_max) const {
  switch (kind) {
    case Kind::Constant:
      return lambda;
    case Kind::Linear:
      return lambda_tilde * t_max;
    case Kind::Tabulated: {
      double best = rate(0.0);
      for (const auto& [tk, rk] : table)
        if (tk <= t_max) best = std::max(best, rk);
      best = std::max(best, rate(t_max));
      return best;
    }
  }
  return 0.0;
}

LindbladModel dephasing_model(double omega, LambdaSchedule schedule) {
  LindbladModel model;
  model.omega = omega;
  model.dissipatorA.Kx = model.dissipatorA.Ky = 1.0;
  model.dissipatorB.Kx = model.dissipatorB.Ky = 1.0;
  model.schedule = std::move(schedule);
  return model;
}

DissipatorValidation validate_dissipator(const DissipatorMatrix& D) {
  DissipatorValidation out;
  const Eigen::Matrix4d d = D.matrix();
  if (!d.allFinite()) {
    out.violation = "non-finite dissipator entries";
    return out;
  }
  const double eps = 1e-12 * std::max(1.0, D.max_rate());
  if (D.Kx < -eps || D.Ky < -eps || D.Kz < -eps) {
    out.violation = "negative diagonal rate";
    return out;
  }
  if (D.fxy * D.fxy > D.Kx * D.Ky + eps) {
    out.violation = "f_xy^2 exceeds K_x K_y";
    return out;
  }
  if (D.fxz * D.fxz > D.Kx * D.Kz + eps) {
    out.violation = "f_xz^2 exceeds K_x K_z";
    return out;
  }
  if (D.fyz * D.fyz > D.Ky * D.Kz + eps) {
    out.violation = "f_yz^2 exceeds K_y K_z";
    return out;
  }

  // Trajectory probe: the Bloch part of r evolves by expm(-2 d33 t); pure
  // probe states must stay inside the Bloch ball.
  const double rate = D.max_rate();
  if (rate > 0.0) {
    const Eigen::Matrix3d block = -2.0 * d.block<3, 3>(1, 1);
    std::vector<Eigen::Vector3d> probes = {
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    const double inv = 1.0 / std::sqrt(3.0);
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) probes.push_back(Eigen::Vector3d(sx * inv, sy * inv, sz * inv));
    for (int i = 1; i <= 25; ++i) {
      const double t = 5.0 / rate * static_cast<double>(i) / 25.0;
      const Eigen::Matrix3d map = real_expm(block * t);
      for (const auto& p : probes) {
        if ((map * p).norm() > 1.0 + 1e-9) {
          out.violation = "trajectory probe left the Bloch ball";
          return out;
        }
      }
    }
  }

  out.ok = true;
  return out;
}

Eigen::Matrix<double, 16, 16> gksl_generator(const LindbladModel& model, double t) {
  const GeneratorParts parts = generator_parts(model);
  return parts.coherent + model.schedule.rate(t) * parts.shape;
}

DensityMatrix evolve(const LindbladModel& model, const DensityMatrix& rho0,
                     double t, EvolveMethod method) {
  return evolve_grid_impl(model, rho0, {t}, method).front();
}

std::vector<DensityMatrix> evolve_grid(const LindbladModel& model,
                                       const DensityMatrix& rho0,
                                       const std::vector<double>& times,
                                       EvolveMethod method) {
  return evolve_grid_impl(model, rho0, times, method);
}

DensityMatrix dephasing_closed_form(double omega, double lambda, double t) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const Complex a = std::exp(-2.0 * lambda * t) * std::exp(2.0 * kI * omega * t);
  const double c = std::exp(-4.0 * lambda * t);
  DensityMatrix rho;
  rho(0, 0) = 1.0;
  rho(0, 1) = a;
  rho(0, 2) = a;
  rho(0, 3) = c;
  rho(1, 1) = 1.0;
  rho(1, 2) = c;
  rho(1, 3) = std::conj(a);
  rho(2, 2) = 1.0;
  rho(2, 3) = std::conj(a);
  rho(3, 3) = 1.0;
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) rho(i, j) = std::conj(rho(j, i));
  return rho / 4.0;
}

DensityMatrix dephasing_time_dependent(double omega, double lambda_tilde, double t) {
  if (lambda_tilde < 0.0) throw std::invalid_argument("lambda_tilde must be >= 0");
  const double integral = lambda_tilde * t * t / 2.0;  // int_0^t lambda_tilde s ds
  const Complex a = std::exp(-2.0 * integral) * std::exp(2.0 * kI * omega * t);
  const double c = std::exp(-4.0 * integral);
  DensityMatrix rho;
  rho(0, 0) = 1.0;
  rho(0, 1) = a;
  rho(0, 2) = a;
  rho(0, 3) = c;
  rho(1, 1) = 1.0;
  rho(1, 2) = c;
  rho(1, 3) = std::conj(a);
  rho(2, 2) = 1.0;
  rho(2, 3) = std::conj(a);
  rho(3, 3) = 1.0;
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) rho(i, j) = std::conj(rho(j, i));
  return rho / 4.0;
}

double lindblad_concurrence_rate(double omega, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const double w = std::abs(omega);
  const double s = std::hypot(lambda, w);
  // sqrt(l^2 + 2w^2 +/- Delta) with Delta = 2 sqrt(w^2 (l^2 + w^2)) equals
  // s + w and |s - w|; s >= w always, so the difference is exactly 2w.
  return (s + w) - (s - w) - 2.0 * lambda;
}

}  // namespace qpair
