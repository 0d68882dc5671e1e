#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpair/lindblad.hpp"
#include "qpair/micro.hpp"
#include "qpair/observables.hpp"
#include "qpair/qcore.hpp"
#include "qpair/version.hpp"

namespace py = pybind11;
using namespace qpair;

PYBIND11_MODULE(_core, m) {
  m.doc() = "two-qubit dephasing dynamics: exact microscopic vs GKSL";
  m.attr("__version__") = kVersion;

  py::class_<CouplingTable>(m, "CouplingTable")
      .def(py::init<>())
      .def(py::init([](double g11, double g12, double g21, double g22) {
             return CouplingTable{g11, g12, g21, g22};
           }),
           py::arg("g11"), py::arg("g12"), py::arg("g21"), py::arg("g22"))
      .def_readwrite("g11", &CouplingTable::g11)
      .def_readwrite("g12", &CouplingTable::g12)
      .def_readwrite("g21", &CouplingTable::g21)
      .def_readwrite("g22", &CouplingTable::g22);

  py::class_<ReducedCouplings>(m, "ReducedCouplings")
      .def_readonly("c0", &ReducedCouplings::c0)
      .def_readonly("cA", &ReducedCouplings::cA)
      .def_readonly("cB", &ReducedCouplings::cB)
      .def_readonly("omega", &ReducedCouplings::omega);

  py::class_<MicroModel>(m, "MicroModel")
      .def(py::init<>())
      .def_readwrite("omega", &MicroModel::omega)
      .def_readwrite("hA", &MicroModel::hA)
      .def_readwrite("hB", &MicroModel::hB)
      .def_readwrite("weights", &MicroModel::weights)
      .def_readwrite("phases", &MicroModel::phases)
      .def_readwrite("energies", &MicroModel::energies)
      .def("env_dim", &MicroModel::env_dim);

  py::class_<EnvMoments>(m, "EnvMoments")
      .def_readonly("muA", &EnvMoments::muA)
      .def_readonly("muB", &EnvMoments::muB)
      .def_readonly("sigmaA2", &EnvMoments::sigmaA2)
      .def_readonly("sigmaB2", &EnvMoments::sigmaB2)
      .def_readonly("sigmaC2", &EnvMoments::sigmaC2);

  py::class_<GravitationalSpec>(m, "GravitationalSpec")
      .def(py::init<>())
      .def_readwrite("G", &GravitationalSpec::G)
      .def_readwrite("m1", &GravitationalSpec::m1)
      .def_readwrite("m2", &GravitationalSpec::m2)
      .def_readwrite("dA", &GravitationalSpec::dA)
      .def_readwrite("dB", &GravitationalSpec::dB);

  py::class_<GravitationalModel>(m, "GravitationalModel")
      .def_readonly("model", &GravitationalModel::model)
      .def_readonly("predicted_sigmaA2", &GravitationalModel::predicted_sigmaA2)
      .def_readonly("predicted_sigmaB2", &GravitationalModel::predicted_sigmaB2);

  py::class_<LambdaSchedule>(m, "LambdaSchedule")
      .def_static("constant", &LambdaSchedule::constant, py::arg("lambda_"))
      .def_static("linear", &LambdaSchedule::linear, py::arg("lambda_tilde"))
      .def_static("tabulated", &LambdaSchedule::tabulated, py::arg("table"))
      .def("rate", &LambdaSchedule::rate, py::arg("t"))
      .def("integral", &LambdaSchedule::integral, py::arg("t"));

  py::class_<LindbladModel>(m, "LindbladModel")
      .def(py::init<>())
      .def_readwrite("omega", &LindbladModel::omega)
      .def_readwrite("schedule", &LindbladModel::schedule)
      .def_readwrite("include_local_z", &LindbladModel::include_local_z)
      .def_readwrite("cA", &LindbladModel::cA)
      .def_readwrite("cB", &LindbladModel::cB);

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("exponent", &PowerLawFit::exponent)
      .def_readonly("prefactor", &PowerLawFit::prefactor)
      .def_readonly("r_squared", &PowerLawFit::r_squared);

  py::class_<ThresholdResult>(m, "ThresholdResult")
      .def_readonly("lambda_star", &ThresholdResult::lambda_star)
      .def_readonly("bracket_low", &ThresholdResult::bracket_low)
      .def_readonly("bracket_high", &ThresholdResult::bracket_high)
      .def_readonly("scan_points", &ThresholdResult::scan_points);

  py::enum_<Site>(m, "Site").value("A", Site::A).value("B", Site::B);
  py::enum_<EvolveMethod>(m, "EvolveMethod")
      .value("Exponential", EvolveMethod::Exponential)
      .value("Stepped", EvolveMethod::Stepped);

  m.def("reduce_couplings", &reduce_couplings, py::arg("g"));
  m.def("gamma", &qpair::gamma, py::arg("model"), py::arg("site"), py::arg("t"));
  m.def(
      "lambda_pm",
      [](const MicroModel& model, int sign, double t) {
        return lambda_pm(model, sign, t);
      },
      py::arg("model"), py::arg("sign"), py::arg("t"));
  m.def("reduced_state", &reduced_state, py::arg("model"), py::arg("t"));
  m.def("brute_force_reduced_state", &brute_force_reduced_state, py::arg("model"),
        py::arg("t"), py::arg("cA") = 0.0, py::arg("cB") = 0.0);
  m.def("env_moments", &env_moments, py::arg("model"));
  m.def("micro_shorttime_purity", &micro_shorttime_purity, py::arg("moments"),
        py::arg("t"));
  m.def("gravitational_model", &gravitational_model, py::arg("spec"),
        py::arg("uniform_weights") = true, py::arg("seed") = 0);
  m.def("isolated_concurrence", &isolated_concurrence, py::arg("omega"), py::arg("t"));
  m.def("isolated_model", &isolated_model, py::arg("omega"));
  m.def("random_model", &random_model, py::arg("omega"), py::arg("n_particles"),
        py::arg("seed"));
  m.def("rescale_to_sigma", &rescale_to_sigma, py::arg("model"), py::arg("sigma"));

  m.def("dephasing_model", &dephasing_model, py::arg("omega"), py::arg("schedule"));
  m.def("evolve", &evolve, py::arg("model"), py::arg("rho0"), py::arg("t"),
        py::arg("method") = EvolveMethod::Exponential);
  m.def("dephasing_closed_form", &dephasing_closed_form, py::arg("omega"),
        py::arg("lambda_"), py::arg("t"));
  m.def("dephasing_time_dependent", &dephasing_time_dependent, py::arg("omega"),
        py::arg("lambda_tilde"), py::arg("t"));
  m.def("lindblad_concurrence_rate", &lindblad_concurrence_rate, py::arg("omega"),
        py::arg("lambda_"));

  m.def("concurrence", &concurrence, py::arg("rho"));
  m.def("purity", &purity, py::arg("rho"));
  m.def("fidelity", &fidelity, py::arg("rho"), py::arg("sigma"));
  m.def("fit_power_law", &fit_power_law, py::arg("samples"));
  m.def("dephasing_growth_estimate", &dephasing_growth_estimate, py::arg("omega"),
        py::arg("lambda_"));
  m.def("threshold_scan", &threshold_scan, py::arg("omega"), py::arg("lambda_low"),
        py::arg("lambda_high"), py::arg("resolution") = 0.005);
}
