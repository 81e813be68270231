// Copyright 2026 The eitspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eitspec/calibration.hpp"
#include "eitspec/errors.hpp"
#include "eitspec/fitting.hpp"
#include "eitspec/fluctuation.hpp"
#include "eitspec/spectrum.hpp"
#include "eitspec/steady_state.hpp"
#include "eitspec/units.hpp"

namespace py = pybind11;
using namespace eitspec;

namespace {

ModelParams params_khz(double omega_sb, double omega_p, double gamma,
                       double gamma_phi, double kappa, double chi_qt,
                       double delta_sb) {
  ModelParams p;
  p.omega_sb = units::khz_to_angular(omega_sb);
  p.omega_p = units::khz_to_angular(omega_p);
  p.gamma = units::khz_to_angular(gamma);
  p.gamma_phi = units::khz_to_angular(gamma_phi);
  p.kappa = units::khz_to_angular(kappa);
  p.chi_qt = units::khz_to_angular(chi_qt);
  p.delta_sb = units::khz_to_angular(delta_sb);
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steady-state spectra, lineshape and master-equation fits";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", error);
  py::register_exception<TruncationInsufficient>(m, "TruncationInsufficient", error);
  py::register_exception<NoUniqueSteadyState>(m, "NoUniqueSteadyState", error);
  py::register_exception<NotInEitRegime>(m, "NotInEitRegime", error);
  py::register_exception<NeedsFinerGrid>(m, "NeedsFinerGrid", error);
  py::register_exception<RegimeError>(m, "RegimeError", error);
  py::register_exception<DegenerateFit>(m, "DegenerateFit", error);
  py::register_exception<SelectionFailure>(m, "SelectionFailure", error);
  py::register_exception<GuessFailure>(m, "GuessFailure", error);

  m.def("khz_to_angular", &units::khz_to_angular);
  m.def("angular_to_khz", &units::angular_to_khz);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("from_khz", &params_khz, py::arg("omega_sb"), py::arg("omega_p"),
                  py::arg("gamma"), py::arg("gamma_phi") = 0.0, py::arg("kappa") = 30.0,
                  py::arg("chi_qt") = 0.0, py::arg("delta_sb") = 0.0,
                  "Build from linear frequencies in kHz.")
      .def_readwrite("delta", &ModelParams::delta)
      .def_readwrite("delta_sb", &ModelParams::delta_sb)
      .def_readwrite("chi_qt", &ModelParams::chi_qt)
      .def_readwrite("omega_sb", &ModelParams::omega_sb)
      .def_readwrite("omega_p", &ModelParams::omega_p)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("gamma_phi", &ModelParams::gamma_phi)
      .def_readwrite("kappa", &ModelParams::kappa)
      .def("validate", &ModelParams::validate);

  py::class_<HilbertConfig>(m, "HilbertConfig")
      .def(py::init<>())
      .def_readwrite("fock_dim", &HilbertConfig::fock_dim)
      .def_readwrite("top_level_tolerance", &HilbertConfig::top_level_tolerance)
      .def_readwrite("max_fock_dim", &HilbertConfig::max_fock_dim)
      .def_readwrite("fock_step", &HilbertConfig::fock_step);

  py::class_<SteadyStateSolution>(m, "SteadyState")
      .def_readonly("fock_dim", &SteadyStateSolution::fock_dim)
      .def_property_readonly("matrix",
                             [](const SteadyStateSolution& s) { return s.rho.matrix; })
      .def_property_readonly("excited_population", [](const SteadyStateSolution& s) {
        return qubit_excited_population(s.rho);
      })
      .def_property_readonly("photon_number", [](const SteadyStateSolution& s) {
        return mean_photon_number(s.rho);
      });
  m.def("steady_state", &solve_adaptive, py::arg("params"),
        py::arg("hilbert") = HilbertConfig{});

  py::class_<SpectrumTrace>(m, "SpectrumTrace")
      .def(py::init<>())
      .def_readwrite("delta", &SpectrumTrace::delta)
      .def_readwrite("rho_ee", &SpectrumTrace::rho_ee)
      .def_readwrite("sigma", &SpectrumTrace::sigma)
      .def_readwrite("params", &SpectrumTrace::params)
      .def_readonly("hilbert", &SpectrumTrace::hilbert)
      .def("__len__", &SpectrumTrace::size);
  m.def("compute_spectrum", &compute_spectrum, py::arg("params"), py::arg("deltas"),
        py::arg("hilbert") = HilbertConfig{});
  m.def("default_sweep", &default_sweep);
  m.def("linspace", &linspace);

  py::class_<DipMetrics>(m, "DipMetrics")
      .def_readonly("width", &DipMetrics::width)
      .def_readonly("depth", &DipMetrics::depth)
      .def_readonly("total_linewidth", &DipMetrics::total_linewidth)
      .def_readonly("center", &DipMetrics::center)
      .def_readonly("baseline", &DipMetrics::baseline);
  m.def("measure_dip", &measure_dip);
  m.def("analytic_dip_width", &analytic_dip_width, py::arg("gamma"),
        py::arg("gamma_phi"), py::arg("kappa"), py::arg("omega_sb"));

  py::enum_<Regime>(m, "Regime")
      .value("EIT", Regime::EIT)
      .value("ATS", Regime::ATS)
      .value("INTERMEDIATE", Regime::INTERMEDIATE);
  m.def("classify_regime", &classify_regime, py::arg("gamma"), py::arg("gamma_phi"),
        py::arg("kappa"), py::arg("omega_sb"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("model", &FitResult::model)
      .def_readonly("names", &FitResult::names)
      .def_readonly("units", &FitResult::units)
      .def_readonly("values", &FitResult::values)
      .def_readonly("std_errors", &FitResult::std_errors)
      .def_readonly("rss", &FitResult::rss)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("message", &FitResult::message)
      .def("value", &FitResult::value)
      .def("std_error", &FitResult::std_error)
      .def("information_score", &FitResult::information_score);

  py::enum_<LineshapeModel>(m, "LineshapeModel")
      .value("LORENTZIAN", LineshapeModel::Lorentzian)
      .value("EIT", LineshapeModel::EIT)
      .value("ATS", LineshapeModel::ATS)
      .value("DOUBLE_LORENTZIAN", LineshapeModel::DoubleLorentzian);
  m.def(
      "fit_lineshape",
      [](const SpectrumTrace& t, LineshapeModel model, const std::vector<double>& guess) {
        return fit_lineshape(t, model, guess);
      },
      py::arg("trace"), py::arg("model"), py::arg("guess") = std::vector<double>{});

  py::class_<ModelSelection>(m, "ModelSelection")
      .def_readonly("selected", &ModelSelection::selected)
      .def_readonly("eit", &ModelSelection::eit)
      .def_readonly("ats", &ModelSelection::ats)
      .def_readonly("eit_score", &ModelSelection::eit_score)
      .def_readonly("ats_score", &ModelSelection::ats_score)
      .def_readonly("score_gap", &ModelSelection::score_gap);
  m.def("select_model", [](const SpectrumTrace& t) { return select_model(t); });

  m.def(
      "fit_master_equation",
      [](const SpectrumTrace& t, const ModelParams& start,
         const std::vector<std::string>& free, const HilbertConfig& h) {
        MasterFitConfig cfg;
        cfg.start = start;
        cfg.free = free;
        cfg.hilbert = h;
        return fit_master_equation(t, cfg);
      },
      py::arg("trace"), py::arg("start"),
      py::arg("free") = std::vector<std::string>{"kappa", "gamma", "omega_sb", "delta_sb"},
      py::arg("hilbert") = HilbertConfig{});
  m.def("apply_fit", &apply_fit);

  py::enum_<FluctuationTrend>(m, "FluctuationTrend")
      .value("TELEGRAPHIC", FluctuationTrend::Telegraphic)
      .value("DIFFUSIVE", FluctuationTrend::Diffusive);
  m.def("telegraphic_spectrum", &telegraphic_spectrum, py::arg("params"),
        py::arg("deltas"), py::arg("eta"), py::arg("hilbert") = HilbertConfig{});
  m.def("diffusive_spectrum", &diffusive_spectrum, py::arg("params"), py::arg("deltas"),
        py::arg("eta"), py::arg("n_sweeps") = 100, py::arg("hilbert") = HilbertConfig{});

  py::class_<PulseSpec>(m, "PulseSpec")
      .def(py::init<>())
      .def_readwrite("sigma", &PulseSpec::sigma)
      .def_readwrite("v_peak", &PulseSpec::v_peak);
  m.def("probe_conversion_factor", &probe_conversion_factor, py::arg("pulse"),
        py::arg("theta"));
  py::class_<ScalingEstimate>(m, "ScalingEstimate")
      .def_readonly("value", &ScalingEstimate::value)
      .def_readonly("ratio", &ScalingEstimate::ratio)
      .def_readonly("within_validity", &ScalingEstimate::within_validity);
  m.def("estimate_kappa_q", &estimate_kappa_q, py::arg("g_qt"), py::arg("delta_qt"),
        py::arg("gamma"));
}
