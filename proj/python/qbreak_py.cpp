#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbreak/dynamics.hpp"
#include "qbreak/errors.hpp"
#include "qbreak/model.hpp"
#include "qbreak/semiclassics.hpp"
#include "qbreak/specfun.hpp"
#include "qbreak/spectrum.hpp"
#include "qbreak/sweep.hpp"

namespace py = pybind11;
using namespace qbreak;

namespace {

PotentialSpec make_spec(const std::string& well, int alpha, int beta) {
  if (well == "single") return PotentialSpec::single_well(beta);
  if (well == "double") return PotentialSpec::double_well(alpha, beta);
  if (well == "harmonic") return PotentialSpec::harmonic();
  throw ConfigError("well must be 'single', 'double' or 'harmonic'");
}

ParityFilter parse_filter(const std::string& p) {
  if (p == "even") return ParityFilter::Even;
  if (p == "odd") return ParityFilter::Odd;
  if (p == "both") return ParityFilter::Both;
  throw ConfigError("parity must be 'even', 'odd' or 'both'");
}

}  // namespace

PYBIND11_MODULE(qbreak, m) {
  m.doc() = "Spectra, survival-probability spectra and Ehrenfest frequencies of polynomial wells";

  static py::exception<Error> base_error(m, "Error");
  static py::exception<DomainError> domain_error(m, "DomainError", base_error.ptr());
  static py::exception<ConfigError> config_error(m, "ConfigError", base_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      py::set_error(domain_error, e.what());
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const Error& e) {
      py::set_error(base_error, e.what());
    }
  });

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init(&make_spec), py::arg("well") = "double", py::arg("alpha") = 1, py::arg("beta") = 2)
      .def_readonly("alpha", &PotentialSpec::alpha)
      .def_readonly("beta", &PotentialSpec::beta)
      .def_property_readonly("is_double", &PotentialSpec::is_double)
      .def("__repr__", [](const PotentialSpec& s) { return "PotentialSpec(" + describe(s) + ")"; });

  m.def("potential_value", &potential_value, py::arg("spec"), py::arg("q"));
  m.def("potential_minimum", &potential_minimum, py::arg("spec"));
  m.def("turning_points", &turning_points, py::arg("spec"), py::arg("eps"));
  m.def("action_area", &action_area, py::arg("spec"), py::arg("eps"));
  m.def("weyl_count", &weyl_count, py::arg("spec"), py::arg("eps"), py::arg("hbar"));
  m.def("classical_period", &classical_period, py::arg("spec"), py::arg("eps"));

  m.def("gamma", &specfun::gamma_real, py::arg("x"));
  m.def("arg_gamma_half_plus_it", &specfun::arg_gamma_half_plus_it, py::arg("t"));
  m.def("bessel_k0", &specfun::bessel_k0, py::arg("x"));

  py::class_<EigenState>(m, "EigenState")
      .def_readonly("n", &EigenState::n)
      .def_readonly("energy", &EigenState::energy)
      .def_property_readonly("parity", [](const EigenState& s) { return std::string(to_string(s.parity)); })
      .def_property_readonly("step", [](const EigenState& s) { return s.grid.step; })
      .def("samples", &EigenState::samples);

  m.def(
      "solve_eigen_window",
      [](const PotentialSpec& spec, double hbar, double eps_min, double eps_max, const std::string& parity) {
        return solve_eigen_window(spec, hbar, eps_min, eps_max, parse_filter(parity)).states;
      },
      py::arg("spec"), py::arg("hbar"), py::arg("eps_min"), py::arg("eps_max"), py::arg("parity") = "both");
  m.def("dense_oracle", &dense_oracle, py::arg("spec"), py::arg("hbar"), py::arg("q_max"), py::arg("grid_points"),
        py::arg("k"));

  m.def("wkb_delta", &semiclassics::wkb_delta, py::arg("beta"));
  m.def("wkb_energy", &semiclassics::wkb_energy, py::arg("beta"), py::arg("hbar"), py::arg("n"));
  m.def("wkb_weight", &semiclassics::wkb_weight, py::arg("beta"), py::arg("hbar"), py::arg("eps"));
  m.def("limit_distribution", &semiclassics::limit_distribution, py::arg("nu"));
  m.def(
      "regwkb_roots",
      [](double hbar, double eps_min, double eps_max) {
        std::vector<double> out;
        for (const auto& r : semiclassics::regwkb_roots(hbar, eps_min, eps_max).roots) out.push_back(r.energy);
        return out;
      },
      py::arg("hbar"), py::arg("eps_min"), py::arg("eps_max"));

  py::class_<EhrenfestPoint>(m, "EhrenfestPoint")
      .def_readonly("hbar", &EhrenfestPoint::hbar)
      .def_readonly("nu_e", &EhrenfestPoint::nu_e)
      .def_readonly("eps_lo", &EhrenfestPoint::eps_lo)
      .def_readonly("eps_hi", &EhrenfestPoint::eps_hi)
      .def_property_readonly("method", [](const EhrenfestPoint& p) { return to_string(p.method); })
      .def_property_readonly("inverse", &EhrenfestPoint::inverse);

  m.def("single_well_ehrenfest", &semiclassics::single_well_ehrenfest, py::arg("beta"), py::arg("hbar"));
  m.def(
      "regwkb_ehrenfest", [](double hbar) { return semiclassics::regwkb_ehrenfest(hbar); }, py::arg("hbar"));
  m.def(
      "numeric_ehrenfest",
      [](const PotentialSpec& spec, double hbar, double weight_floor) {
        NumericRunOptions opts;
        opts.weight_floor = weight_floor;
        const NumericRun run = numeric_ehrenfest(spec, hbar, opts);
        py::dict d;
        d["point"] = run.point;
        d["captured_mass"] = run.overlaps.captured_mass;
        d["max_odd_weight"] = run.max_odd_weight;
        std::vector<std::tuple<int, double, double>> entries;
        for (const auto& e : run.overlaps.entries) entries.emplace_back(e.n, e.energy, e.weight);
        d["entries"] = entries;
        return d;
      },
      py::arg("spec"), py::arg("hbar"), py::arg("weight_floor") = kDefaultWeightFloor);

  m.def("log_spaced_hbar", &log_spaced_hbar, py::arg("hbar_max"), py::arg("hbar_min"), py::arg("per_decade") = 8);
  m.def(
      "run_sweep",
      [](const PotentialSpec& spec, const std::vector<double>& hbars, const std::string& method) {
        SweepConfig cfg;
        cfg.spec = spec;
        cfg.hbar_values = hbars;
        cfg.method = parse_method(method);
        return run_sweep(cfg).points();
      },
      py::arg("spec"), py::arg("hbar_values"), py::arg("method") = "numeric");
  m.def(
      "fit_scaling",
      [](const std::vector<EhrenfestPoint>& points, const std::string& model) {
        const ScalingFit f = fit_scaling(points, parse_scaling_model(model));
        py::dict d;
        d["model"] = to_string(f.model);
        d["slope"] = f.slope;
        d["intercept"] = f.intercept;
        d["r_squared"] = f.r_squared;
        return d;
      },
      py::arg("points"), py::arg("model") = "power_law");
}
