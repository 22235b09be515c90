#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diffwave/acceptance.hpp"
#include "diffwave/closures.hpp"
#include "diffwave/config.hpp"
#include "diffwave/diagnostics.hpp"
#include "diffwave/diffusion_wave.hpp"
#include "diffwave/errors.hpp"
#include "diffwave/io.hpp"
#include "diffwave/simulation.hpp"

namespace py = pybind11;
using namespace diffwave;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Diffusion waves of the damped p-system";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<BlowUpError>(m, "BlowUpError", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<ModelClosure>(m, "ModelClosure")
      .def_static("m1", &ModelClosure::m1, py::arg("sigma") = 1.0)
      .def_static("gamma_law", &ModelClosure::gamma_law, py::arg("gamma"), py::arg("alpha"))
      .def_static("linear", &ModelClosure::linear, py::arg("slope"), py::arg("alpha"))
      .def_property_readonly("name", &ModelClosure::name)
      .def_property_readonly("alpha", &ModelClosure::alpha)
      .def("p", &ModelClosure::p)
      .def("dp", &ModelClosure::dp)
      .def("g", &ModelClosure::g)
      .def("f", &ModelClosure::f)
      .def("characteristic_speeds",
           [](const ModelClosure& c, double v, double u) { return characteristic_speeds(c, v, u); })
      .def("__repr__", [](const ModelClosure& c) { return "<ModelClosure " + c.name() + ">"; });

  py::class_<ProfileOptions>(m, "ProfileOptions")
      .def(py::init<>())
      .def_readwrite("xi_max", &ProfileOptions::xi_max)
      .def_readwrite("n_cells", &ProfileOptions::n_cells)
      .def_readwrite("tol", &ProfileOptions::tol)
      .def_readwrite("max_iterations", &ProfileOptions::max_iterations)
      .def_readwrite("extrapolate", &ProfileOptions::extrapolate);

  py::class_<WaveProfile>(m, "WaveProfile")
      .def_readonly("xi", &WaveProfile::xi)
      .def_readonly("phi", &WaveProfile::phi)
      .def_readonly("dphi", &WaveProfile::dphi)
      .def_readonly("v_minus", &WaveProfile::v_minus)
      .def_readonly("v_plus", &WaveProfile::v_plus)
      .def_readonly("newton_residual", &WaveProfile::newton_residual)
      .def_readonly("newton_iterations", &WaveProfile::newton_iterations)
      .def("derivatives_at", &WaveProfile::derivatives_at)
      .def("vbar", [](const WaveProfile& p, double x, double t, int dx, int dt) {
             return eval_vbar(p, x, t, dx, dt);
           }, py::arg("x"), py::arg("t"), py::arg("dx_order") = 0, py::arg("dt_order") = 0)
      .def("ubar", [](const WaveProfile& p, double x, double t) { return eval_ubar(p, x, t); });

  m.def("solve_profile", &solve_profile, py::arg("closure"), py::arg("v_minus"),
        py::arg("v_plus"), py::arg("alpha"), py::arg("options") = ProfileOptions{});

  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def_readwrite("closure", &ScenarioSpec::closure)
      .def_readwrite("v_minus", &ScenarioSpec::v_minus)
      .def_readwrite("v_plus", &ScenarioSpec::v_plus)
      .def_readwrite("u_minus", &ScenarioSpec::u_minus)
      .def_readwrite("u_plus", &ScenarioSpec::u_plus)
      .def_readwrite("n_cells", &ScenarioSpec::n_cells)
      .def_readwrite("x_max", &ScenarioSpec::x_max)
      .def_readwrite("end_time", &ScenarioSpec::end_time)
      .def_readwrite("cfl", &ScenarioSpec::cfl)
      .def_readwrite("n_samples", &ScenarioSpec::n_samples)
      .def_readwrite("profile", &ScenarioSpec::profile)
      .def("sample_times", &ScenarioSpec::sample_times);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("scenario", &RunConfig::scenario)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readonly("preset", &RunConfig::preset);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("preset_config", &preset_config, py::arg("name"));
  m.def("serialize_config", &serialize_config, py::arg("config"));

  py::class_<DiagnosticsSeries>(m, "DiagnosticsSeries")
      .def_readonly("x0", &DiagnosticsSeries::x0)
      .def_readonly("max_abs_u", &DiagnosticsSeries::max_abs_u)
      .def_readonly("min_v", &DiagnosticsSeries::min_v)
      .def_readonly("steps", &DiagnosticsSeries::steps)
      .def_readonly("complete", &DiagnosticsSeries::complete)
      .def("times", &DiagnosticsSeries::times)
      .def("column", &DiagnosticsSeries::column)
      .def("to_csv", [](const DiagnosticsSeries& s) { return format_series_csv(s); });

  m.def("simulate", [](const ScenarioSpec& spec) {
    const auto profile = solve_profile(spec.closure, spec.v_minus, spec.v_plus, spec.alpha(),
                                       spec.profile);
    py::gil_scoped_release release;
    return run(spec, profile, spec.corrections());
  }, py::arg("spec"), "Solve the profile and run the scenario to spec.end_time.");

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("exponent", &RateFit::exponent)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("n_points", &RateFit::n_points)
      .def_readonly("passed", &RateFit::pass);

  m.def("fit_decay_rate",
        [](const std::vector<double>& t, const std::vector<double>& values, double t_lo,
           double t_hi, double target, double tolerance) {
          return fit_decay_rate(t, values, t_lo, t_hi, target, tolerance);
        },
        py::arg("t"), py::arg("values"), py::arg("t_lo"), py::arg("t_hi"),
        py::arg("target") = 0.0, py::arg("tolerance") = 0.0);

  m.def("verify",
        [](bool fast, const std::string& out_dir, double profile_tol, unsigned threads) {
          AcceptanceOptions opt;
          opt.fast = fast;
          opt.out_dir = out_dir;
          opt.profile_tol = profile_tol;
          opt.threads = threads;
          AcceptanceReport report;
          {
            py::gil_scoped_release release;
            report = run_acceptance(opt);
          }
          py::dict out;
          for (const auto& c : report.criteria) {
            out[py::str(c.id)] = c.skipped ? py::object(py::none()) : py::bool_(c.pass());
          }
          return out;
        },
        py::arg("fast") = true, py::arg("out_dir") = "", py::arg("profile_tol") = 1e-10,
        py::arg("threads") = 0,
        "Run the acceptance suite; maps criterion id to pass (None when skipped).");
}
