#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sqznb/budget.hpp"
#include "sqznb/error.hpp"
#include "sqznb/estimate.hpp"
#include "sqznb/interferometer.hpp"
#include "sqznb/squeezing.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sqznb;

namespace {

PhaseNoise phase_noise(double phase_mrad, bool gaussian) {
  return PhaseNoise::from_mrad(phase_mrad, gaussian ? PhaseAveraging::kGaussian : PhaseAveraging::kSmallAngle);
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Squeezed-light quantum noise budgets (C++ core)";

  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
  py::register_exception<NoOptimumError>(m, "NoOptimumError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<SqueezedState>(m, "SqueezedState")
      .def(py::init<>())
      .def(py::init<double, double, double>(), "v_plus"_a, "v_minus"_a, "angle"_a = 0.0)
      .def_property_readonly("v_plus", &SqueezedState::v_plus)
      .def_property_readonly("v_minus", &SqueezedState::v_minus)
      .def_property_readonly("angle", &SqueezedState::angle)
      .def("variance_along", &SqueezedState::variance_along, "theta"_a)
      .def("__repr__", [](const SqueezedState& s) {
        return "SqueezedState(v_plus=" + format_double(s.v_plus()) + ", v_minus=" + format_double(s.v_minus()) +
               ", angle=" + format_double(s.angle()) + ")";
      });

  py::class_<PhaseNoise>(m, "PhaseNoise")
      .def(py::init([](double theta_rms, bool gaussian) {
             return PhaseNoise(theta_rms, gaussian ? PhaseAveraging::kGaussian : PhaseAveraging::kSmallAngle);
           }),
           "theta_rms"_a, "gaussian"_a = false)
      .def_property_readonly("theta_rms", &PhaseNoise::theta_rms)
      .def("leakage", &PhaseNoise::leakage);

  py::class_<LossChain>(m, "LossChain")
      .def(py::init<>())
      .def("add", &LossChain::add, "label"_a, "efficiency"_a)
      .def("total", &LossChain::total)
      .def_property_readonly("elements", [](const LossChain& c) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& e : c.elements()) out.emplace_back(e.label, e.efficiency);
        return out;
      });

  m.def("state_from_db", &state_from_db, "squeeze_db"_a, "angle"_a = 0.0);
  m.def("apply_loss", &apply_loss, "state"_a, "efficiency"_a);
  m.def("apply_phase_noise", &apply_phase_noise, "state"_a, "noise"_a);
  m.def("detected_db", &detected_db, "state"_a);
  m.def(
      "propagate",
      [](double inject_db, double efficiency, double phase_mrad, bool gaussian) {
        const auto p = propagate(inject_db, efficiency, phase_noise(phase_mrad, gaussian));
        return py::dict("injected"_a = p.injected, "after_loss"_a = p.after_loss, "detected"_a = p.detected,
                        "efficiency"_a = p.efficiency, "detected_db"_a = p.detected_db);
      },
      "inject_db"_a, "efficiency"_a, "phase_mrad"_a = 0.0, "gaussian"_a = false);

  py::class_<InterferometerConfig>(m, "InterferometerConfig")
      .def(py::init([](double arm_length, double mirror_mass, double arm_power, double cavity_pole,
                       double wavelength, std::string label) {
             InterferometerConfig c{std::move(label), arm_length, mirror_mass, arm_power, wavelength, cavity_pole};
             c.validate();
             return c;
           }),
           "arm_length"_a, "mirror_mass"_a, "arm_power"_a, "cavity_pole"_a, "wavelength"_a = 1064e-9,
           "label"_a = "ifo")
      .def_readwrite("label", &InterferometerConfig::label)
      .def_readwrite("arm_length", &InterferometerConfig::arm_length)
      .def_readwrite("mirror_mass", &InterferometerConfig::mirror_mass)
      .def_readwrite("arm_power", &InterferometerConfig::arm_power)
      .def_readwrite("wavelength", &InterferometerConfig::wavelength)
      .def_readwrite("cavity_pole", &InterferometerConfig::cavity_pole)
      .def_static("pole_from_finesse", &InterferometerConfig::pole_from_finesse, "finesse"_a, "arm_length"_a)
      .def_static("finesse_from_bounces", &InterferometerConfig::finesse_from_bounces, "bounces"_a);

  py::class_<AnglePolicy>(m, "AnglePolicy")
      .def_static("none", &AnglePolicy::none)
      .def_static("fixed", &AnglePolicy::fixed, "angle"_a)
      .def_static("fd_optimal", &AnglePolicy::fd_optimal)
      .def_property_readonly("name", &AnglePolicy::name)
      .def_property_readonly("angle", &AnglePolicy::angle);

  py::class_<SqueezerSetup>(m, "SqueezerSetup")
      .def(py::init([](double inject_db, double efficiency, double phase_mrad, AnglePolicy policy, bool gaussian) {
             SqueezerSetup s;
             s.inject_db = inject_db;
             if (efficiency < 1.0) s.chain = LossChain::single(efficiency);
             s.phase_noise = phase_noise(phase_mrad, gaussian);
             s.policy = policy;
             s.validate();
             return s;
           }),
           "inject_db"_a = 0.0, "efficiency"_a = 1.0, "phase_mrad"_a = 0.0, "policy"_a = AnglePolicy::none(),
           "gaussian"_a = false)
      .def_readwrite("inject_db", &SqueezerSetup::inject_db)
      .def_readwrite("chain", &SqueezerSetup::chain)
      .def_readwrite("phase_noise", &SqueezerSetup::phase_noise)
      .def_readwrite("policy", &SqueezerSetup::policy)
      .def("detected_state", &SqueezerSetup::detected_state);

  m.def(
      "sql_asd",
      [](const InterferometerConfig& c, const py::array_t<double>& f) {
        return py::vectorize([&c](double x) { return sql_asd(c, x); })(f);
      },
      "config"_a, "f"_a);
  m.def(
      "coupling_kappa",
      [](const InterferometerConfig& c, const py::array_t<double>& f) {
        return py::vectorize([&c](double x) { return coupling_kappa(c, x); })(f);
      },
      "config"_a, "f"_a);
  m.def("quantum_noise_asd", &quantum_noise_asd, "config"_a, "setup"_a, "f"_a);
  m.def(
      "quantum_noise_curve",
      [](const InterferometerConfig& c, const SqueezerSetup& s, const std::vector<double>& grid) {
        std::vector<double> asd;
        {
          py::gil_scoped_release release;
          asd = quantum_noise_curve(c, s, grid).asd;
        }
        return to_array(asd);
      },
      "config"_a, "setup"_a, "grid"_a);

  m.def(
      "make_grid",
      [](double f_min, double f_max, std::size_t points, const std::string& spacing) {
        if (spacing != "log" && spacing != "linear") throw InvalidArgument("spacing must be 'log' or 'linear'");
        return to_array(make_grid(f_min, f_max, points, spacing == "log" ? GridSpacing::kLog : GridSpacing::kLinear));
      },
      "f_min"_a, "f_max"_a, "points"_a, "spacing"_a = "log");
  m.def(
      "ingest_asd",
      [](const std::filesystem::path& path) {
        const auto table = ingest_asd(path);
        std::vector<double> f, a;
        for (const auto& r : table.rows) {
          f.push_back(r.frequency);
          a.push_back(r.asd);
        }
        return py::make_tuple(to_array(f), to_array(a));
      },
      "path"_a, "Read a two-column ASD CSV; returns (frequencies, asd).");
  m.def(
      "resample",
      [](const std::vector<double>& freqs, const std::vector<double>& asd, const std::vector<double>& grid) {
        if (freqs.size() != asd.size()) throw InvalidArgument("frequency and ASD columns differ in length");
        TabulatedASD table;
        for (std::size_t i = 0; i < freqs.size(); ++i) table.rows.push_back({freqs[i], asd[i]});
        return to_array(resample(table, grid));
      },
      "frequencies"_a, "asd"_a, "grid"_a);

  py::class_<NoiseBudget>(m, "NoiseBudget")
      .def_property_readonly("grid", [](const NoiseBudget& b) { return to_array(b.grid); })
      .def_property_readonly("total", [](const NoiseBudget& b) { return to_array(b.total); })
      .def_property_readonly("labels", [](const NoiseBudget& b) {
        std::vector<std::string> out;
        for (const auto& c : b.components) out.push_back(c.label);
        return out;
      })
      .def("component", [](const NoiseBudget& b, const std::string& label) {
        const auto* c = b.find(label);
        if (!c) throw py::key_error(label);
        return to_array(c->asd);
      });
  m.def(
      "compose",
      [](const std::vector<double>& grid, const std::vector<std::pair<std::string, std::vector<double>>>& comps) {
        std::vector<NoiseComponent> components;
        for (const auto& [label, asd] : comps) components.push_back({label, asd});
        return compose(grid, std::move(components));
      },
      "grid"_a, "components"_a, "components: list of (label, asd) pairs");

  py::class_<Improvement>(m, "Improvement")
      .def_readonly("median_db", &Improvement::median_db)
      .def_readonly("max_db", &Improvement::max_db)
      .def_readonly("max_at_hz", &Improvement::max_at_hz)
      .def_readonly("points", &Improvement::points);
  m.def("improvement_db", &improvement_db, "reference"_a, "squeezed"_a, "band"_a);
  m.def("equivalent_power_increase", &equivalent_power_increase, "improvement_db"_a);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("estimate", &FitResult::estimate)
      .def_readonly("residual", &FitResult::residual)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("bracket", &FitResult::bracket);
  m.def(
      "fit_efficiency",
      [](double inject_db, double detected, double phase_mrad, bool gaussian) {
        return fit_efficiency(inject_db, detected, phase_noise(phase_mrad, gaussian));
      },
      "inject_db"_a, "detected_db"_a, "phase_mrad"_a = 0.0, "gaussian"_a = false);

  py::class_<UncertaintyResult>(m, "UncertaintyResult")
      .def_readonly("nominal_db", &UncertaintyResult::nominal_db)
      .def_readonly("mean_db", &UncertaintyResult::mean_db)
      .def_readonly("sigma_db", &UncertaintyResult::sigma_db)
      .def_readonly("linear_sigma_db", &UncertaintyResult::linear_sigma_db)
      .def_readonly("samples", &UncertaintyResult::samples)
      .def_readonly("seed", &UncertaintyResult::seed)
      .def_readonly("clamped_inject", &UncertaintyResult::clamped_inject)
      .def_readonly("clamped_efficiency", &UncertaintyResult::clamped_efficiency)
      .def_readonly("clamped_theta", &UncertaintyResult::clamped_theta);
  m.def(
      "mc_uncertainty",
      [](std::pair<double, double> inject_db, std::pair<double, double> efficiency,
         std::pair<double, double> phase_mrad, std::size_t samples, std::uint64_t seed, bool gaussian) {
        UncertaintyInputs in;
        in.inject_db = {inject_db.first, inject_db.second};
        in.efficiency = {efficiency.first, efficiency.second};
        in.theta_rms = {phase_mrad.first * 1e-3, phase_mrad.second * 1e-3};
        in.averaging = gaussian ? PhaseAveraging::kGaussian : PhaseAveraging::kSmallAngle;
        py::gil_scoped_release release;
        return mc_uncertainty(in, samples, seed);
      },
      "inject_db"_a = std::pair{10.3, 0.2}, "efficiency"_a = std::pair{0.44, 0.02},
      "phase_mrad"_a = std::pair{37.0, 6.0}, "samples"_a = 100000, "seed"_a = 42, "gaussian"_a = false,
      "Each input is a (value, sigma) pair.");

  py::class_<OptimalInjection>(m, "OptimalInjection")
      .def_readonly("inject_db", &OptimalInjection::inject_db)
      .def_readonly("detected_db", &OptimalInjection::detected_db)
      .def_readonly("iterations", &OptimalInjection::iterations);
  m.def(
      "optimal_inject_db",
      [](double efficiency, double phase_mrad, bool gaussian) {
        return optimal_inject_db(efficiency, phase_noise(phase_mrad, gaussian));
      },
      "efficiency"_a, "phase_mrad"_a, "gaussian"_a = false);
}
