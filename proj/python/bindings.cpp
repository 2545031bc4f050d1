#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hcnqos/effective_capacity.hpp"
#include "hcnqos/errors.hpp"
#include "hcnqos/experiment.hpp"
#include "hcnqos/interference.hpp"
#include "hcnqos/scenario.hpp"

namespace py = pybind11;
using namespace hcnqos;

namespace {

py::dict sweep_to_dict(const SweepResult& r) {
  py::list eta_db, hd, hd_se, fd, fd_se, hd_lb, fd_lb, fd_lb_se;
  for (const SweepRow& row : r.rows) {
    eta_db.append(row.eta_db);
    hd.append(row.hd_exact.ec_bits);
    hd_se.append(row.hd_exact.std_error_bits);
    fd.append(row.fd_exact.ec_bits);
    fd_se.append(row.fd_exact.std_error_bits);
    hd_lb.append(row.hd_lb.ec_bits);
    fd_lb.append(row.fd_lb.ec_bits);
    fd_lb_se.append(row.fd_lb.std_error_bits);
  }
  py::dict d;
  d["eta_dB"] = eta_db;
  d["ec_hd_exact"] = hd;
  d["ec_hd_se"] = hd_se;
  d["ec_fd_exact"] = fd;
  d["ec_fd_se"] = fd_se;
  d["ec_hd_lb"] = hd_lb;
  d["ec_fd_lb"] = fd_lb;
  d["ec_fd_lb_se"] = fd_lb_se;
  d["fd_gain"] = fd_gain(r);
  d["crossover_eta_db"] = find_crossover(r);
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Effective capacity of FD/HD heterogeneous cellular networks";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<ConvergenceError> convergence(m, "ConvergenceError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const ConvergenceError& e) {
      py::set_error(convergence, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::enum_<DuplexMode>(m, "DuplexMode").value("hd", DuplexMode::hd).value("fd", DuplexMode::fd);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("macro_radius_m", &ScenarioConfig::macro_radius_m)
      .def_readwrite("macro_power_dbm", &ScenarioConfig::macro_power_dbm)
      .def_readwrite("macro_alpha", &ScenarioConfig::macro_alpha)
      .def_readwrite("pico_power_dbm", &ScenarioConfig::pico_power_dbm)
      .def_readwrite("pico_radius_m", &ScenarioConfig::pico_radius_m)
      .def_readwrite("pico_alpha", &ScenarioConfig::pico_alpha)
      .def_readwrite("pico_density_per_km2", &ScenarioConfig::pico_density_per_km2)
      .def_readwrite("hard_core_m", &ScenarioConfig::hard_core_m)
      .def_readwrite("mode", &ScenarioConfig::mode)
      .def_readwrite("eta", &ScenarioConfig::eta)
      .def_readwrite("kappa", &ScenarioConfig::kappa)
      .def_readwrite("theta", &ScenarioConfig::theta)
      .def_readwrite("frame_time_s", &ScenarioConfig::frame_time_s)
      .def_readwrite("bandwidth_hz", &ScenarioConfig::bandwidth_hz)
      .def_readwrite("noise_dbm", &ScenarioConfig::noise_dbm)
      .def_readwrite("ue_power_dbm", &ScenarioConfig::ue_power_dbm)
      .def_readwrite("topology_seed", &ScenarioConfig::topology_seed)
      .def_readwrite("trial_seed", &ScenarioConfig::trial_seed)
      .def_readwrite("trials", &ScenarioConfig::trials)
      .def_readwrite("lb_samples", &ScenarioConfig::lb_samples)
      .def_readwrite("tagged_index", &ScenarioConfig::tagged_index)
      .def_readwrite("topology_file", &ScenarioConfig::topology_file)
      .def("validate", &ScenarioConfig::validate)
      .def("__str__", &format_scenario);

  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
  m.def("load_scenario", [](const std::string& path) { return load_scenario(path); }, py::arg("path"));

  py::class_<NetworkTopology>(m, "NetworkTopology")
      .def_property_readonly("cell_count", [](const NetworkTopology& t) { return t.cells.size(); })
      .def_property_readonly("centers",
                             [](const NetworkTopology& t) {
                               std::vector<std::pair<double, double>> out;
                               for (const SmallCell& c : t.cells) out.emplace_back(c.center.x, c.center.y);
                               return out;
                             })
      .def_readonly("tagged_index", &NetworkTopology::tagged_index)
      .def_readonly("hard_core_m", &NetworkTopology::hard_core_m)
      .def_readonly("warnings", &NetworkTopology::warnings)
      .def_property_readonly("fingerprint", [](const NetworkTopology& t) { return fingerprint(t); });

  py::class_<LinkScenario>(m, "LinkScenario")
      .def_readonly("topology", &LinkScenario::topology)
      .def_readonly("noise_w", &LinkScenario::noise_w)
      .def_property(
          "eta", [](const LinkScenario& s) { return s.duplex.eta; },
          [](LinkScenario& s, double v) { s.duplex.eta = v; })
      .def_property(
          "mode", [](const LinkScenario& s) { return s.duplex.mode; },
          [](LinkScenario& s, DuplexMode v) { s.duplex.mode = v; })
      .def_property(
          "theta", [](const LinkScenario& s) { return s.qos.theta; },
          [](LinkScenario& s, double v) { s.qos.theta = v; })
      .def_property_readonly("beta", [](const LinkScenario& s) { return s.qos.beta(); });

  m.def("build_scenario", &build_scenario, py::arg("config") = ScenarioConfig{});

  py::class_<ECEstimate>(m, "ECEstimate")
      .def_readonly("ec_bits", &ECEstimate::ec_bits)
      .def_readonly("std_error_bits", &ECEstimate::std_error_bits)
      .def_readonly("trials", &ECEstimate::trials)
      .def_readonly("theta", &ECEstimate::theta)
      .def_readonly("mode", &ECEstimate::mode)
      .def_readonly("mean_rate_bits", &ECEstimate::mean_rate_bits)
      .def_readonly("bound_guaranteed", &ECEstimate::bound_guaranteed)
      .def_readonly("notes", &ECEstimate::notes)
      .def("__repr__", [](const ECEstimate& e) {
        std::ostringstream os;
        os << "ECEstimate(ec_bits=" << e.ec_bits << ", std_error_bits=" << e.std_error_bits
           << ", trials=" << e.trials << ")";
        return os.str();
      });

  m.def(
      "ec_exact_mc",
      [](const LinkScenario& s, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
        MonteCarloOptions o;
        o.trials = trials;
        o.seed = seed;
        o.workers = workers;
        py::gil_scoped_release release;
        return ec_exact_mc(s, o);
      },
      py::arg("scenario"), py::arg("trials") = 100000, py::arg("seed") = 1, py::arg("workers") = 1);

  m.def(
      "ec_lower_bound",
      [](const LinkScenario& s, std::uint64_t samples, std::uint64_t seed, bool simulated,
         unsigned workers) {
        LowerBoundOptions o;
        o.signal_samples = samples;
        o.seed = seed;
        o.workers = workers;
        o.source = simulated ? InterferenceSource::simulated : InterferenceSource::analytic;
        py::gil_scoped_release release;
        return ec_lower_bound(s, o);
      },
      py::arg("scenario"), py::arg("samples") = 100000, py::arg("seed") = 1,
      py::arg("simulated_interference") = false, py::arg("workers") = 1);

  m.def("make_eta_grid_db", &make_eta_grid_db, py::arg("from_db"), py::arg("to_db"), py::arg("step_db"));

  m.def(
      "sweep_eta",
      [](const LinkScenario& s, std::vector<double> eta_grid_db, std::uint64_t trials,
         std::uint64_t lb_samples, std::uint64_t seed, unsigned workers) {
        SweepOptions o;
        o.eta_grid_db = std::move(eta_grid_db);
        o.trials = trials;
        o.lb_samples = lb_samples;
        o.seed = seed;
        o.workers = workers;
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep_eta(s, o);
        }
        return sweep_to_dict(r);
      },
      py::arg("scenario"), py::arg("eta_grid_db"), py::arg("trials") = 100000,
      py::arg("lb_samples") = 100000, py::arg("seed") = 1, py::arg("workers") = 1,
      "Returns a dict of CSV columns plus fd_gain and crossover_eta_db.");

  m.def(
      "fd_gain", [](const py::dict& sweep) { return sweep["fd_gain"].cast<double>(); }, py::arg("sweep"));
  m.def(
      "find_crossover", [](const py::dict& sweep) { return sweep["crossover_eta_db"]; },
      py::arg("sweep"));

  m.def("mean_pathloss_taylor", &mean_pathloss_taylor, py::arg("d_m"), py::arg("radius_m"),
        py::arg("alpha"));
  m.def(
      "mean_pathloss_numeric",
      [](double d, double r, double a, double tol) { return mean_pathloss_numeric(d, r, a, tol); },
      py::arg("d_m"), py::arg("radius_m"), py::arg("alpha"), py::arg("rel_tol") = 1e-8);
  m.def("mean_interference_bs_ue", &mean_interference_bs_ue, py::arg("p_bs_w"), py::arg("d_m"),
        py::arg("r_victim_m"), py::arg("alpha"));
  m.def("mean_interference_ue_ue", &mean_interference_ue_ue, py::arg("p_ue_w"), py::arg("d_m"),
        py::arg("r_interferer_m"), py::arg("r_victim_m"), py::arg("alpha"));
  m.def(
      "total_mean_interference",
      [](const LinkScenario& s) {
        const MeanInterferenceBreakdown b = total_mean_interference(s.topology, s.duplex);
        py::dict d;
        d["total_w"] = b.total_w;
        d["bs_total_w"] = b.bs_total_w();
        d["ue_total_w"] = b.ue_total_w();
        d["warnings"] = b.warnings;
        return d;
      },
      py::arg("scenario"));

  m.def(
      "g", [](double s, double i, double a, double beta) { return g(s, i, GParams{a, beta}); },
      py::arg("s"), py::arg("interference"), py::arg("a"), py::arg("beta"));
  m.def(
      "g_second_derivative",
      [](double s, double i, double a, double beta) {
        return g_second_derivative(s, i, GParams{a, beta});
      },
      py::arg("s"), py::arg("interference"), py::arg("a"), py::arg("beta"));
  m.def(
      "g_concavity_check",
      [](double s, const std::vector<double>& grid, double a, double beta) {
        return g_concavity_check(GParams{a, beta}, s, grid);
      },
      py::arg("s"), py::arg("interference_grid"), py::arg("a"), py::arg("beta"));

  m.def(
      "check_theta_constraint",
      [](const ScenarioConfig& c) {
        const ThetaCheck t = check_theta_constraint(c.qos());
        return py::make_tuple(t.ok, t.bound);
      },
      py::arg("config"), "Returns (ok, theta_bound).");
}
