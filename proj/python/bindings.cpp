#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isac/analysis.hpp"
#include "isac/downlink.hpp"
#include "isac/errors.hpp"
#include "isac/experiment.hpp"
#include "isac/sensing.hpp"
#include "isac/uplink.hpp"

namespace py = pybind11;
using namespace isac;

namespace {

CorrelationMatrix target_from(const CMatrix& r) {
  return make_correlation(HermitianMatrix::from(r), CorrelationLabel::kTransmitTarget);
}

SlotNoiseProfile profile_from(const std::optional<std::vector<double>>& rho2, const SimConfig& cfg) {
  return rho2 ? SlotNoiseProfile{*rho2} : optimal_uplink_profile(cfg);
}

std::string run_to_csv(const std::string& spec_json) {
  std::ostringstream csv, log;
  run_experiment(parse_spec_json(spec_json), csv, log);
  return csv.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ISAC communication and sensing rate toolkit";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("M", &SimConfig::M)
      .def_readwrite("N", &SimConfig::N)
      .def_readwrite("K", &SimConfig::K)
      .def_readwrite("L", &SimConfig::L)
      .def_readwrite("rho_target", &SimConfig::rho_target)
      .def_readwrite("rho_cu", &SimConfig::rho_cu)
      .def_readwrite("p_c", &SimConfig::p_c)
      .def_readwrite("p_s", &SimConfig::p_s)
      .def_readwrite("trials", &SimConfig::trials)
      .def_readwrite("sigma_trials", &SimConfig::sigma_trials)
      .def_readwrite("outage_min_events", &SimConfig::outage_min_events)
      .def_readwrite("outage_max_trials", &SimConfig::outage_max_trials)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("threads", &SimConfig::threads)
      .def("validate", &SimConfig::validate);

  py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
      .def_readonly("mean", &MonteCarloEstimate::mean)
      .def_readonly("std_error", &MonteCarloEstimate::std_error)
      .def_readonly("trials", &MonteCarloEstimate::trials)
      .def_readonly("seed", &MonteCarloEstimate::seed)
      .def("__repr__", [](const MonteCarloEstimate& e) {
        return "MonteCarloEstimate(mean=" + format_number(e.mean) +
               ", std_error=" + format_number(e.std_error) + ", trials=" + std::to_string(e.trials) +
               ")";
      });

  py::class_<WaterfillSolution>(m, "WaterfillSolution")
      .def_readonly("allocation", &WaterfillSolution::allocation)
      .def_readonly("water_level", &WaterfillSolution::water_level)
      .def_readonly("active_set", &WaterfillSolution::active_set)
      .def_readonly("budget_used", &WaterfillSolution::budget_used);

  m.def("waterfill", [](const std::vector<double>& gains, const std::vector<double>& noise,
                        double budget) { return waterfill(gains, noise, budget); },
        py::arg("gains"), py::arg("noise"), py::arg("budget"));

  m.def("exp_correlation", [](int dim, double rho) { return exp_correlation(dim, rho).inner.matrix(); },
        py::arg("dim"), py::arg("rho"));

  m.def("dl_sum_rate", &dl_sum_rate, py::arg("h_d"), py::arg("p_c"));
  m.def("dual_mac_power_alloc",
        [](const CMatrix& h, double p_c) { return dual_mac_power_alloc(h, p_c).powers; },
        py::arg("h_d"), py::arg("p_c"));
  m.def("mac_to_bc_covariance",
        [](const CMatrix& h, const std::vector<double>& powers) {
          double total = 0.0;
          for (double p : powers) total += p;
          return mac_to_bc_covariance(h, PowerAllocation{powers, total}).matrix();
        },
        py::arg("h_d"), py::arg("powers"));
  m.def("ed_closed_form_iid", &ed_closed_form_iid, py::arg("M"), py::arg("K"));
  m.def("dl_ecr_asymptote", &dl_ecr_asymptote, py::arg("p_c"), py::arg("K"), py::arg("e_d"));

  m.def("dl_outage_prob", &dl_outage_prob, py::arg("cfg"), py::arg("rate_target"), py::arg("p_c"),
        py::call_guard<py::gil_scoped_release>());
  m.def("dl_ecr", &dl_ecr, py::arg("cfg"), py::arg("p_c"), py::call_guard<py::gil_scoped_release>());
  m.def("dl_ecr_fdsac", &dl_ecr_fdsac, py::arg("cfg"), py::arg("alpha"), py::arg("p_c"),
        py::call_guard<py::gil_scoped_release>());
  m.def("sigma2_effective",
        [](const SimConfig& cfg) {
          return sigma2_effective(cfg.target_correlation(), cached_mean_covariance(cfg));
        },
        py::arg("cfg"), py::call_guard<py::gil_scoped_release>());

  m.def("optimal_uplink_profile", [](const SimConfig& cfg) { return optimal_uplink_profile(cfg).rho2; },
        py::arg("cfg"));
  m.def("ul_slot_rate", &ul_slot_rate, py::arg("h_u"), py::arg("p_c"), py::arg("rho2"));
  m.def("ul_outage_prob",
        [](const SimConfig& cfg, double rate, double p_c, std::optional<std::vector<double>> rho2) {
          const SlotNoiseProfile prof = profile_from(rho2, cfg);
          py::gil_scoped_release release;
          return ul_outage_prob(cfg, rate, p_c, prof);
        },
        py::arg("cfg"), py::arg("rate_target"), py::arg("p_c"), py::arg("rho2") = py::none());
  m.def("ul_ecr",
        [](const SimConfig& cfg, double p_c, std::optional<std::vector<double>> rho2) {
          const SlotNoiseProfile prof = profile_from(rho2, cfg);
          py::gil_scoped_release release;
          return ul_ecr(cfg, p_c, prof);
        },
        py::arg("cfg"), py::arg("p_c"), py::arg("rho2") = py::none());
  m.def("ul_ecr_fdsac", &ul_ecr_fdsac, py::arg("cfg"), py::arg("alpha"), py::arg("p_c"),
        py::call_guard<py::gil_scoped_release>());

  m.def("dl_sr",
        [](const CMatrix& r_target, int N, int L, double sigma2, double p_s) {
          return dl_sr(SensingScenario{target_from(r_target), N, L, sigma2, p_s}).rate;
        },
        py::arg("r_target"), py::arg("N"), py::arg("L"), py::arg("sigma2"), py::arg("p_s"));
  m.def("ul_sr",
        [](const CMatrix& r_target, int N, int L, double p_s) {
          return ul_sr(target_from(r_target), N, L, p_s).rate;
        },
        py::arg("r_target"), py::arg("N"), py::arg("L"), py::arg("p_s"));
  m.def("sr_highsnr",
        [](const CMatrix& r_target, int N, int L, double p_s, double sigma2) {
          return sr_highsnr(target_from(r_target), N, L, p_s, sigma2).rate;
        },
        py::arg("r_target"), py::arg("N"), py::arg("L"), py::arg("p_s"), py::arg("sigma2"));
  m.def("fdsac_sr",
        [](const CMatrix& r_target, int N, int L, double p_s, double alpha) {
          return fdsac_sr(target_from(r_target), N, L, p_s, alpha);
        },
        py::arg("r_target"), py::arg("N"), py::arg("L"), py::arg("p_s"), py::arg("alpha"));

  m.def("fit_highsnr_slope",
        [](const std::vector<double>& db, const std::vector<double>& rate, double lo, double hi) {
          return fit_highsnr_slope(db, rate, lo, hi).slope;
        },
        py::arg("snr_db"), py::arg("rate"), py::arg("lo_db"), py::arg("hi_db"));
  m.def("fit_diversity",
        [](const std::vector<double>& db, const std::vector<double>& op) {
          return fit_diversity(db, op).diversity;
        },
        py::arg("p_db"), py::arg("op"));

  m.def("run_experiment", &run_to_csv, py::arg("spec_json"),
        "Runs a JSON experiment spec and returns the CSV text.",
        py::call_guard<py::gil_scoped_release>());
}
