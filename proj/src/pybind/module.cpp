#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fdrsma/analytic.hpp"
#include "fdrsma/mathkern.hpp"
#include "fdrsma/montecarlo.hpp"
#include "fdrsma/scenario.hpp"
#include "fdrsma/sweep.hpp"

namespace py = pybind11;
using namespace fdrsma;

namespace {

py::dict estimate_to_dict(const McEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["stderr"] = e.std_err;
  d["trials"] = e.trials;
  return d;
}

McSettings make_settings(std::uint64_t trials, std::uint64_t seed, const std::string& estimator,
                         int workers) {
  McSettings s;
  s.trials = trials;
  s.seed = seed;
  s.workers = workers;
  if (estimator == "marginal") {
    s.estimator = Estimator::Marginal;
  } else if (estimator == "joint_chain") {
    s.estimator = Estimator::JointChain;
  } else {
    throw ConfigError("estimator must be 'marginal' or 'joint_chain'");
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_fdrsma, m) {
  m.doc() = "Outage and throughput evaluation for full-duplex rate-splitting networks";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<OracleError>(m, "OracleError");

  m.def("lower_regularized_gamma", &lower_regularized_gamma, py::arg("shape"), py::arg("x"));
  m.def("erlang_cdf", &erlang_cdf, py::arg("shape"), py::arg("x"));
  m.def("erlang_sf", &erlang_sf, py::arg("shape"), py::arg("x"));
  m.def("log_binomial", &log_binomial, py::arg("n"), py::arg("k"));
  m.def("dbm_to_linear_snr", &dbm_to_linear_snr, py::arg("p_dbm"), py::arg("noise_dbm"));

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("n_downlink", &SystemConfig::n_downlink)
      .def_readwrite("p_bs_dbm", &SystemConfig::p_bs_dbm)
      .def_readwrite("p_u1_dbm", &SystemConfig::p_u1_dbm)
      .def_readwrite("p_u2_dbm", &SystemConfig::p_u2_dbm)
      .def_readwrite("noise_dbm", &SystemConfig::noise_dbm)
      .def_readwrite("alpha_c", &SystemConfig::alpha_c)
      .def_readwrite("alpha_private", &SystemConfig::alpha_private)
      .def_readwrite("alpha_12", &SystemConfig::alpha_12)
      .def_readwrite("alpha_22", &SystemConfig::alpha_22)
      .def_readwrite("theta_sic", &SystemConfig::theta_sic)
      .def_readwrite("delta_si", &SystemConfig::delta_si)
      .def_readwrite("beta_d", &SystemConfig::beta_d)
      .def_readwrite("beta_u", &SystemConfig::beta_u)
      .def_readwrite("zeta", &SystemConfig::zeta)
      .def_readwrite("rate_common", &SystemConfig::rate_common)
      .def_readwrite("rate_private", &SystemConfig::rate_private)
      .def_readwrite("rate_u1", &SystemConfig::rate_u1)
      .def_readwrite("rate_u2", &SystemConfig::rate_u2)
      .def_readwrite("dist_bs_dl", &SystemConfig::dist_bs_dl)
      .def_readwrite("dist_u1_bs", &SystemConfig::dist_u1_bs)
      .def_readwrite("dist_u2_bs", &SystemConfig::dist_u2_bs)
      .def_readwrite("dist_u1_dl", &SystemConfig::dist_u1_dl)
      .def_readwrite("dist_u2_dl", &SystemConfig::dist_u2_dl)
      .def_readwrite("dist_si", &SystemConfig::dist_si)
      .def_readwrite("pl_exp_main", &SystemConfig::pl_exp_main)
      .def_readwrite("pl_exp_cci", &SystemConfig::pl_exp_cci)
      .def_readwrite("pl_exp_si", &SystemConfig::pl_exp_si)
      .def_readwrite("ref_distance", &SystemConfig::ref_distance)
      .def_readwrite("m_dl", &SystemConfig::m_dl)
      .def_readwrite("m_u1", &SystemConfig::m_u1)
      .def_readwrite("m_u2", &SystemConfig::m_u2)
      .def_readwrite("m_si", &SystemConfig::m_si)
      .def_readwrite("m_cci", &SystemConfig::m_cci)
      .def_readwrite("cci_enabled", &SystemConfig::cci_enabled)
      .def("__repr__", [](const SystemConfig& cfg) {
        std::ostringstream os;
        os << "SystemConfig(n_downlink=" << cfg.n_downlink << ", p_bs_dbm=" << cfg.p_bs_dbm
           << ", ...)";
        return os.str();
      });

  py::class_<LinkStats>(m, "LinkStats")
      .def_readonly("omega", &LinkStats::omega)
      .def_readonly("omega_err", &LinkStats::omega_err)
      .def_readonly("omega_hat", &LinkStats::omega_hat)
      .def_readonly("shape", &LinkStats::shape);

  py::class_<LinkSet>(m, "LinkSet")
      .def_readonly("dl", &LinkSet::dl)
      .def_readonly("cci1", &LinkSet::cci1)
      .def_readonly("cci2", &LinkSet::cci2)
      .def_readonly("u1", &LinkSet::u1)
      .def_readonly("u2", &LinkSet::u2)
      .def_readonly("si", &LinkSet::si)
      .def_readonly("rho_b", &LinkSet::rho_b)
      .def_readonly("rho_1", &LinkSet::rho_1)
      .def_readonly("rho_2", &LinkSet::rho_2);

  py::class_<Thresholds>(m, "Thresholds")
      .def_readonly("gamma_c", &Thresholds::gamma_c)
      .def_readonly("gamma_p", &Thresholds::gamma_p)
      .def_readonly("gamma_11", &Thresholds::gamma_11)
      .def_readonly("gamma_21", &Thresholds::gamma_21)
      .def_readonly("gamma_22", &Thresholds::gamma_22)
      .def_readonly("rate_u12", &Thresholds::rate_u12)
      .def_readonly("rate_u22", &Thresholds::rate_u22);

  py::class_<OutageBreakdown>(m, "OutageBreakdown")
      .def_readonly("p_common", &OutageBreakdown::p_common)
      .def_readonly("p_private", &OutageBreakdown::p_private)
      .def_readonly("p_dl", &OutageBreakdown::p_dl)
      .def_readonly("p21", &OutageBreakdown::p21)
      .def_readonly("p11", &OutageBreakdown::p11)
      .def_readonly("p22", &OutageBreakdown::p22)
      .def_readonly("p_ul1", &OutageBreakdown::p_ul1)
      .def_readonly("p_ul2", &OutageBreakdown::p_ul2);

  m.def("validate_config", [](const SystemConfig& cfg) { return validate_config(cfg); });
  m.def("build_link_stats", &build_link_stats, py::arg("cfg"));
  m.def("thresholds_from_rates", &thresholds_from_rates, py::arg("cfg"));
  m.def("perfect_limit", &perfect_limit, py::arg("cfg"));
  m.def("throughput", &throughput, py::arg("outage"), py::arg("rate_sum"));

  m.def(
      "analytic_outages",
      [](const SystemConfig& cfg) {
        validate_config(cfg);
        const LinkSet links = build_link_stats(cfg);
        const Thresholds thr = thresholds_from_rates(cfg);
        return analytic_outages(cfg, links, thr);
      },
      py::arg("cfg"));

  m.def(
      "oracle_outage_component",
      [](const SystemConfig& cfg, const std::string& component, int user) {
        validate_config(cfg);
        const LinkSet links = build_link_stats(cfg);
        const Thresholds thr = thresholds_from_rates(cfg);
        Component c;
        if (component == "dl_common") {
          c = Component::DlCommon;
        } else if (component == "dl_private") {
          c = Component::DlPrivate;
        } else if (component == "ul_21") {
          c = Component::Ul21;
        } else if (component == "ul_11") {
          c = Component::Ul11;
        } else if (component == "ul_22") {
          c = Component::Ul22;
        } else {
          throw ConfigError("unknown component: " + component);
        }
        const OracleResult r = integral_oracle(c, cfg, links, thr, user);
        if (!r.converged) throw OracleError("oracle did not converge");
        return r.value;
      },
      py::arg("cfg"), py::arg("component"), py::arg("user") = 0);

  m.def(
      "mc_outages",
      [](const SystemConfig& cfg, std::uint64_t trials, std::uint64_t seed,
         const std::string& estimator, int workers) {
        validate_config(cfg);
        const LinkSet links = build_link_stats(cfg);
        const Thresholds thr = thresholds_from_rates(cfg);
        const McOutageReport rep =
            estimate_outages(cfg, links, thr, make_settings(trials, seed, estimator, workers));
        py::dict d;
        py::list pc, pp, pdl;
        for (const auto& e : rep.p_common) pc.append(estimate_to_dict(e));
        for (const auto& e : rep.p_private) pp.append(estimate_to_dict(e));
        for (const auto& e : rep.p_dl) pdl.append(estimate_to_dict(e));
        d["p_common"] = pc;
        d["p_private"] = pp;
        d["p_dl"] = pdl;
        d["p21"] = estimate_to_dict(rep.p21);
        d["p11"] = estimate_to_dict(rep.p11);
        d["p22"] = estimate_to_dict(rep.p22);
        d["p_ul1"] = estimate_to_dict(rep.p_ul1);
        d["p_ul2"] = estimate_to_dict(rep.p_ul2);
        return d;
      },
      py::arg("cfg"), py::arg("trials") = 100000, py::arg("seed") = 12345,
      py::arg("estimator") = "marginal", py::arg("workers") = 0);

  m.def(
      "load_scenario", [](const std::string& path) { return load_scenario(path); },
      py::arg("path"));

  m.def(
      "run_recipe",
      [](const std::string& name, const std::string& out_path, std::uint64_t trials,
         std::uint64_t seed) {
        const SystemConfig base;
        McSettings mc;
        mc.trials = trials;
        mc.seed = seed;
        std::vector<std::string> written;
        const auto jobs = figure_recipe(name, base);
        for (const auto& job : jobs) {
          std::string path = out_path;
          if (jobs.size() > 1) {
            const auto dot = path.rfind('.');
            path = dot == std::string::npos ? path + "." + job.label
                                            : path.substr(0, dot) + "." + job.label +
                                                  path.substr(dot);
          }
          run_sweep_to_file(job.scenario, job.sweep, mc, path);
          written.push_back(path);
        }
        return written;
      },
      py::arg("name"), py::arg("out_path"), py::arg("trials") = 100000, py::arg("seed") = 12345);
}
