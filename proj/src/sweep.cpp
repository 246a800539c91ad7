#include "fdrsma/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fdrsma/analytic.hpp"

namespace fdrsma {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key '" + key + "': " + s);
  }
}

}  // namespace

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::PBsDbm: return "p_bs_dbm";
    case SweepVariable::PUDbm: return "p_u_dbm";
    case SweepVariable::ThetaSic: return "theta_sic";
    case SweepVariable::DeltaSi: return "delta_si";
    case SweepVariable::Beta: return "beta";
    case SweepVariable::Zeta: return "zeta";
  }
  return "?";
}

const char* to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Analytic: return "analytic";
    case SweepMode::McMarginal: return "mc_marginal";
    case SweepMode::McJoint: return "mc_joint";
    case SweepMode::Oracle: return "oracle";
    case SweepMode::Noma: return "noma";
    case SweepMode::Hd: return "hd";
  }
  return "?";
}

const char* to_string(SweepOutput o) {
  return o == SweepOutput::Op ? "op" : "throughput";
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  for (SweepVariable v : {SweepVariable::PBsDbm, SweepVariable::PUDbm, SweepVariable::ThetaSic,
                          SweepVariable::DeltaSi, SweepVariable::Beta, SweepVariable::Zeta}) {
    if (s == to_string(v)) return v;
  }
  throw ConfigError("unknown sweep variable: " + s);
}

SweepMode sweep_mode_from_string(const std::string& s) {
  for (SweepMode m : {SweepMode::Analytic, SweepMode::McMarginal, SweepMode::McJoint,
                      SweepMode::Oracle, SweepMode::Noma, SweepMode::Hd}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown sweep mode: " + s);
}

SweepOutput sweep_output_from_string(const std::string& s) {
  if (s == "op") return SweepOutput::Op;
  if (s == "throughput") return SweepOutput::Throughput;
  throw ConfigError("unknown sweep output: " + s);
}

// ---------------------------------------------------------------------------
// Scenario files.

namespace {

struct KvStore {
  std::map<std::string, std::vector<std::string>> values;

  bool has(const std::string& k) const { return values.count(k) != 0; }

  std::string scalar(const std::string& k) const {
    const auto& v = values.at(k);
    if (v.size() != 1) throw ConfigError("key '" + k + "' expects a single value");
    return v[0];
  }
};

const char* kListKeys[] = {"alpha_private", "rate_common", "rate_private",
                           "dist_bs_dl",    "dist_u1_dl",  "dist_u2_dl"};

bool is_list_key(const std::string& k) {
  for (const char* s : kListKeys) {
    if (k == s) return true;
  }
  return false;
}

const char* kScalarKeys[] = {
    "n_downlink", "p_bs_dbm",  "p_u1_dbm",   "p_u2_dbm",   "noise_dbm",  "alpha_c",
    "alpha_12",   "alpha_22",  "theta_sic",  "delta_si",   "beta_d",     "beta_u",
    "zeta",       "rate_u1",   "rate_u2",    "dist_u1_bs", "dist_u2_bs", "dist_si",
    "pl_exp_main", "pl_exp_cci", "pl_exp_si", "ref_distance", "m_dl",    "m_u1",
    "m_u2",       "m_si",      "m_cci",      "cci_enabled", "s2_interpretation",
    "noma_dl_power"};

bool is_known_key(const std::string& k) {
  if (is_list_key(k)) return true;
  for (const char* s : kScalarKeys) {
    if (k == s) return true;
  }
  return false;
}

}  // namespace

SystemConfig parse_scenario(std::istream& in, const std::string& origin) {
  KvStore kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known_key(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    for (const std::string& tok : split(value, ',')) {
      if (!tok.empty()) kv.values[key].push_back(tok);
    }
  }

  SystemConfig cfg;
  const auto dbl = [&](const char* k, double& field) {
    if (kv.has(k)) field = parse_double(kv.scalar(k), k);
  };
  const auto integer = [&](const char* k, int& field) {
    if (kv.has(k)) field = static_cast<int>(parse_double(kv.scalar(k), k));
  };
  const auto list = [&](const char* k, std::vector<double>& field) {
    if (!kv.has(k)) return;
    field.clear();
    for (const std::string& tok : kv.values.at(k)) field.push_back(parse_double(tok, k));
  };

  integer("n_downlink", cfg.n_downlink);
  dbl("p_bs_dbm", cfg.p_bs_dbm);
  dbl("p_u1_dbm", cfg.p_u1_dbm);
  dbl("p_u2_dbm", cfg.p_u2_dbm);
  dbl("noise_dbm", cfg.noise_dbm);
  dbl("alpha_c", cfg.alpha_c);
  list("alpha_private", cfg.alpha_private);
  dbl("alpha_12", cfg.alpha_12);
  dbl("alpha_22", cfg.alpha_22);
  dbl("theta_sic", cfg.theta_sic);
  dbl("delta_si", cfg.delta_si);
  dbl("beta_d", cfg.beta_d);
  dbl("beta_u", cfg.beta_u);
  dbl("zeta", cfg.zeta);
  list("rate_common", cfg.rate_common);
  list("rate_private", cfg.rate_private);
  dbl("rate_u1", cfg.rate_u1);
  dbl("rate_u2", cfg.rate_u2);
  list("dist_bs_dl", cfg.dist_bs_dl);
  dbl("dist_u1_bs", cfg.dist_u1_bs);
  dbl("dist_u2_bs", cfg.dist_u2_bs);
  list("dist_u1_dl", cfg.dist_u1_dl);
  list("dist_u2_dl", cfg.dist_u2_dl);
  dbl("dist_si", cfg.dist_si);
  dbl("pl_exp_main", cfg.pl_exp_main);
  dbl("pl_exp_cci", cfg.pl_exp_cci);
  dbl("pl_exp_si", cfg.pl_exp_si);
  dbl("ref_distance", cfg.ref_distance);
  integer("m_dl", cfg.m_dl);
  integer("m_u1", cfg.m_u1);
  integer("m_u2", cfg.m_u2);
  integer("m_si", cfg.m_si);
  integer("m_cci", cfg.m_cci);

  if (kv.has("cci_enabled")) {
    const std::string v = kv.scalar("cci_enabled");
    if (v == "true" || v == "1") {
      cfg.cci_enabled = true;
    } else if (v == "false" || v == "0") {
      cfg.cci_enabled = false;
    } else {
      throw ConfigError("cci_enabled must be true/false");
    }
  }
  if (kv.has("s2_interpretation")) {
    const std::string v = kv.scalar("s2_interpretation");
    if (v == "sum_all_private") {
      cfg.s2_interpretation = S2Interpretation::SumAllPrivate;
    } else if (v == "literal_n_times_own") {
      cfg.s2_interpretation = S2Interpretation::LiteralNTimesOwn;
    } else {
      throw ConfigError("s2_interpretation must be sum_all_private or literal_n_times_own");
    }
  }
  if (kv.has("noma_dl_power")) {
    const std::string v = kv.scalar("noma_dl_power");
    if (v == "equal") {
      cfg.noma_dl_power = NomaDlPower::Equal;
    } else if (v == "private_renorm") {
      cfg.noma_dl_power = NomaDlPower::PrivateRenorm;
    } else if (v == "common_shared") {
      cfg.noma_dl_power = NomaDlPower::CommonShared;
    } else {
      throw ConfigError("noma_dl_power must be equal, private_renorm or common_shared");
    }
  }
  return cfg;
}

SystemConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  return parse_scenario(in, path);
}

void write_scenario(const SystemConfig& cfg, std::ostream& out) {
  const auto join = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += fmt(v[i]);
    }
    return s;
  };
  out << "n_downlink = " << cfg.n_downlink << "\n";
  out << "p_bs_dbm = " << fmt(cfg.p_bs_dbm) << "\n";
  out << "p_u1_dbm = " << fmt(cfg.p_u1_dbm) << "\n";
  out << "p_u2_dbm = " << fmt(cfg.p_u2_dbm) << "\n";
  out << "noise_dbm = " << fmt(cfg.noise_dbm) << "\n";
  out << "alpha_c = " << fmt(cfg.alpha_c) << "\n";
  out << "alpha_private = " << join(cfg.alpha_private) << "\n";
  out << "alpha_12 = " << fmt(cfg.alpha_12) << "\n";
  out << "alpha_22 = " << fmt(cfg.alpha_22) << "\n";
  out << "theta_sic = " << fmt(cfg.theta_sic) << "\n";
  out << "delta_si = " << fmt(cfg.delta_si) << "\n";
  out << "beta_d = " << fmt(cfg.beta_d) << "\n";
  out << "beta_u = " << fmt(cfg.beta_u) << "\n";
  out << "zeta = " << fmt(cfg.zeta) << "\n";
  out << "rate_common = " << join(cfg.rate_common) << "\n";
  out << "rate_private = " << join(cfg.rate_private) << "\n";
  out << "rate_u1 = " << fmt(cfg.rate_u1) << "\n";
  out << "rate_u2 = " << fmt(cfg.rate_u2) << "\n";
  out << "dist_bs_dl = " << join(cfg.dist_bs_dl) << "\n";
  out << "dist_u1_bs = " << fmt(cfg.dist_u1_bs) << "\n";
  out << "dist_u2_bs = " << fmt(cfg.dist_u2_bs) << "\n";
  out << "dist_u1_dl = " << join(cfg.dist_u1_dl) << "\n";
  out << "dist_u2_dl = " << join(cfg.dist_u2_dl) << "\n";
  out << "dist_si = " << fmt(cfg.dist_si) << "\n";
  out << "pl_exp_main = " << fmt(cfg.pl_exp_main) << "\n";
  out << "pl_exp_cci = " << fmt(cfg.pl_exp_cci) << "\n";
  out << "pl_exp_si = " << fmt(cfg.pl_exp_si) << "\n";
  out << "ref_distance = " << fmt(cfg.ref_distance) << "\n";
  out << "m_dl = " << cfg.m_dl << "\n";
  out << "m_u1 = " << cfg.m_u1 << "\n";
  out << "m_u2 = " << cfg.m_u2 << "\n";
  out << "m_si = " << cfg.m_si << "\n";
  out << "m_cci = " << cfg.m_cci << "\n";
  out << "cci_enabled = " << (cfg.cci_enabled ? "true" : "false") << "\n";
  out << "s2_interpretation = "
      << (cfg.s2_interpretation == S2Interpretation::SumAllPrivate ? "sum_all_private"
                                                                   : "literal_n_times_own")
      << "\n";
  const char* noma = cfg.noma_dl_power == NomaDlPower::Equal          ? "equal"
                     : cfg.noma_dl_power == NomaDlPower::PrivateRenorm ? "private_renorm"
                                                                       : "common_shared";
  out << "noma_dl_power = " << noma << "\n";
}

// ---------------------------------------------------------------------------
// Sweeps.

namespace {

SystemConfig apply_variable(SystemConfig cfg, SweepVariable v, double value, bool couple) {
  switch (v) {
    case SweepVariable::PBsDbm:
      cfg.p_bs_dbm = value;
      if (couple) {
        cfg.p_u1_dbm = value;
        cfg.p_u2_dbm = value;
      }
      break;
    case SweepVariable::PUDbm:
      cfg.p_u1_dbm = value;
      cfg.p_u2_dbm = value;
      break;
    case SweepVariable::ThetaSic: cfg.theta_sic = value; break;
    case SweepVariable::DeltaSi: cfg.delta_si = value; break;
    case SweepVariable::Beta:
      cfg.beta_d = value;
      cfg.beta_u = value;
      break;
    case SweepVariable::Zeta: cfg.zeta = value; break;
  }
  return cfg;
}

bool wants(const std::vector<SweepOutput>& v, SweepOutput o) {
  return std::find(v.begin(), v.end(), o) != v.end();
}

struct UserValues {
  std::vector<double> dl;
  double ul1 = 0.0, ul2 = 0.0;
};

UserValues oracle_outages(const SystemConfig& cfg, const LinkSet& links, const Thresholds& thr) {
  UserValues out;
  const auto eval = [&](Component c, int user) {
    const OracleResult r = integral_oracle(c, cfg, links, thr, user);
    if (!r.converged) {
      throw OracleError("oracle did not converge (achieved " + fmt(r.abs_err) + ")");
    }
    return r.value;
  };
  out.dl.resize(static_cast<std::size_t>(cfg.n_downlink));
  for (int i = 0; i < cfg.n_downlink; ++i) {
    out.dl[static_cast<std::size_t>(i)] =
        downlink_outage(eval(Component::DlCommon, i), eval(Component::DlPrivate, i));
  }
  std::tie(out.ul1, out.ul2) = uplink_outages(eval(Component::Ul21, 0), eval(Component::Ul11, 0),
                                              eval(Component::Ul22, 0));
  return out;
}

}  // namespace

void run_sweep(const SystemConfig& base, const SweepSpec& spec, const McSettings& mc,
               std::ostream& out) {
  if (spec.grid.empty()) throw ConfigError("grid empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > spec.grid[i - 1])) throw ConfigError("grid not strictly increasing");
  }
  if (spec.outputs.empty()) throw ConfigError("outputs empty");
  if (spec.modes.empty()) throw ConfigError("modes empty");
  validate_config(base);

  const std::string var = to_string(spec.variable);
  out << "sweep_var,value,user,metric,mode,estimate,stderr,trials,seed\n";

  const auto user_label = [](std::size_t i) { return "d" + std::to_string(i + 1); };

  for (double value : spec.grid) {
    const SystemConfig cfg = apply_variable(base, spec.variable, value, spec.couple_powers);
    validate_config(cfg);
    const LinkSet links = build_link_stats(cfg);
    const Thresholds thr = thresholds_from_rates(cfg);
    const std::size_t n = static_cast<std::size_t>(cfg.n_downlink);

    std::vector<double> dl_rate(n);
    for (std::size_t i = 0; i < n; ++i) dl_rate[i] = cfg.rate_common[i] + cfg.rate_private[i];

    const auto emit = [&](const std::string& user, SweepOutput metric, SweepMode mode, double est,
                          double se, std::uint64_t trials) {
      out << var << ',' << fmt(value) << ',' << user << ',' << to_string(metric) << ','
          << to_string(mode) << ',' << fmt(est) << ',' << fmt(se) << ',' << trials << ','
          << mc.seed << "\n";
    };

    const auto emit_exact = [&](SweepMode mode, const UserValues& v) {
      if (wants(spec.outputs, SweepOutput::Op)) {
        for (std::size_t i = 0; i < n; ++i) emit(user_label(i), SweepOutput::Op, mode, v.dl[i], 0.0, 0);
        emit("u1", SweepOutput::Op, mode, v.ul1, 0.0, 0);
        emit("u2", SweepOutput::Op, mode, v.ul2, 0.0, 0);
      }
      if (wants(spec.outputs, SweepOutput::Throughput)) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double t = throughput(v.dl[i], dl_rate[i]);
          sum += t;
          emit(user_label(i), SweepOutput::Throughput, mode, t, 0.0, 0);
        }
        const double t1 = throughput(v.ul1, cfg.rate_u1);
        const double t2 = throughput(v.ul2, cfg.rate_u2);
        emit("u1", SweepOutput::Throughput, mode, t1, 0.0, 0);
        emit("u2", SweepOutput::Throughput, mode, t2, 0.0, 0);
        emit("sum", SweepOutput::Throughput, mode, sum + t1 + t2, 0.0, 0);
      }
    };

    const auto emit_mc = [&](SweepMode mode, const McOutageReport& rep) {
      if (wants(spec.outputs, SweepOutput::Op)) {
        for (std::size_t i = 0; i < n; ++i) {
          emit(user_label(i), SweepOutput::Op, mode, rep.p_dl[i].mean, rep.p_dl[i].std_err,
               rep.p_dl[i].trials);
        }
        emit("u1", SweepOutput::Op, mode, rep.p_ul1.mean, rep.p_ul1.std_err, rep.p_ul1.trials);
        emit("u2", SweepOutput::Op, mode, rep.p_ul2.mean, rep.p_ul2.std_err, rep.p_ul2.trials);
      }
      if (wants(spec.outputs, SweepOutput::Throughput)) {
        const McThroughputReport t = throughput_from_outages(rep, cfg);
        for (std::size_t i = 0; i < n; ++i) {
          emit(user_label(i), SweepOutput::Throughput, mode, t.dl[i].mean, t.dl[i].std_err,
               t.dl[i].trials);
        }
        emit("u1", SweepOutput::Throughput, mode, t.ul1.mean, t.ul1.std_err, t.ul1.trials);
        emit("u2", SweepOutput::Throughput, mode, t.ul2.mean, t.ul2.std_err, t.ul2.trials);
        emit("sum", SweepOutput::Throughput, mode, t.sum.mean, t.sum.std_err, t.sum.trials);
      }
    };

    for (SweepMode mode : spec.modes) {
      switch (mode) {
        case SweepMode::Analytic: {
          const OutageBreakdown b = analytic_outages(cfg, links, thr);
          UserValues v{b.p_dl, b.p_ul1, b.p_ul2};
          emit_exact(mode, v);
          break;
        }
        case SweepMode::Oracle: {
          emit_exact(mode, oracle_outages(cfg, links, thr));
          break;
        }
        case SweepMode::McMarginal:
        case SweepMode::McJoint: {
          McSettings settings = mc;
          settings.estimator =
              mode == SweepMode::McMarginal ? Estimator::Marginal : Estimator::JointChain;
          emit_mc(mode, estimate_outages(cfg, links, thr, settings));
          break;
        }
        case SweepMode::Noma: {
          emit_mc(mode, simulate_noma_baseline(cfg, links, thr, mc));
          break;
        }
        case SweepMode::Hd: {
          const McEstimate hd = simulate_hd_baseline(cfg, mc);
          emit("sum", SweepOutput::Throughput, mode, hd.mean, hd.std_err, hd.trials);
          break;
        }
      }
    }
  }
}

void run_sweep_to_file(const SystemConfig& base, const SweepSpec& spec, const McSettings& mc,
                       const std::string& out_path) {
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + out_path);
  run_sweep(base, spec, mc, f);
  if (!f.good()) throw IoError("write failure: " + out_path);
}

// ---------------------------------------------------------------------------
// Figure recipes.

namespace {

std::vector<double> linspace_step(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-12) break;
    g.push_back(std::min(v, hi));
  }
  return g;
}

}  // namespace

std::vector<std::string> recipe_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
}

std::vector<RecipeJob> figure_recipe(const std::string& name, const SystemConfig& base) {
  const std::vector<double> power_grid = linspace_step(0.0, 30.0, 2.0);
  std::vector<RecipeJob> jobs;

  if (name == "fig2") {
    // Outage vs transmit power under imperfect and perfect estimation.
    SweepSpec spec;
    spec.variable = SweepVariable::PBsDbm;
    spec.grid = power_grid;
    spec.couple_powers = true;
    spec.outputs = {SweepOutput::Op};
    spec.modes = {SweepMode::Analytic, SweepMode::McMarginal};
    SystemConfig imperfect = base;
    imperfect.theta_sic = 0.0;
    jobs.push_back({"beta0.8", imperfect, spec});
    jobs.push_back({"betainf", perfect_limit(imperfect), spec});
  } else if (name == "fig3") {
    // Outage without CCI and with ideal SI cancellation.
    SweepSpec spec;
    spec.variable = SweepVariable::PBsDbm;
    spec.grid = power_grid;
    spec.couple_powers = true;
    spec.outputs = {SweepOutput::Op, SweepOutput::Throughput};
    spec.modes = {SweepMode::Analytic, SweepMode::McMarginal};
    SystemConfig cfg = base;
    cfg.theta_sic = 0.0;
    cfg.delta_si = 0.0;
    cfg.cci_enabled = false;
    jobs.push_back({"noCCI_noSI", cfg, spec});
  } else if (name == "fig4") {
    // Uplink outage vs the rate allocation factor.
    SweepSpec spec;
    spec.variable = SweepVariable::Zeta;
    spec.grid = linspace_step(0.0, 1.0, 0.01);
    spec.outputs = {SweepOutput::Op};
    spec.modes = {SweepMode::Analytic};
    for (double theta : {0.0, 0.05, 0.1}) {
      SystemConfig cfg = base;
      cfg.p_bs_dbm = cfg.p_u1_dbm = cfg.p_u2_dbm = 30.0;
      cfg.theta_sic = theta;
      std::ostringstream label;
      label << "theta" << theta;
      jobs.push_back({label.str(), cfg, spec});
    }
  } else if (name == "fig5") {
    // Outage vs power for several residual-SIC levels, perfect estimation.
    SweepSpec spec;
    spec.variable = SweepVariable::PBsDbm;
    spec.grid = power_grid;
    spec.couple_powers = true;
    spec.outputs = {SweepOutput::Op};
    spec.modes = {SweepMode::Analytic, SweepMode::McMarginal};
    for (double theta : {0.0, 0.05, 0.1, 0.2}) {
      SystemConfig cfg = perfect_limit(base);
      cfg.theta_sic = theta;
      std::ostringstream label;
      label << "theta" << theta;
      jobs.push_back({label.str(), cfg, spec});
    }
  } else if (name == "fig6") {
    // Comparison against the power-domain NOMA baseline.
    SweepSpec spec;
    spec.variable = SweepVariable::PBsDbm;
    spec.grid = power_grid;
    spec.couple_powers = true;
    spec.outputs = {SweepOutput::Op};
    spec.modes = {SweepMode::Analytic, SweepMode::McJoint, SweepMode::Noma};
    for (double beta : {0.6, 0.8}) {
      SystemConfig cfg = base;
      cfg.theta_sic = 0.0;
      cfg.beta_d = beta;
      cfg.beta_u = beta;
      std::ostringstream label;
      label << "beta" << beta;
      jobs.push_back({label.str(), cfg, spec});
    }
  } else if (name == "fig7") {
    // Full-duplex vs half-duplex sum throughput.
    SweepSpec spec;
    spec.variable = SweepVariable::PBsDbm;
    spec.grid = power_grid;
    spec.couple_powers = true;
    spec.outputs = {SweepOutput::Throughput};
    spec.modes = {SweepMode::McJoint, SweepMode::Hd};
    jobs.push_back({"perfect", perfect_limit(base), spec});
  } else {
    throw ConfigError("unknown recipe: " + name);
  }
  return jobs;
}

// ---------------------------------------------------------------------------
// Comparison report.

CompareResult compare_report(std::istream& csv, double abs_floor, std::ostream& log) {
  std::string header;
  if (!std::getline(csv, header)) throw SchemaError("empty CSV");
  if (trim(header) != "sweep_var,value,user,metric,mode,estimate,stderr,trials,seed") {
    throw SchemaError("unexpected CSV header: " + header);
  }

  struct McRow {
    std::string key, mode;
    double est, se;
  };
  std::map<std::string, double> analytic;
  std::vector<McRow> mc_rows;

  std::string line;
  int lineno = 1;
  while (std::getline(csv, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != 9) {
      throw SchemaError("line " + std::to_string(lineno) + ": expected 9 columns");
    }
    double est = 0.0, se = 0.0;
    try {
      est = std::stod(cols[5]);
      se = std::stod(cols[6]);
    } catch (const std::exception&) {
      throw SchemaError("line " + std::to_string(lineno) + ": non-numeric estimate/stderr");
    }
    const std::string key = cols[1] + "|" + cols[2] + "|" + cols[3];
    if (cols[4] == "analytic") {
      analytic[key] = est;
    } else if (cols[4] == "mc_marginal" || cols[4] == "mc_joint") {
      mc_rows.push_back({key, cols[4], est, se});
    }
  }

  CompareResult res;
  for (const McRow& row : mc_rows) {
    const auto it = analytic.find(row.key);
    if (it == analytic.end()) continue;
    const double gap = std::fabs(it->second - row.est);
    const double allowed = std::max(3.0 * row.se, abs_floor);
    ++res.rows_compared;
    if (gap > res.worst_gap) {
      res.worst_gap = gap;
      res.worst_key = row.key + "|" + row.mode;
    }
    if (gap > allowed) {
      ++res.failures;
      log << "FAIL " << row.key << " [" << row.mode << "] gap=" << fmt(gap)
          << " allowed=" << fmt(allowed) << "\n";
    }
  }
  log << (res.failures == 0 ? "PASS" : "FAIL") << ": " << res.rows_compared
      << " rows compared, worst gap " << fmt(res.worst_gap);
  if (!res.worst_key.empty()) log << " at " << res.worst_key;
  log << "\n";
  return res;
}

}  // namespace fdrsma
