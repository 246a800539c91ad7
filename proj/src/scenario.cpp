#include "fdrsma/scenario.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace fdrsma {

namespace {

constexpr double kSumTol = 1e-9;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << name << " out of range: " << v;
    fail(os.str());
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << v;
    fail(os.str());
  }
}

void check_beta(double v, const char* name) {
  if (std::isinf(v) && v > 0.0) return;  // perfect-estimation sentinel
  if (!(v >= 0.0) || std::isnan(v)) {
    std::ostringstream os;
    os << name << " must be >= 0 or inf, got " << v;
    fail(os.str());
  }
}

void check_shape(int v, const char* name) {
  if (v < 1) {
    std::ostringstream os;
    os << name << " must be a positive integer, got " << v;
    fail(os.str());
  }
}

// Mean channel power from the distance-dependent path-loss model ref/D^exp.
double mean_power(double ref, double dist, double exponent) {
  return ref / std::pow(dist, exponent);
}

// Estimation-error variance omega / (1 + rho * beta * omega); a beta of +inf
// yields exactly zero.
LinkStats make_link(double omega, double rho, double beta, int shape) {
  LinkStats s;
  s.omega = omega;
  s.omega_err = std::isinf(beta) ? 0.0 : omega / (1.0 + rho * beta * omega);
  s.omega_hat = omega - s.omega_err;
  s.shape = shape;
  return s;
}

}  // namespace

double dbm_to_linear_snr(double p_dbm, double noise_dbm) {
  return std::pow(10.0, (p_dbm - noise_dbm) / 10.0);
}

const SystemConfig& validate_config(const SystemConfig& cfg) {
  const std::size_t n = static_cast<std::size_t>(cfg.n_downlink);
  if (cfg.n_downlink < 1) fail("n_downlink must be >= 1");
  if (cfg.alpha_private.size() != n) fail("alpha_private size must equal n_downlink");
  if (cfg.rate_common.size() != n) fail("rate_common size must equal n_downlink");
  if (cfg.rate_private.size() != n) fail("rate_private size must equal n_downlink");
  if (cfg.dist_bs_dl.size() != n) fail("dist_bs_dl size must equal n_downlink");
  if (cfg.dist_u1_dl.size() != n) fail("dist_u1_dl size must equal n_downlink");
  if (cfg.dist_u2_dl.size() != n) fail("dist_u2_dl size must equal n_downlink");

  for (double p : {cfg.p_bs_dbm, cfg.p_u1_dbm, cfg.p_u2_dbm, cfg.noise_dbm}) {
    if (!std::isfinite(p)) fail("powers and noise must be finite dBm values");
  }

  check_fraction(cfg.alpha_c, "alpha_c");
  for (double a : cfg.alpha_private) check_fraction(a, "alpha_private");
  check_fraction(cfg.alpha_12, "alpha_12");
  check_fraction(cfg.alpha_22, "alpha_22");
  check_fraction(cfg.theta_sic, "theta_sic");
  check_fraction(cfg.delta_si, "delta_si");
  if (!(cfg.zeta >= 0.0 && cfg.zeta <= 1.0)) {
    std::ostringstream os;
    os << "zeta out of range: " << cfg.zeta;
    fail(os.str());
  }
  check_beta(cfg.beta_d, "beta_d");
  check_beta(cfg.beta_u, "beta_u");

  const double private_sum =
      std::accumulate(cfg.alpha_private.begin(), cfg.alpha_private.end(), 0.0);
  if (std::fabs(cfg.alpha_c + private_sum - 1.0) > kSumTol) {
    std::ostringstream os;
    os << "alpha sum = " << cfg.alpha_c + private_sum << " (alpha_c + sum alpha_private must be 1)";
    fail(os.str());
  }
  if (std::fabs(cfg.alpha_12 + cfg.alpha_22 - 1.0) > kSumTol) {
    std::ostringstream os;
    os << "alpha_12 + alpha_22 = " << cfg.alpha_12 + cfg.alpha_22 << " (must be 1)";
    fail(os.str());
  }

  for (double r : cfg.rate_common) {
    if (!(r >= 0.0) || !std::isfinite(r)) fail("rate_common must be >= 0");
  }
  for (double r : cfg.rate_private) {
    if (!(r >= 0.0) || !std::isfinite(r)) fail("rate_private must be >= 0");
  }
  if (!(cfg.rate_u1 >= 0.0) || !std::isfinite(cfg.rate_u1)) fail("rate_u1 must be >= 0");
  if (!(cfg.rate_u2 >= 0.0) || !std::isfinite(cfg.rate_u2)) fail("rate_u2 must be >= 0");

  for (double d : cfg.dist_bs_dl) check_positive(d, "dist_bs_dl");
  for (double d : cfg.dist_u1_dl) check_positive(d, "dist_u1_dl");
  for (double d : cfg.dist_u2_dl) check_positive(d, "dist_u2_dl");
  check_positive(cfg.dist_u1_bs, "dist_u1_bs");
  check_positive(cfg.dist_u2_bs, "dist_u2_bs");
  check_positive(cfg.dist_si, "dist_si");
  check_positive(cfg.pl_exp_main, "pl_exp_main");
  check_positive(cfg.pl_exp_cci, "pl_exp_cci");
  check_positive(cfg.pl_exp_si, "pl_exp_si");
  check_positive(cfg.ref_distance, "ref_distance");

  check_shape(cfg.m_dl, "m_dl");
  check_shape(cfg.m_u1, "m_u1");
  check_shape(cfg.m_u2, "m_u2");
  check_shape(cfg.m_si, "m_si");
  check_shape(cfg.m_cci, "m_cci");

  return cfg;
}

LinkSet build_link_stats(const SystemConfig& cfg) {
  LinkSet links;
  links.rho_b = dbm_to_linear_snr(cfg.p_bs_dbm, cfg.noise_dbm);
  links.rho_1 = dbm_to_linear_snr(cfg.p_u1_dbm, cfg.noise_dbm);
  links.rho_2 = dbm_to_linear_snr(cfg.p_u2_dbm, cfg.noise_dbm);

  links.dl.reserve(cfg.dist_bs_dl.size());
  links.cci1.reserve(cfg.dist_bs_dl.size());
  links.cci2.reserve(cfg.dist_bs_dl.size());
  for (std::size_t i = 0; i < cfg.dist_bs_dl.size(); ++i) {
    links.dl.push_back(make_link(mean_power(cfg.ref_distance, cfg.dist_bs_dl[i], cfg.pl_exp_main),
                                 links.rho_b, cfg.beta_d, cfg.m_dl));
    const double o1 =
        cfg.cci_enabled ? mean_power(cfg.ref_distance, cfg.dist_u1_dl[i], cfg.pl_exp_cci) : 0.0;
    const double o2 =
        cfg.cci_enabled ? mean_power(cfg.ref_distance, cfg.dist_u2_dl[i], cfg.pl_exp_cci) : 0.0;
    links.cci1.push_back(make_link(o1, links.rho_1, cfg.beta_u, cfg.m_cci));
    links.cci2.push_back(make_link(o2, links.rho_2, cfg.beta_u, cfg.m_cci));
  }
  links.u1 = make_link(mean_power(cfg.ref_distance, cfg.dist_u1_bs, cfg.pl_exp_main), links.rho_1,
                       cfg.beta_u, cfg.m_u1);
  links.u2 = make_link(mean_power(cfg.ref_distance, cfg.dist_u2_bs, cfg.pl_exp_main), links.rho_2,
                       cfg.beta_u, cfg.m_u2);
  // The BS both transmits the interfering signal and estimates the SI channel.
  links.si = make_link(mean_power(cfg.ref_distance, cfg.dist_si, cfg.pl_exp_si), links.rho_b,
                       cfg.beta_u, cfg.m_si);
  return links;
}

Thresholds thresholds_from_rates(const SystemConfig& cfg) {
  const auto gamma_of = [](double rate) { return std::expm1(rate * std::numbers::ln2); };
  Thresholds t;
  t.gamma_c.reserve(cfg.rate_common.size());
  t.gamma_p.reserve(cfg.rate_private.size());
  for (double r : cfg.rate_common) t.gamma_c.push_back(gamma_of(r));
  for (double r : cfg.rate_private) t.gamma_p.push_back(gamma_of(r));
  t.rate_u12 = cfg.zeta * cfg.rate_u2;
  t.rate_u22 = (1.0 - cfg.zeta) * cfg.rate_u2;
  t.gamma_11 = gamma_of(cfg.rate_u1);
  t.gamma_21 = gamma_of(t.rate_u12);
  t.gamma_22 = gamma_of(t.rate_u22);
  return t;
}

SystemConfig perfect_limit(SystemConfig cfg) {
  cfg.beta_d = std::numeric_limits<double>::infinity();
  cfg.beta_u = std::numeric_limits<double>::infinity();
  cfg.theta_sic = 0.0;
  return cfg;
}

}  // namespace fdrsma
