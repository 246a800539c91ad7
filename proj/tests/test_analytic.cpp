#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "fdrsma/analytic.hpp"
#include "fdrsma/mathkern.hpp"

using namespace fdrsma;

namespace {

struct Scenario {
  SystemConfig cfg;
  LinkSet links;
  Thresholds thr;
};

Scenario make(const SystemConfig& cfg) {
  validate_config(cfg);
  return {cfg, build_link_stats(cfg), thresholds_from_rates(cfg)};
}

// Relative gap with an absolute floor: below 1e-8 the 1-minus-series route is
// limited by double-precision cancellation.
double rel_gap(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-8});
  return std::fabs(a - b) / scale;
}

void check_all_components_against_oracle(const Scenario& s, double tol) {
  for (int user = 0; user < s.cfg.n_downlink; ++user) {
    for (Component c : {Component::DlCommon, Component::DlPrivate}) {
      const double cf = triple_sum_outage(component_form(c, s.cfg, s.links, s.thr, user));
      const OracleResult orc = integral_oracle(c, s.cfg, s.links, s.thr, user);
      CHECK(orc.converged);
      CHECK(rel_gap(cf, orc.value) <= tol);
    }
  }
  for (Component c : {Component::Ul21, Component::Ul11, Component::Ul22}) {
    const double cf = triple_sum_outage(component_form(c, s.cfg, s.links, s.thr));
    const OracleResult orc = integral_oracle(c, s.cfg, s.links, s.thr);
    CHECK(orc.converged);
    CHECK(rel_gap(cf, orc.value) <= tol);
  }
}

}  // namespace

TEST_CASE("coefficient anchors at the reference scenario") {
  const Scenario s = make(SystemConfig{});
  const ClosedFormCoefficients co = compute_coefficients(s.cfg, s.links, s.thr, 0);

  const double gamma_c = s.thr.gamma_c[0];
  const double expect_w1 = 5.0 * gamma_c /
                           (s.links.dl[0].omega_hat * s.links.rho_b *
                            (0.5 - gamma_c * 0.5));
  CHECK(co.w1 == doctest::Approx(expect_w1).epsilon(1e-12));
  CHECK(co.b1 == doctest::Approx(co.w1 * co.s1).epsilon(1e-12));
  CHECK(co.b2 == doctest::Approx(co.w1 * s.links.rho_1).epsilon(1e-12));
  CHECK(co.a1 == doctest::Approx(4.0 / s.links.u2.omega_hat).epsilon(1e-12));
  CHECK(co.c1 == doctest::Approx(4.0 / s.links.u1.omega_hat).epsilon(1e-12));
  CHECK(co.e7 == doctest::Approx(5.0 / s.links.si.omega_hat).epsilon(1e-12));
  CHECK(co.e5 == doctest::Approx(co.e3 * co.e2).epsilon(1e-12));
  CHECK(co.e6 == doctest::Approx(co.e3 * co.e1).epsilon(1e-12));
  CHECK(co.l7 == doctest::Approx(co.l4 * co.l2).epsilon(1e-12));
  CHECK(co.c6 == doctest::Approx(co.c3 * co.a4).epsilon(1e-12));
  CHECK(co.n1 == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(co.w1_valid);
  CHECK(co.w2_valid);
  CHECK(co.e3_valid);
  CHECK(co.l4_valid);
}

TEST_CASE("guard conditions force certain outage") {
  // common guard: threshold 1.5 with alpha_c = 0.5 (0.5 <= 0.75)
  SystemConfig cfg;
  cfg.rate_common = {std::log2(2.5), std::log2(2.5)};
  const Scenario s = make(cfg);
  CHECK(common_outage_component(s.cfg, s.links, s.thr, 0) == 1.0);
  CHECK(integral_oracle(Component::DlCommon, s.cfg, s.links, s.thr, 0).value == 1.0);

  // private guard: saturated SIC residual with a large common allocation
  SystemConfig cfg2;
  cfg2.theta_sic = 1.0;
  cfg2.rate_private = {1.5, 0.25};
  const Scenario s2 = make(cfg2);
  // alpha_1 = 0.15 <= gamma_p * (alpha_2 + theta * alpha_c)
  CHECK(private_outage_component(s2.cfg, s2.links, s2.thr, 0) == 1.0);

  // x12 guard: gamma_21 * alpha_22 >= alpha_12
  SystemConfig cfg3;
  cfg3.rate_u2 = 2.0;
  cfg3.zeta = 0.95;
  const Scenario s3 = make(cfg3);
  CHECK(uplink_outage_components(s3.cfg, s3.links, s3.thr).p21 == 1.0);

  // x22 guard under full SIC residual
  SystemConfig cfg4;
  cfg4.theta_sic = 1.0;
  const Scenario s4 = make(cfg4);
  CHECK(uplink_outage_components(s4.cfg, s4.links, s4.thr).p22 == 1.0);
}

TEST_CASE("zero thresholds mean zero outage") {
  SystemConfig cfg;
  cfg.zeta = 1.0;  // rate share of x22 vanishes
  const Scenario s = make(cfg);
  CHECK(uplink_outage_components(s.cfg, s.links, s.thr).p22 == 0.0);

  SystemConfig cfg2;
  cfg2.rate_common = {0.0, 0.0};
  cfg2.rate_private = {0.0, 0.0};
  cfg2.rate_u1 = 0.0;
  cfg2.rate_u2 = 0.0;
  const Scenario s2 = make(cfg2);
  const OutageBreakdown b = analytic_outages(s2.cfg, s2.links, s2.thr);
  CHECK(b.p_dl[0] == 0.0);
  CHECK(b.p_dl[1] == 0.0);
  CHECK(b.p_ul1 == 0.0);
  CHECK(b.p_ul2 == 0.0);
}

TEST_CASE("interference-free reduction collapses to a single Erlang CDF") {
  SystemConfig cfg = perfect_limit(SystemConfig{});
  cfg.cci_enabled = false;
  cfg.p_bs_dbm = cfg.p_u1_dbm = cfg.p_u2_dbm = 0.0;  // keep the CDF well away from underflow
  const Scenario s = make(cfg);

  const ClosedFormCoefficients co = compute_coefficients(s.cfg, s.links, s.thr, 0);
  // with perfect estimation s1 = 1, so the argument is w1 itself
  CHECK(co.s1 == doctest::Approx(1.0).epsilon(1e-14));
  const double expected = erlang_cdf(cfg.m_dl, co.w1);
  CHECK(common_outage_component(s.cfg, s.links, s.thr, 0) ==
        doctest::Approx(expected).epsilon(1e-12));

  const OracleResult orc = integral_oracle(Component::DlCommon, s.cfg, s.links, s.thr, 0);
  CHECK(orc.converged);
  CHECK(rel_gap(orc.value, expected) <= 1e-9);
}

TEST_CASE("closed forms agree with the integral oracle at the reference scenario") {
  for (double p : {0.0, 10.0, 20.0, 30.0}) {
    SystemConfig cfg;
    cfg.p_bs_dbm = cfg.p_u1_dbm = cfg.p_u2_dbm = p;
    check_all_components_against_oracle(make(cfg), 1e-6);
  }
}

TEST_CASE("closed forms agree with the oracle on randomized scenarios") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> shape(1, 5);
  std::uniform_real_distribution<double> power(0.0, 30.0);
  const double thetas[] = {0.0, 0.1, 0.2};
  const double deltas[] = {0.0, 1e-7};

  for (int it = 0; it < 8; ++it) {
    SystemConfig cfg;
    cfg.m_dl = shape(rng);
    cfg.m_u1 = shape(rng);
    cfg.m_u2 = shape(rng);
    cfg.m_si = shape(rng);
    cfg.m_cci = shape(rng);
    cfg.p_bs_dbm = power(rng);
    cfg.p_u1_dbm = power(rng);
    cfg.p_u2_dbm = power(rng);
    cfg.theta_sic = thetas[it % 3];
    cfg.delta_si = deltas[it % 2];
    check_all_components_against_oracle(make(cfg), 1e-6);
  }
}

TEST_CASE("outage compositions") {
  CHECK(downlink_outage(0.0, 0.2) == doctest::Approx(0.2));
  CHECK(downlink_outage(1.0, 0.37) == doctest::Approx(1.0));
  CHECK(downlink_outage(0.1, 0.2) == doctest::Approx(0.28));
  CHECK_THROWS_AS(downlink_outage(-0.1, 0.2), std::domain_error);
  CHECK_THROWS_AS(downlink_outage(0.1, 1.2), std::domain_error);

  auto [pu1, pu2] = uplink_outages(0.0, 0.0, 0.0);
  CHECK(pu1 == 0.0);
  CHECK(pu2 == 0.0);
  std::tie(pu1, pu2) = uplink_outages(1.0, 0.3, 0.7);
  CHECK(pu1 == doctest::Approx(1.0));
  CHECK(pu2 == doctest::Approx(1.0));
  std::tie(pu1, pu2) = uplink_outages(0.1, 0.2, 0.3);
  CHECK(pu1 == doctest::Approx(0.28));
  CHECK(pu2 == doctest::Approx(0.496));
  CHECK(pu2 >= pu1);
  CHECK_THROWS_AS(uplink_outages(0.1, 0.2, 1.3), std::domain_error);
}

TEST_CASE("throughput mapping") {
  CHECK(throughput(0.0, 0.7) == doctest::Approx(0.7));
  CHECK(throughput(1.0, 123.0) == 0.0);
  CHECK(throughput(0.496, 0.8) == doctest::Approx(0.4032));
  CHECK_THROWS_AS(throughput(1.5, 0.8), std::domain_error);
  CHECK_THROWS_AS(throughput(0.5, -1.0), std::domain_error);
}

TEST_CASE("scaling powers and noise together leaves every outage unchanged") {
  SystemConfig a;
  a.p_bs_dbm = 12.0;
  a.p_u1_dbm = 9.0;
  a.p_u2_dbm = 15.0;
  SystemConfig b = a;
  b.p_bs_dbm += 37.0;
  b.p_u1_dbm += 37.0;
  b.p_u2_dbm += 37.0;
  b.noise_dbm += 37.0;

  const Scenario sa = make(a);
  const Scenario sb = make(b);
  const OutageBreakdown ba = analytic_outages(sa.cfg, sa.links, sa.thr);
  const OutageBreakdown bb = analytic_outages(sb.cfg, sb.links, sb.thr);
  CHECK(ba.p_dl[0] == bb.p_dl[0]);
  CHECK(ba.p_dl[1] == bb.p_dl[1]);
  CHECK(ba.p_ul1 == bb.p_ul1);
  CHECK(ba.p_ul2 == bb.p_ul2);
}

TEST_CASE("residual SIC creates an error floor; clean links do not") {
  // with residual SIC the x22 outage approaches a strictly positive limit
  SystemConfig cfg;
  cfg.theta_sic = 0.2;
  auto p22_at = [&](double p) {
    SystemConfig c = cfg;
    c.p_bs_dbm = c.p_u1_dbm = c.p_u2_dbm = p;
    const Scenario s = make(c);
    return uplink_outage_components(s.cfg, s.links, s.thr).p22;
  };
  const double p50 = p22_at(50.0);
  const double p60 = p22_at(60.0);
  CHECK(p60 > 0.0);
  CHECK(p60 >= 0.99 * p50);

  // without residual SIC, CCI and SI, the downlink outage keeps improving
  SystemConfig clean;
  clean.theta_sic = 0.0;
  clean.delta_si = 0.0;
  clean.cci_enabled = false;
  double prev = 2.0;
  for (double p = 0.0; p <= 30.0; p += 6.0) {
    SystemConfig c = clean;
    c.p_bs_dbm = c.p_u1_dbm = c.p_u2_dbm = p;
    const Scenario s = make(c);
    const OutageBreakdown b = analytic_outages(s.cfg, s.links, s.thr);
    CHECK(b.p_dl[0] < prev);
    prev = b.p_dl[0];
  }
}

TEST_CASE("imperfect estimation only hurts") {
  SystemConfig imperfect;
  imperfect.p_bs_dbm = imperfect.p_u1_dbm = imperfect.p_u2_dbm = 0.0;
  const SystemConfig perfect = perfect_limit(imperfect);
  const Scenario si = make(imperfect);
  const Scenario sp = make(perfect);
  const OutageBreakdown bi = analytic_outages(si.cfg, si.links, si.thr);
  const OutageBreakdown bp = analytic_outages(sp.cfg, sp.links, sp.thr);
  CHECK(bi.p_dl[0] > bp.p_dl[0]);
  CHECK(bi.p_dl[1] > bp.p_dl[1]);
  CHECK(bi.p_ul1 > bp.p_ul1);
  CHECK(bi.p_ul2 > bp.p_ul2);
}

TEST_CASE("every component stays inside [0, 1] across a parameter grid") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 40; ++it) {
    SystemConfig cfg;
    cfg.p_bs_dbm = 30.0 * u(rng);
    cfg.p_u1_dbm = 30.0 * u(rng);
    cfg.p_u2_dbm = 30.0 * u(rng);
    cfg.theta_sic = u(rng) < 0.5 ? 0.0 : 0.4 * u(rng);
    cfg.zeta = u(rng);
    const Scenario s = make(cfg);
    const OutageBreakdown b = analytic_outages(s.cfg, s.links, s.thr);
    for (double v : {b.p_common[0], b.p_private[0], b.p_common[1], b.p_private[1], b.p21, b.p11,
                     b.p22, b.p_dl[0], b.p_dl[1], b.p_ul1, b.p_ul2}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(b.p_dl[0] == doctest::Approx(downlink_outage(b.p_common[0], b.p_private[0])));
    CHECK(b.p_ul2 >= b.p_ul1);
  }
}
