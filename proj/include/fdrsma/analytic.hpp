#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fdrsma/scenario.hpp"

namespace fdrsma {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient families of the closed-form outage expressions, precomputed per
// scenario (and per downlink user for the w/b/d/s families).
struct ClosedFormCoefficients {
  double w1 = 0.0, w2 = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0, e5 = 0.0, e6 = 0.0, e7 = 0.0;
  double a1 = 0.0, a3 = 0.0, a4 = 0.0;
  double c1 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0;
  double l2 = 0.0, l3 = 0.0, l4 = 0.0, l5 = 0.0, l6 = 0.0, l7 = 0.0;
  double s1 = 0.0, s2 = 0.0, n1 = 0.0;
  // Validity of the sign conditions behind w1, w2, e3 and l4. When false the
  // corresponding component is in certain outage.
  bool w1_valid = false, w2_valid = false, e3_valid = false, l4_valid = false;
};

ClosedFormCoefficients compute_coefficients(const SystemConfig& cfg, const LinkSet& links,
                                            const Thresholds& thr, int user);

// One Gamma-distributed interference contribution: coupling * X with
// X ~ Gamma(shape, omega_hat / shape). A zero coupling or zero omega_hat marks
// the term as absent.
struct GammaTerm {
  double coupling = 0.0;
  int shape = 1;
  double omega_hat = 0.0;
};

// An outage component in normal form:
//   P = 1 - E[ erlang_sf(cond_shape, c0 + sum_i coupling_i * X_i) ]
// over the independent Gamma interferers. guard_outage forces P = 1 (the
// closed form's validity condition failed), zero_threshold forces P = 0.
struct ComponentForm {
  int cond_shape = 1;
  double c0 = 0.0;
  std::array<GammaTerm, 2> interferers{};
  bool guard_outage = false;
  bool zero_threshold = false;
};

enum class Component { DlCommon, DlPrivate, Ul21, Ul11, Ul22 };

ComponentForm component_form(Component which, const SystemConfig& cfg, const LinkSet& links,
                             const Thresholds& thr, int user = 0);

// Closed-form evaluation of a component: triple series over
// k in [0, m-1], l in [0, k], p in [0, l], assembled in log-domain and
// combined by log-sum-exp.
double triple_sum_outage(const ComponentForm& form);

double common_outage_component(const SystemConfig& cfg, const LinkSet& links,
                               const Thresholds& thr, int user);
double private_outage_component(const SystemConfig& cfg, const LinkSet& links,
                                const Thresholds& thr, int user);

struct UplinkComponents {
  double p21 = 0.0;
  double p11 = 0.0;
  double p22 = 0.0;
};

UplinkComponents uplink_outage_components(const SystemConfig& cfg, const LinkSet& links,
                                          const Thresholds& thr);

// Composition of the per-stream components into per-user outage.
double downlink_outage(double p_common, double p_private);
std::pair<double, double> uplink_outages(double p21, double p11, double p22);

double throughput(double outage, double rate_sum);

struct OracleResult {
  double value = 0.0;
  double abs_err = 0.0;
  bool converged = false;
};

// Independent numerical route: integrates the conditional Erlang CDF against
// the Gamma densities of the interfering gains with adaptive Gauss-Kronrod
// quadrature.
OracleResult integral_oracle(const ComponentForm& form, double abs_tol = 1e-9,
                             double rel_tol = 1e-9);
OracleResult integral_oracle(Component which, const SystemConfig& cfg, const LinkSet& links,
                             const Thresholds& thr, int user = 0, double abs_tol = 1e-9,
                             double rel_tol = 1e-9);

// All analytic outage values of a scenario.
struct OutageBreakdown {
  std::vector<double> p_common;
  std::vector<double> p_private;
  std::vector<double> p_dl;
  double p21 = 0.0, p11 = 0.0, p22 = 0.0;
  double p_ul1 = 0.0, p_ul2 = 0.0;
};

OutageBreakdown analytic_outages(const SystemConfig& cfg, const LinkSet& links,
                                 const Thresholds& thr);

}  // namespace fdrsma
