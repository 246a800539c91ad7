#pragma once

#include <utility>
#include <vector>

#include "fdrsma/scenario.hpp"

namespace fdrsma {

// One realization of all squared estimated channel magnitudes.
struct ChannelDraw {
  std::vector<double> g2_dl;    // |h_n|^2 per downlink user
  std::vector<double> g2_cci1;  // |g_c1|^2 per downlink user
  std::vector<double> g2_cci2;  // |g_c2|^2 per downlink user
  double g2_u1 = 0.0;
  double g2_u2 = 0.0;
  double g2_si = 0.0;
};

struct SinrVector {
  std::vector<double> dl_common;
  std::vector<double> dl_private;
  double ul_x12 = 0.0;
  double ul_x1 = 0.0;
  double ul_x22 = 0.0;
};

// Scenario-level constants entering the SINR denominators. Estimation-error
// contributions appear as their variances, matching the closed-form analysis.
struct SinrConstants {
  double rho_b = 0.0, rho_1 = 0.0, rho_2 = 0.0;
  double alpha_c = 0.0, alpha_12 = 0.0, alpha_22 = 0.0, theta = 0.0;
  std::vector<double> alpha_p;
  std::vector<double> s1;  // per-user constant in the common-stream denominator
  std::vector<double> s2;  // per-user constant in the private-stream denominator
  std::vector<double> n1;  // residual downlink self-interference fraction
  double e1 = 0.0;         // constant in the x12 denominator
  double a3 = 0.0;         // coupling of |g_2|^2 in the x1 denominator
  double a4 = 0.0;         // constant in the x1 denominator
  double l2 = 0.0;         // constant in the x22 denominator
  double l3 = 0.0;         // coupling of |g_1|^2 in the x22 denominator
  double e2 = 0.0;         // residual self-interference power rho_b * delta
};

SinrConstants make_sinr_constants(const SystemConfig& cfg, const LinkSet& links);

// SINRs of the common and private streams at downlink user n.
std::pair<double, double> downlink_sinrs(const ChannelDraw& draw, const SinrConstants& c, int user);

struct UplinkSinrs {
  double x12 = 0.0;
  double x1 = 0.0;
  double x22 = 0.0;
};

// SINRs of the three uplink decoding stages at the BS (decode order
// x12 -> x1 -> x22).
UplinkSinrs uplink_sinrs(const ChannelDraw& draw, const SinrConstants& c);

SinrVector all_sinrs(const ChannelDraw& draw, const SinrConstants& c);

}  // namespace fdrsma
