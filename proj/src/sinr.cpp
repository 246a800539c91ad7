#include "fdrsma/sinr.hpp"

#include <cstddef>
#include <numeric>

namespace fdrsma {

SinrConstants make_sinr_constants(const SystemConfig& cfg, const LinkSet& links) {
  SinrConstants c;
  c.rho_b = links.rho_b;
  c.rho_1 = links.rho_1;
  c.rho_2 = links.rho_2;
  c.alpha_c = cfg.alpha_c;
  c.alpha_12 = cfg.alpha_12;
  c.alpha_22 = cfg.alpha_22;
  c.theta = cfg.theta_sic;
  c.alpha_p = cfg.alpha_private;

  const double private_sum =
      std::accumulate(cfg.alpha_private.begin(), cfg.alpha_private.end(), 0.0);

  const std::size_t n = cfg.alpha_private.size();
  c.s1.resize(n);
  c.s2.resize(n);
  c.n1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double err_cci = c.rho_1 * links.cci1[i].omega_err + c.rho_2 * links.cci2[i].omega_err;
    c.s1[i] = c.rho_b * links.dl[i].omega_err + err_cci + 1.0;
    const double undecoded = cfg.s2_interpretation == S2Interpretation::SumAllPrivate
                                 ? private_sum
                                 : static_cast<double>(n) * cfg.alpha_private[i];
    c.s2[i] = 1.0 + err_cci + c.rho_b * links.dl[i].omega_err * (undecoded + c.theta * c.alpha_c);
    c.n1[i] = private_sum - cfg.alpha_private[i] + c.theta * c.alpha_c;
  }

  c.e2 = c.rho_b * cfg.delta_si;
  const double si_err = c.e2 * links.si.omega_err;
  c.e1 = si_err + c.rho_1 * links.u1.omega_err + c.rho_2 * links.u2.omega_err + 1.0;
  c.a3 = (c.alpha_22 + c.theta * c.alpha_12) * c.rho_2;
  c.a4 = 1.0 + c.rho_1 * links.u1.omega_err +
         c.rho_2 * links.u2.omega_err * (c.alpha_22 + c.theta * c.alpha_12) + si_err;
  c.l2 = si_err + c.rho_1 * c.theta * links.u1.omega_err +
         c.rho_2 * links.u2.omega_err * (c.alpha_22 + c.theta * c.alpha_12) + 1.0;
  c.l3 = c.rho_1 * c.theta;
  return c;
}

std::pair<double, double> downlink_sinrs(const ChannelDraw& draw, const SinrConstants& c,
                                         int user) {
  const std::size_t n = static_cast<std::size_t>(user);
  const double x = draw.g2_dl[n];
  const double cci = draw.g2_cci1[n] * c.rho_1 + draw.g2_cci2[n] * c.rho_2;
  const double common =
      x * c.rho_b * c.alpha_c / (c.rho_b * (1.0 - c.alpha_c) * x + cci + c.s1[n]);
  const double priv = x * c.rho_b * c.alpha_p[n] / (c.rho_b * c.n1[n] * x + cci + c.s2[n]);
  return {common, priv};
}

UplinkSinrs uplink_sinrs(const ChannelDraw& draw, const SinrConstants& c) {
  const double y = draw.g2_u1;
  const double z = draw.g2_u2;
  const double si = draw.g2_si * c.e2;
  UplinkSinrs s;
  s.x12 = z * c.rho_2 * c.alpha_12 / (z * c.rho_2 * c.alpha_22 + y * c.rho_1 + si + c.e1);
  s.x1 = y * c.rho_1 / (z * c.a3 + si + c.a4);
  s.x22 = z * c.rho_2 * c.alpha_22 /
          (z * c.rho_2 * c.theta * c.alpha_12 + y * c.l3 + si + c.l2);
  return s;
}

SinrVector all_sinrs(const ChannelDraw& draw, const SinrConstants& c) {
  SinrVector v;
  const std::size_t n = c.alpha_p.size();
  v.dl_common.resize(n);
  v.dl_private.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [cm, pv] = downlink_sinrs(draw, c, static_cast<int>(i));
    v.dl_common[i] = cm;
    v.dl_private[i] = pv;
  }
  const UplinkSinrs u = uplink_sinrs(draw, c);
  v.ul_x12 = u.x12;
  v.ul_x1 = u.x1;
  v.ul_x22 = u.x22;
  return v;
}

}  // namespace fdrsma
