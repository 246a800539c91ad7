#include "fdrsma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "fdrsma/mathkern.hpp"
#include "fdrsma/sinr.hpp"

namespace fdrsma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln E[(B X)^j exp(-B X)] for X ~ Gamma(shape, omega_hat / shape):
//   Gamma(m + j)/Gamma(m) * (B theta)^j / (1 + B theta)^(m + j).
// Vanishing coupling or a degenerate channel leaves only the j = 0 moment.
double log_coupled_moment(int j, const GammaTerm& t) {
  if (!(t.coupling > 0.0) || !(t.omega_hat > 0.0)) return j == 0 ? 0.0 : -kInf;
  const double bt = t.coupling * (t.omega_hat / static_cast<double>(t.shape));
  if (std::isinf(bt)) return -kInf;
  const double m = static_cast<double>(t.shape);
  const double l1p = std::log1p(bt);
  if (j == 0) return -m * l1p;
  return std::lgamma(m + j) - std::lgamma(m) + j * std::log(bt) - (m + j) * l1p;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 15(7) quadrature.

constexpr double kGkNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kGkWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                     0.417959183673469};

template <typename F>
void gk15(const F& f, double a, double b, double& val, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kGkWeights[7];
  double resg = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGkNodes[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kGkWeights[i] * (f1 + f2);
    if (i % 2 == 1) resg += kGaussWeights[(i - 1) / 2] * (f1 + f2);
  }
  val = resk * h;
  err = std::fabs((resk - resg) * h);
}

struct Interval {
  double err, a, b, val;
  bool operator<(const Interval& o) const { return err < o.err; }
};

struct QuadOutcome {
  double value = 0.0;
  double err = 0.0;
};

// Worst-interval-first refinement until the summed error estimate drops under
// rel_tol * |value| (or the machine floor), starting from the seeded partition.
template <typename F>
QuadOutcome adaptive_quadrature(const F& f, double a, double b, const std::vector<double>& seeds,
                                double rel_tol, int max_intervals) {
  std::priority_queue<Interval> heap;
  double total = 0.0;
  double total_err = 0.0;
  const auto push = [&](double x0, double x1) {
    double v = 0.0, e = 0.0;
    gk15(f, x0, x1, v, e);
    total += v;
    total_err += e;
    heap.push({e, x0, x1, v});
  };

  double prev = a;
  for (double s : seeds) {
    if (s > prev && s < b) {
      push(prev, s);
      prev = s;
    }
  }
  push(prev, b);

  int n = static_cast<int>(heap.size());
  while (total_err > std::max(1e-16, rel_tol * std::fabs(total)) && n < max_intervals) {
    const Interval top = heap.top();
    heap.pop();
    total -= top.val;
    total_err = std::max(0.0, total_err - top.err);
    const double mid = 0.5 * (top.a + top.b);
    push(top.a, mid);
    push(mid, top.b);
    ++n;
  }
  return {total, total_err};
}

struct GammaPdf {
  int shape;
  double theta;
  double log_norm;  // lgamma(shape) + shape * log(theta)

  static GammaPdf make(int shape, double omega_hat) {
    const double theta = omega_hat / static_cast<double>(shape);
    return {shape, theta, std::lgamma(static_cast<double>(shape)) + shape * std::log(theta)};
  }

  double operator()(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return shape == 1 ? std::exp(-log_norm) : 0.0;
    return std::exp((shape - 1) * std::log(x) - x / theta - log_norm);
  }
};

// Upper integration limit: beyond it the Gamma tail mass is below 1e-18.
double gamma_cutoff(int shape, double theta) {
  double u = theta * (shape + 10.0);
  while (erlang_sf(shape, u / theta) > 1e-18) u *= 1.5;
  return u;
}

// Geometric breakpoints around the density bulk so the first refinement pass
// cannot overlook a narrow mode.
std::vector<double> gamma_seeds(int shape, double theta, double cutoff) {
  std::vector<double> seeds;
  const double bulk = theta * shape;
  for (double s = bulk / 8.0; s < cutoff; s *= 2.0) seeds.push_back(s);
  return seeds;
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficient families.

ClosedFormCoefficients compute_coefficients(const SystemConfig& cfg, const LinkSet& links,
                                            const Thresholds& thr, int user) {
  const SinrConstants sc = make_sinr_constants(cfg, links);
  ClosedFormCoefficients co;
  co.s1 = sc.s1[static_cast<std::size_t>(user)];
  co.s2 = sc.s2[static_cast<std::size_t>(user)];
  co.n1 = sc.n1[static_cast<std::size_t>(user)];
  co.e1 = sc.e1;
  co.e2 = sc.e2;
  co.a3 = sc.a3;
  co.a4 = sc.a4;
  co.l2 = sc.l2;
  co.l3 = sc.l3;

  co.a1 = links.u2.omega_hat > 0.0 ? cfg.m_u2 / links.u2.omega_hat : kInf;
  co.c1 = links.u1.omega_hat > 0.0 ? cfg.m_u1 / links.u1.omega_hat : kInf;
  co.e7 = links.si.omega_hat > 0.0 ? cfg.m_si / links.si.omega_hat : kInf;

  const double omega_dl = links.dl[static_cast<std::size_t>(user)].omega_hat;
  const double gamma_c = thr.gamma_c[static_cast<std::size_t>(user)];
  const double den_c = cfg.alpha_c - gamma_c * (1.0 - cfg.alpha_c);
  co.w1_valid = den_c > 0.0 && omega_dl > 0.0;
  co.w1 = co.w1_valid ? cfg.m_dl * gamma_c / (omega_dl * links.rho_b * den_c) : kInf;
  co.b1 = co.w1 * co.s1;
  co.b2 = co.w1 * links.rho_1;
  co.b3 = co.w1 * links.rho_2;

  const double gamma_p = thr.gamma_p[static_cast<std::size_t>(user)];
  const double alpha_n = cfg.alpha_private[static_cast<std::size_t>(user)];
  const double den_p = alpha_n - gamma_p * co.n1;
  co.w2_valid = den_p > 0.0 && omega_dl > 0.0;
  co.w2 = co.w2_valid ? cfg.m_dl * gamma_p / (omega_dl * links.rho_b * den_p) : kInf;
  co.d1 = co.w2 * links.rho_1;
  co.d2 = co.w2 * links.rho_2;
  co.d3 = co.w2 * co.s2;

  const double den_21 = cfg.alpha_12 - thr.gamma_21 * cfg.alpha_22;
  co.e3_valid = den_21 > 0.0 && links.u2.omega_hat > 0.0;
  co.e3 = co.e3_valid ? cfg.m_u2 * thr.gamma_21 / (links.u2.omega_hat * links.rho_2 * den_21)
                      : kInf;
  co.e4 = co.e3 * links.rho_1;
  co.e5 = co.e3 * co.e2;
  co.e6 = co.e3 * co.e1;

  co.c3 = links.u1.omega_hat > 0.0
              ? cfg.m_u1 * thr.gamma_11 / (links.u1.omega_hat * links.rho_1)
              : kInf;
  co.c4 = co.c3 * co.a3;
  co.c5 = co.c3 * co.e2;
  co.c6 = co.c3 * co.a4;

  const double den_22 = cfg.alpha_22 - thr.gamma_22 * cfg.theta_sic * cfg.alpha_12;
  co.l4_valid = den_22 > 0.0 && links.u2.omega_hat > 0.0;
  co.l4 = co.l4_valid ? cfg.m_u2 * thr.gamma_22 / (links.u2.omega_hat * links.rho_2 * den_22)
                      : kInf;
  co.l5 = co.l4 * co.l3;
  co.l6 = co.l4 * co.e2;
  co.l7 = co.l4 * co.l2;
  return co;
}

ComponentForm component_form(Component which, const SystemConfig& cfg, const LinkSet& links,
                             const Thresholds& thr, int user) {
  const ClosedFormCoefficients co = compute_coefficients(cfg, links, thr, user);
  const std::size_t n = static_cast<std::size_t>(user);
  ComponentForm fm;
  switch (which) {
    case Component::DlCommon:
      fm.cond_shape = cfg.m_dl;
      fm.zero_threshold = thr.gamma_c[n] == 0.0;
      fm.guard_outage = !co.w1_valid;
      fm.c0 = co.b1;
      fm.interferers = {GammaTerm{co.b2, cfg.m_cci, links.cci1[n].omega_hat},
                        GammaTerm{co.b3, cfg.m_cci, links.cci2[n].omega_hat}};
      break;
    case Component::DlPrivate:
      fm.cond_shape = cfg.m_dl;
      fm.zero_threshold = thr.gamma_p[n] == 0.0;
      fm.guard_outage = !co.w2_valid;
      fm.c0 = co.d3;
      fm.interferers = {GammaTerm{co.d1, cfg.m_cci, links.cci1[n].omega_hat},
                        GammaTerm{co.d2, cfg.m_cci, links.cci2[n].omega_hat}};
      break;
    case Component::Ul21:
      fm.cond_shape = cfg.m_u2;
      fm.zero_threshold = thr.gamma_21 == 0.0;
      fm.guard_outage = !co.e3_valid;
      fm.c0 = co.e6;
      fm.interferers = {GammaTerm{co.e4, cfg.m_u1, links.u1.omega_hat},
                        GammaTerm{co.e5, cfg.m_si, links.si.omega_hat}};
      break;
    case Component::Ul11:
      fm.cond_shape = cfg.m_u1;
      fm.zero_threshold = thr.gamma_11 == 0.0;
      fm.guard_outage = links.u1.omega_hat <= 0.0;
      fm.c0 = co.c6;
      fm.interferers = {GammaTerm{co.c4, cfg.m_u2, links.u2.omega_hat},
                        GammaTerm{co.c5, cfg.m_si, links.si.omega_hat}};
      break;
    case Component::Ul22:
      fm.cond_shape = cfg.m_u2;
      fm.zero_threshold = thr.gamma_22 == 0.0;
      fm.guard_outage = !co.l4_valid;
      fm.c0 = co.l7;
      fm.interferers = {GammaTerm{co.l5, cfg.m_u1, links.u1.omega_hat},
                        GammaTerm{co.l6, cfg.m_si, links.si.omega_hat}};
      break;
  }
  if (fm.zero_threshold) fm.guard_outage = false;
  return fm;
}

// ---------------------------------------------------------------------------
// Closed form: triple series in log-domain, combined by log-sum-exp; the
// complement is taken with expm1 and tiny results are clamped to zero.

double triple_sum_outage(const ComponentForm& f) {
  if (f.zero_threshold) return 0.0;
  if (f.guard_outage || !std::isfinite(f.c0)) return 1.0;

  const int m = f.cond_shape;
  std::vector<double> lm0(static_cast<std::size_t>(m));
  std::vector<double> lm1(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    lm0[static_cast<std::size_t>(j)] = log_coupled_moment(j, f.interferers[0]);
    lm1[static_cast<std::size_t>(j)] = log_coupled_moment(j, f.interferers[1]);
  }

  const bool c0_zero = f.c0 == 0.0;
  const double lc0 = c0_zero ? 0.0 : std::log(f.c0);
  double max_l = -kInf;
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    const double lk_fact = std::lgamma(static_cast<double>(k) + 1.0);
    for (int l = 0; l <= k; ++l) {
      const double lmy = lm0[static_cast<std::size_t>(k - l)];
      if (lmy == -kInf) continue;
      const double lkl = log_binomial(k, l);
      for (int p = 0; p <= l; ++p) {
        if (c0_zero && l != p) continue;
        const double lmz = lm1[static_cast<std::size_t>(p)];
        if (lmz == -kInf) continue;
        const double ll =
            lkl + log_binomial(l, p) - lk_fact - f.c0 + (l - p) * lc0 + lmy + lmz;
        if (ll == -kInf) continue;
        if (ll <= max_l) {
          acc += std::exp(ll - max_l);
        } else {
          acc = acc * std::exp(max_l - ll) + 1.0;
          max_l = ll;
        }
      }
    }
  }
  if (max_l == -kInf) return 1.0;
  const double log_mass = std::min(max_l + std::log(acc), 0.0);
  double op = -std::expm1(log_mass);
  if (op < 1e-15) op = 0.0;
  return std::clamp(op, 0.0, 1.0);
}

double common_outage_component(const SystemConfig& cfg, const LinkSet& links,
                               const Thresholds& thr, int user) {
  return triple_sum_outage(component_form(Component::DlCommon, cfg, links, thr, user));
}

double private_outage_component(const SystemConfig& cfg, const LinkSet& links,
                                const Thresholds& thr, int user) {
  return triple_sum_outage(component_form(Component::DlPrivate, cfg, links, thr, user));
}

UplinkComponents uplink_outage_components(const SystemConfig& cfg, const LinkSet& links,
                                          const Thresholds& thr) {
  UplinkComponents u;
  u.p21 = triple_sum_outage(component_form(Component::Ul21, cfg, links, thr));
  u.p11 = triple_sum_outage(component_form(Component::Ul11, cfg, links, thr));
  u.p22 = triple_sum_outage(component_form(Component::Ul22, cfg, links, thr));
  return u;
}

namespace {
void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(name) + ": probability outside [0, 1]");
  }
}
}  // namespace

double downlink_outage(double p_common, double p_private) {
  check_probability(p_common, "downlink_outage");
  check_probability(p_private, "downlink_outage");
  return p_common + p_private - p_common * p_private;
}

std::pair<double, double> uplink_outages(double p21, double p11, double p22) {
  check_probability(p21, "uplink_outages");
  check_probability(p11, "uplink_outages");
  check_probability(p22, "uplink_outages");
  const double pu1 = p21 + (1.0 - p21) * p11;
  const double pu2 = pu1 + (1.0 - p21) * (1.0 - p11) * p22;
  return {pu1, pu2};
}

double throughput(double outage, double rate_sum) {
  check_probability(outage, "throughput");
  if (!(rate_sum >= 0.0) || !std::isfinite(rate_sum)) {
    throw std::domain_error("throughput: rate_sum must be finite and >= 0");
  }
  return (1.0 - outage) * rate_sum;
}

// ---------------------------------------------------------------------------
// Numerical-integration oracle.

OracleResult integral_oracle(const ComponentForm& f, double abs_tol, double rel_tol) {
  if (f.zero_threshold) return {0.0, 0.0, true};
  if (f.guard_outage || !std::isfinite(f.c0)) return {1.0, 0.0, true};

  const int m = f.cond_shape;
  std::vector<GammaTerm> active;
  for (const GammaTerm& t : f.interferers) {
    if (t.coupling > 0.0 && t.omega_hat > 0.0) active.push_back(t);
  }

  OracleResult res;
  if (active.empty()) {
    res.value = lower_regularized_gamma(m, f.c0);
    res.abs_err = 1e-15;
    res.converged = true;
    return res;
  }

  if (active.size() == 1) {
    const GammaTerm t = active[0];
    const GammaPdf pdf = GammaPdf::make(t.shape, t.omega_hat);
    const double cut = gamma_cutoff(t.shape, pdf.theta);
    const auto integrand = [&](double x) {
      return pdf(x) * lower_regularized_gamma(m, f.c0 + t.coupling * x);
    };
    const QuadOutcome q =
        adaptive_quadrature(integrand, 0.0, cut, gamma_seeds(t.shape, pdf.theta, cut),
                            0.1 * rel_tol, 2000);
    res.value = std::clamp(q.value, 0.0, 1.0);
    res.abs_err = q.err;
  } else {
    const GammaTerm ty = active[0];
    const GammaTerm tz = active[1];
    const GammaPdf pdf_y = GammaPdf::make(ty.shape, ty.omega_hat);
    const GammaPdf pdf_z = GammaPdf::make(tz.shape, tz.omega_hat);
    const double cut_y = gamma_cutoff(ty.shape, pdf_y.theta);
    const double cut_z = gamma_cutoff(tz.shape, pdf_z.theta);
    const std::vector<double> seeds_y = gamma_seeds(ty.shape, pdf_y.theta, cut_y);
    const std::vector<double> seeds_z = gamma_seeds(tz.shape, pdf_z.theta, cut_z);

    const auto outer = [&](double y) {
      const double base = f.c0 + ty.coupling * y;
      const auto inner = [&](double z) {
        return pdf_z(z) * lower_regularized_gamma(m, base + tz.coupling * z);
      };
      return pdf_y(y) * adaptive_quadrature(inner, 0.0, cut_z, seeds_z, 0.02 * rel_tol, 600).value;
    };
    const QuadOutcome q = adaptive_quadrature(outer, 0.0, cut_y, seeds_y, 0.1 * rel_tol, 1200);
    res.value = std::clamp(q.value, 0.0, 1.0);
    res.abs_err = q.err;
  }

  res.converged = res.abs_err <= std::max(abs_tol, rel_tol * std::fabs(res.value));
  return res;
}

OracleResult integral_oracle(Component which, const SystemConfig& cfg, const LinkSet& links,
                             const Thresholds& thr, int user, double abs_tol, double rel_tol) {
  return integral_oracle(component_form(which, cfg, links, thr, user), abs_tol, rel_tol);
}

OutageBreakdown analytic_outages(const SystemConfig& cfg, const LinkSet& links,
                                 const Thresholds& thr) {
  OutageBreakdown b;
  const int n = cfg.n_downlink;
  b.p_common.resize(static_cast<std::size_t>(n));
  b.p_private.resize(static_cast<std::size_t>(n));
  b.p_dl.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    b.p_common[u] = common_outage_component(cfg, links, thr, i);
    b.p_private[u] = private_outage_component(cfg, links, thr, i);
    b.p_dl[u] = downlink_outage(b.p_common[u], b.p_private[u]);
  }
  const UplinkComponents uc = uplink_outage_components(cfg, links, thr);
  b.p21 = uc.p21;
  b.p11 = uc.p11;
  b.p22 = uc.p22;
  std::tie(b.p_ul1, b.p_ul2) = uplink_outages(uc.p21, uc.p11, uc.p22);
  return b;
}

}  // namespace fdrsma
