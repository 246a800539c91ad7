#include "fdrsma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "fdrsma/analytic.hpp"

namespace fdrsma {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

McEstimate binomial_estimate(std::uint64_t count, std::uint64_t trials) {
  McEstimate e;
  e.trials = trials;
  e.mean = static_cast<double>(count) / static_cast<double>(trials);
  e.std_err = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
  return e;
}

McEstimate derived_estimate(double mean, double std_err, std::uint64_t trials) {
  return {mean, std_err, trials};
}

int resolve_workers(const McSettings& s, std::uint64_t chunks) {
  int w = s.workers;
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w < 1) w = 1;
  w = std::min<std::uint64_t>(static_cast<std::uint64_t>(w), chunks);
  return std::max(w, 1);
}

// Runs settings.trials independent trials; fn(rng, counts) is invoked once per
// trial. Counts must be default-constructible and support operator+=. The
// reduction is a sum of integer counters, so worker count and batch size do
// not affect the result.
template <typename Counts, typename TrialFn>
Counts run_trials(const McSettings& settings, const TrialFn& fn) {
  if (settings.trials == 0) throw std::invalid_argument("McSettings: trials must be >= 1");
  if (settings.batch == 0) throw std::invalid_argument("McSettings: batch must be >= 1");
  const std::uint64_t batch = std::min(settings.batch, settings.trials);
  const std::uint64_t chunks = (settings.trials + batch - 1) / batch;
  const int workers = resolve_workers(settings, chunks);

  std::vector<Counts> partial(static_cast<std::size_t>(workers));
  std::atomic<std::uint64_t> next_chunk{0};
  auto work = [&](int w) {
    Counts& local = partial[static_cast<std::size_t>(w)];
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks) break;
      const std::uint64_t lo = c * batch;
      const std::uint64_t hi = std::min(lo + batch, settings.trials);
      for (std::uint64_t t = lo; t < hi; ++t) {
        TrialRng rng(settings.seed, t);
        fn(rng, local);
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  Counts total = partial[0];
  for (std::size_t w = 1; w < partial.size(); ++w) total += partial[w];
  return total;
}

struct RsmaCounts {
  std::vector<std::uint64_t> common_fail, private_fail, dl_fail;
  std::uint64_t f21 = 0, f11 = 0, f22 = 0, ul1_fail = 0, ul2_fail = 0;

  void resize(std::size_t n) {
    common_fail.assign(n, 0);
    private_fail.assign(n, 0);
    dl_fail.assign(n, 0);
  }

  RsmaCounts& operator+=(const RsmaCounts& o) {
    if (common_fail.size() < o.common_fail.size()) resize(o.common_fail.size());
    for (std::size_t i = 0; i < o.common_fail.size(); ++i) {
      common_fail[i] += o.common_fail[i];
      private_fail[i] += o.private_fail[i];
      dl_fail[i] += o.dl_fail[i];
    }
    f21 += o.f21;
    f11 += o.f11;
    f22 += o.f22;
    ul1_fail += o.ul1_fail;
    ul2_fail += o.ul2_fail;
    return *this;
  }
};

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
  state_ = mix64(seed + 0x9e3779b97f4a7c15ULL) ^
           mix64(trial * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
}

std::uint64_t TrialRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double TrialRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double TrialRng::next_normal() {
  const double u1 = 1.0 - next_uniform();  // (0, 1]
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double TrialRng::next_gamma(double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u <= 0.0 || std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

namespace {

double draw_gain(TrialRng& rng, const LinkStats& link) {
  if (link.omega_hat <= 0.0) return 0.0;
  return rng.next_gamma(static_cast<double>(link.shape)) *
         (link.omega_hat / static_cast<double>(link.shape));
}

}  // namespace

ChannelDraw sample_draw(TrialRng& rng, const LinkSet& links) {
  ChannelDraw d;
  d.g2_dl.resize(links.dl.size());
  d.g2_cci1.resize(links.cci1.size());
  d.g2_cci2.resize(links.cci2.size());
  for (std::size_t i = 0; i < links.dl.size(); ++i) d.g2_dl[i] = draw_gain(rng, links.dl[i]);
  for (std::size_t i = 0; i < links.cci1.size(); ++i) d.g2_cci1[i] = draw_gain(rng, links.cci1[i]);
  for (std::size_t i = 0; i < links.cci2.size(); ++i) d.g2_cci2[i] = draw_gain(rng, links.cci2[i]);
  d.g2_u1 = draw_gain(rng, links.u1);
  d.g2_u2 = draw_gain(rng, links.u2);
  d.g2_si = draw_gain(rng, links.si);
  return d;
}

McOutageReport estimate_outages(const SystemConfig& cfg, const LinkSet& links,
                                const Thresholds& thr, const McSettings& settings) {
  const SinrConstants consts = make_sinr_constants(cfg, links);
  const std::size_t n = static_cast<std::size_t>(cfg.n_downlink);

  const auto trial = [&](TrialRng& rng, RsmaCounts& counts) {
    if (counts.common_fail.size() != n) counts.resize(n);
    const ChannelDraw draw = sample_draw(rng, links);
    for (std::size_t i = 0; i < n; ++i) {
      const auto [sc, sp] = downlink_sinrs(draw, consts, static_cast<int>(i));
      const bool cf = sc < thr.gamma_c[i];
      const bool pf = sp < thr.gamma_p[i];
      counts.common_fail[i] += cf;
      counts.private_fail[i] += pf;
      counts.dl_fail[i] += cf || pf;
    }
    const UplinkSinrs u = uplink_sinrs(draw, consts);
    const bool f21 = u.x12 < thr.gamma_21;
    const bool f11 = u.x1 < thr.gamma_11;
    const bool f22 = u.x22 < thr.gamma_22;
    counts.f21 += f21;
    counts.f11 += f11;
    counts.f22 += f22;
    counts.ul1_fail += f21 || f11;
    counts.ul2_fail += f21 || f11 || f22;
  };

  const RsmaCounts counts = run_trials<RsmaCounts>(settings, trial);
  const std::uint64_t nt = settings.trials;

  McOutageReport rep;
  rep.p_common.resize(n);
  rep.p_private.resize(n);
  rep.p_dl.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.p_common[i] = binomial_estimate(counts.common_fail[i], nt);
    rep.p_private[i] = binomial_estimate(counts.private_fail[i], nt);
    if (settings.estimator == Estimator::JointChain) {
      rep.p_dl[i] = binomial_estimate(counts.dl_fail[i], nt);
    } else {
      const double composed = downlink_outage(rep.p_common[i].mean, rep.p_private[i].mean);
      rep.p_dl[i] = derived_estimate(
          composed, std::sqrt(composed * (1.0 - composed) / static_cast<double>(nt)), nt);
    }
  }
  rep.p21 = binomial_estimate(counts.f21, nt);
  rep.p11 = binomial_estimate(counts.f11, nt);
  rep.p22 = binomial_estimate(counts.f22, nt);
  if (settings.estimator == Estimator::JointChain) {
    rep.p_ul1 = binomial_estimate(counts.ul1_fail, nt);
    rep.p_ul2 = binomial_estimate(counts.ul2_fail, nt);
  } else {
    const auto [pu1, pu2] = uplink_outages(rep.p21.mean, rep.p11.mean, rep.p22.mean);
    rep.p_ul1 =
        derived_estimate(pu1, std::sqrt(pu1 * (1.0 - pu1) / static_cast<double>(nt)), nt);
    rep.p_ul2 =
        derived_estimate(pu2, std::sqrt(pu2 * (1.0 - pu2) / static_cast<double>(nt)), nt);
  }
  return rep;
}

McThroughputReport estimate_throughput(const SystemConfig& cfg, const LinkSet& links,
                                       const Thresholds& thr, const McSettings& settings) {
  return throughput_from_outages(estimate_outages(cfg, links, thr, settings), cfg);
}

McThroughputReport throughput_from_outages(const McOutageReport& rep, const SystemConfig& cfg) {
  McThroughputReport out;
  out.dl.resize(rep.p_dl.size());
  double sum = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < rep.p_dl.size(); ++i) {
    const double rate = cfg.rate_common[i] + cfg.rate_private[i];
    out.dl[i] = derived_estimate((1.0 - rep.p_dl[i].mean) * rate, rate * rep.p_dl[i].std_err,
                                 rep.p_dl[i].trials);
    sum += out.dl[i].mean;
    var += out.dl[i].std_err * out.dl[i].std_err;
  }
  out.ul1 = derived_estimate((1.0 - rep.p_ul1.mean) * cfg.rate_u1,
                             cfg.rate_u1 * rep.p_ul1.std_err, rep.p_ul1.trials);
  out.ul2 = derived_estimate((1.0 - rep.p_ul2.mean) * cfg.rate_u2,
                             cfg.rate_u2 * rep.p_ul2.std_err, rep.p_ul2.trials);
  sum += out.ul1.mean + out.ul2.mean;
  var += out.ul1.std_err * out.ul1.std_err + out.ul2.std_err * out.ul2.std_err;
  out.sum = derived_estimate(sum, std::sqrt(var), rep.p_ul1.trials);
  return out;
}

// ---------------------------------------------------------------------------
// Baselines.

namespace {

struct NomaCounts {
  std::vector<std::uint64_t> pre_fail, own_fail, user_fail;
  std::uint64_t u2_fail = 0, u1_own_fail = 0, u1_fail = 0;

  void resize(std::size_t n) {
    pre_fail.assign(n, 0);
    own_fail.assign(n, 0);
    user_fail.assign(n, 0);
  }

  NomaCounts& operator+=(const NomaCounts& o) {
    if (pre_fail.size() < o.pre_fail.size()) resize(o.pre_fail.size());
    for (std::size_t i = 0; i < o.pre_fail.size(); ++i) {
      pre_fail[i] += o.pre_fail[i];
      own_fail[i] += o.own_fail[i];
      user_fail[i] += o.user_fail[i];
    }
    u2_fail += o.u2_fail;
    u1_own_fail += o.u1_own_fail;
    u1_fail += o.u1_fail;
    return *this;
  }
};

std::vector<double> noma_dl_powers(const SystemConfig& cfg) {
  const std::size_t n = cfg.alpha_private.size();
  std::vector<double> a(n, 0.0);
  switch (cfg.noma_dl_power) {
    case NomaDlPower::Equal:
      for (auto& v : a) v = 1.0 / static_cast<double>(n);
      break;
    case NomaDlPower::PrivateRenorm: {
      const double s = std::accumulate(cfg.alpha_private.begin(), cfg.alpha_private.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) a[i] = cfg.alpha_private[i] / s;
      break;
    }
    case NomaDlPower::CommonShared:
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = cfg.alpha_private[i] + cfg.alpha_c / static_cast<double>(n);
      }
      break;
  }
  return a;
}

}  // namespace

McOutageReport simulate_noma_baseline(const SystemConfig& cfg, const LinkSet& links,
                                      const Thresholds& /*unused: full-rate thresholds*/,
                                      const McSettings& settings) {
  const std::size_t n = static_cast<std::size_t>(cfg.n_downlink);
  const double rho_b = links.rho_b, rho_1 = links.rho_1, rho_2 = links.rho_2;
  const double theta = cfg.theta_sic;

  // Streams are decoded far-to-near (weakest mean channel first).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return links.dl[a].omega < links.dl[b].omega; });

  const std::vector<double> a = noma_dl_powers(cfg);
  std::vector<double> gamma_user(n);
  for (std::size_t i = 0; i < n; ++i) {
    gamma_user[i] = std::expm1((cfg.rate_common[i] + cfg.rate_private[i]) * std::numbers::ln2);
  }
  const double gamma_u1 = std::expm1(cfg.rate_u1 * std::numbers::ln2);
  const double gamma_u2 = std::expm1(cfg.rate_u2 * std::numbers::ln2);

  const double si_err = rho_b * cfg.delta_si * links.si.omega_err;
  const double ul_c1 = 1.0 + rho_1 * links.u1.omega_err + rho_2 * links.u2.omega_err + si_err;
  const double ul_c2 =
      1.0 + rho_1 * links.u1.omega_err + theta * rho_2 * links.u2.omega_err + si_err;

  const auto trial = [&](TrialRng& rng, NomaCounts& counts) {
    if (counts.pre_fail.size() != n) counts.resize(n);
    const ChannelDraw draw = sample_draw(rng, links);

    for (std::size_t k = 0; k < n; ++k) {
      const double x = draw.g2_dl[k];
      const double cci = draw.g2_cci1[k] * rho_1 + draw.g2_cci2[k] * rho_2;
      const double cee = rho_b * links.dl[k].omega_err;
      bool pre = false, own = false;
      double decoded = 0.0;
      double remaining = 1.0;
      for (std::size_t s = 0; s < n; ++s) {
        const std::size_t j = order[s];
        remaining -= a[j];
        const double inter = rho_b * x * (remaining + theta * decoded);
        const double err = 1.0 + rho_1 * links.cci1[k].omega_err +
                           rho_2 * links.cci2[k].omega_err +
                           cee * (remaining + a[j] + theta * decoded);
        const double sinr = rho_b * x * a[j] / (inter + cci + err);
        const bool fail = sinr < gamma_user[j];
        if (j == k) {
          own = fail;
          break;
        }
        pre = pre || fail;
        decoded += a[j];
      }
      counts.pre_fail[k] += pre;
      counts.own_fail[k] += own;
      counts.user_fail[k] += pre || own;
    }

    const double y = draw.g2_u1, z = draw.g2_u2;
    const double si = draw.g2_si * cfg.delta_si * rho_b;
    const bool f2 = z * rho_2 / (y * rho_1 + si + ul_c1) < gamma_u2;
    const bool f1 = y * rho_1 / (z * rho_2 * theta + si + ul_c2) < gamma_u1;
    counts.u2_fail += f2;
    counts.u1_own_fail += f1;
    counts.u1_fail += f2 || f1;
  };

  const NomaCounts counts = run_trials<NomaCounts>(settings, trial);
  const std::uint64_t nt = settings.trials;

  McOutageReport rep;
  rep.p_common.resize(n);
  rep.p_private.resize(n);
  rep.p_dl.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.p_common[i] = binomial_estimate(counts.pre_fail[i], nt);
    rep.p_private[i] = binomial_estimate(counts.own_fail[i], nt);
    rep.p_dl[i] = binomial_estimate(counts.user_fail[i], nt);
  }
  rep.p21 = binomial_estimate(counts.u2_fail, nt);
  rep.p11 = binomial_estimate(counts.u1_own_fail, nt);
  rep.p22 = derived_estimate(0.0, 0.0, nt);
  rep.p_ul1 = binomial_estimate(counts.u1_fail, nt);
  rep.p_ul2 = binomial_estimate(counts.u2_fail, nt);
  return rep;
}

McEstimate simulate_hd_baseline(const SystemConfig& cfg, const McSettings& settings) {
  SystemConfig dl_cfg = cfg;
  dl_cfg.cci_enabled = false;  // uplink users are silent in the downlink slot
  SystemConfig ul_cfg = cfg;
  ul_cfg.delta_si = 0.0;  // the BS does not transmit in the uplink slot

  McSettings ul_settings = settings;
  ul_settings.seed = mix64(settings.seed + 0x71c9u);

  const LinkSet dl_links = build_link_stats(dl_cfg);
  const Thresholds dl_thr = thresholds_from_rates(dl_cfg);
  const McThroughputReport dl = estimate_throughput(dl_cfg, dl_links, dl_thr, settings);

  const LinkSet ul_links = build_link_stats(ul_cfg);
  const Thresholds ul_thr = thresholds_from_rates(ul_cfg);
  const McThroughputReport ul = estimate_throughput(ul_cfg, ul_links, ul_thr, ul_settings);

  double mean = 0.0;
  double var = 0.0;
  for (const auto& e : dl.dl) {
    mean += e.mean;
    var += e.std_err * e.std_err;
  }
  mean += ul.ul1.mean + ul.ul2.mean;
  var += ul.ul1.std_err * ul.ul1.std_err + ul.ul2.std_err * ul.ul2.std_err;
  return {0.5 * mean, 0.5 * std::sqrt(var), settings.trials};
}

McEstimate fd_sum_throughput(const SystemConfig& cfg, const LinkSet& links, const Thresholds& thr,
                             const McSettings& settings) {
  return estimate_throughput(cfg, links, thr, settings).sum;
}

}  // namespace fdrsma
