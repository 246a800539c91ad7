#pragma once

#include <cstdint>
#include <vector>

#include "fdrsma/scenario.hpp"
#include "fdrsma/sinr.hpp"

namespace fdrsma {

// Marginal: component events are estimated separately and composed by the
// closed-form identities. JointChain: outage events are replayed through the
// decoding chain on each draw.
enum class Estimator { Marginal, JointChain };

struct McSettings {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 12345;
  std::uint64_t batch = 65'536;  // trials per work unit
  Estimator estimator = Estimator::Marginal;
  int workers = 0;  // 0 = hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

struct McOutageReport {
  std::vector<McEstimate> p_common;
  std::vector<McEstimate> p_private;
  std::vector<McEstimate> p_dl;
  McEstimate p21, p11, p22;
  McEstimate p_ul1, p_ul2;
};

struct McThroughputReport {
  std::vector<McEstimate> dl;
  McEstimate ul1, ul2;
  McEstimate sum;
};

// Counter-based stream: the state is derived from (seed, trial index) alone,
// so any partition of trials over workers reproduces the serial results.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64();
  double next_uniform();  // [0, 1)
  double next_normal();
  // Marsaglia-Tsang rejection sampler, exact for shape >= 1; unit scale.
  double next_gamma(double shape);

 private:
  std::uint64_t state_;
};

// One realization of all squared estimated channel magnitudes; a link with
// omega_hat = 0 yields the constant 0.
ChannelDraw sample_draw(TrialRng& rng, const LinkSet& links);

McOutageReport estimate_outages(const SystemConfig& cfg, const LinkSet& links,
                                const Thresholds& thr, const McSettings& settings);

McThroughputReport estimate_throughput(const SystemConfig& cfg, const LinkSet& links,
                                       const Thresholds& thr, const McSettings& settings);

// (1 - OP) * rate per user with the standard error propagated linearly.
McThroughputReport throughput_from_outages(const McOutageReport& rep, const SystemConfig& cfg);

// Power-domain NOMA comparison baseline (no message splitting; SIC decoding
// order far-to-near in the downlink, strong-user-first in the uplink). Same
// fading, estimation-error, SI and CCI models as the main scheme. Downlink
// power coefficients follow cfg.noma_dl_power. Field mapping: p_common /
// p_private hold the pre-stage and own-stage failure marginals, p21 / p11 the
// uplink stage failures, p22 is unused.
McOutageReport simulate_noma_baseline(const SystemConfig& cfg, const LinkSet& links,
                                      const Thresholds& thr, const McSettings& settings);

// Half-duplex baseline: uplink and downlink each get half the time resource;
// the downlink slot has no CCI (uplink users silent), the uplink slot no
// self-interference (BS silent). Returns the sum throughput.
McEstimate simulate_hd_baseline(const SystemConfig& cfg, const McSettings& settings);

// Full-duplex sum throughput over all users, for baseline comparisons.
McEstimate fd_sum_throughput(const SystemConfig& cfg, const LinkSet& links, const Thresholds& thr,
                             const McSettings& settings);

}  // namespace fdrsma
