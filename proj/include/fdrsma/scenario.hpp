#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fdrsma {

// Thrown when a scenario violates one of its structural constraints. The
// message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reading of the private-stream error factor "sum of private allocations":
//   SumAllPrivate     -> sum_i alpha_private[i]  (= 1 - alpha_c)
//   LiteralNTimesOwn  -> N * alpha_private[n]
enum class S2Interpretation { SumAllPrivate, LiteralNTimesOwn };

// Downlink power coefficients used by the NOMA comparison baseline.
enum class NomaDlPower { Equal, PrivateRenorm, CommonShared };

// Every scalar knob of the scenario. Defaults reproduce the reference
// two-downlink-user layout used throughout the test suite.
struct SystemConfig {
  int n_downlink = 2;

  // Powers [dBm] and the common noise floor [dBm] for all receivers.
  double p_bs_dbm = 20.0;
  double p_u1_dbm = 20.0;
  double p_u2_dbm = 20.0;
  double noise_dbm = -70.0;

  // Downlink power split: common stream plus one private stream per user.
  double alpha_c = 0.5;
  std::vector<double> alpha_private{0.15, 0.35};
  // Uplink split of user 2's transmission.
  double alpha_12 = 0.71;
  double alpha_22 = 0.29;

  double theta_sic = 0.0;  // residual fraction left by SIC
  double delta_si = 1e-7;  // self-interference power fraction after cancellation
  double beta_d = 0.8;     // downlink channel-estimation quality (inf = perfect)
  double beta_u = 0.8;     // uplink/CCI/SI channel-estimation quality
  double zeta = 0.17;      // rate allocation factor for user 2's first stream

  // Target rates [bit/s/Hz].
  std::vector<double> rate_common{0.45, 0.45};
  std::vector<double> rate_private{0.25, 0.25};
  double rate_u1 = 0.65;
  double rate_u2 = 0.80;

  // Geometry [m] and path-loss exponents per link class.
  std::vector<double> dist_bs_dl{85.0, 87.0};
  double dist_u1_bs = 70.0;
  double dist_u2_bs = 66.0;
  std::vector<double> dist_u1_dl{115.0, 115.0};
  std::vector<double> dist_u2_dl{118.0, 118.0};
  double dist_si = 1.5;
  double pl_exp_main = 3.3;
  double pl_exp_cci = 3.8;
  double pl_exp_si = 2.0;
  double ref_distance = 1.0;

  // Nakagami shape parameters (positive integers).
  int m_dl = 5;
  int m_u1 = 4;
  int m_u2 = 4;
  int m_si = 5;
  int m_cci = 3;

  // Co-channel interference from the uplink users onto the downlink users.
  // Disabled models an isolated downlink (also used by the half-duplex
  // baseline's downlink slot).
  bool cci_enabled = true;

  S2Interpretation s2_interpretation = S2Interpretation::SumAllPrivate;
  NomaDlPower noma_dl_power = NomaDlPower::Equal;
};

// Per-link second-order statistics. omega is the mean channel power including
// path loss, omega_err the estimation-error variance, omega_hat the estimated
// channel's variance (omega - omega_err).
struct LinkStats {
  double omega = 0.0;
  double omega_err = 0.0;
  double omega_hat = 0.0;
  int shape = 1;
};

// Derived statistics for every link in the scenario plus the linear SNRs.
struct LinkSet {
  std::vector<LinkStats> dl;    // BS -> downlink user n
  std::vector<LinkStats> cci1;  // U1 -> downlink user n
  std::vector<LinkStats> cci2;  // U2 -> downlink user n
  LinkStats u1;                 // U1 -> BS
  LinkStats u2;                 // U2 -> BS
  LinkStats si;                 // BS transmit antenna -> BS receive antenna
  double rho_b = 0.0;
  double rho_1 = 0.0;
  double rho_2 = 0.0;
};

// SINR thresholds 2^R - 1 per stream. The uplink user 2 rate is split by zeta
// into rate_u12 / rate_u22 before thresholding.
struct Thresholds {
  std::vector<double> gamma_c;
  std::vector<double> gamma_p;
  double gamma_11 = 0.0;
  double gamma_21 = 0.0;
  double gamma_22 = 0.0;
  double rate_u12 = 0.0;
  double rate_u22 = 0.0;
};

double dbm_to_linear_snr(double p_dbm, double noise_dbm);

// Returns cfg unchanged when all invariants hold; throws ConfigError naming
// the violated constraint otherwise. Sum constraints are checked to 1e-9.
const SystemConfig& validate_config(const SystemConfig& cfg);

LinkSet build_link_stats(const SystemConfig& cfg);

Thresholds thresholds_from_rates(const SystemConfig& cfg);

// Perfect CSI and SIC limit: beta_d = beta_u = inf, theta = 0. Idempotent.
SystemConfig perfect_limit(SystemConfig cfg);

}  // namespace fdrsma
