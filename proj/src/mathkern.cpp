#include "fdrsma/mathkern.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdrsma {

namespace {

constexpr int kMaxIter = 100000;

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * std::numeric_limits<double>::epsilon()) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("lower_regularized_gamma: series did not converge");
}

// Upper tail Q(a, x) by modified Lentz continued fraction.
double gamma_q_cf(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("lower_regularized_gamma: continued fraction did not converge");
}

}  // namespace

double lower_regularized_gamma(double shape, double x) {
  if (!std::isfinite(shape) || !std::isfinite(x) || shape <= 0.0 || x < 0.0) {
    throw std::domain_error("lower_regularized_gamma: requires finite shape > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < shape + 1.0) return gamma_p_series(shape, x);
  return 1.0 - gamma_q_cf(shape, x);
}

double erlang_sf(int shape, double x) {
  if (shape < 1) throw std::domain_error("erlang_sf: shape must be a positive integer");
  if (!std::isfinite(x) || x < 0.0) throw std::domain_error("erlang_sf: x must be finite and >= 0");
  if (x == 0.0) return 1.0;

  if (x <= 30.0) {
    // Direct Poisson-weight recurrence with compensated summation.
    double term = std::exp(-x);
    double sum = term;
    double comp = 0.0;
    for (int k = 1; k < shape; ++k) {
      term *= x / static_cast<double>(k);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return std::min(sum, 1.0);
  }

  // Large arguments: assemble each weight in log-domain and combine by
  // log-sum-exp so intermediate exponentials cannot under/overflow.
  const double lx = std::log(x);
  double max_l = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int k = 0; k < shape; ++k) {
    const double l = -x + k * lx - std::lgamma(static_cast<double>(k) + 1.0);
    if (l <= max_l) {
      acc += std::exp(l - max_l);
    } else {
      acc = acc * std::exp(max_l - l) + 1.0;
      max_l = l;
    }
  }
  if (!std::isfinite(max_l)) return 0.0;
  return std::min(std::exp(max_l + std::log(acc)), 1.0);
}

double erlang_cdf(int shape, double x) { return 1.0 - erlang_sf(shape, x); }

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("log_binomial: requires 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace fdrsma
