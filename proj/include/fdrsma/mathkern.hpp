#pragma once

#include <cstdint>

namespace fdrsma {

// Regularized lower incomplete gamma function P(a, x) = gamma(a, x) / Gamma(a).
// Power series below a + 1, continued fraction above.
double lower_regularized_gamma(double shape, double x);

// CDF of an Erlang(shape) variable at unit rate:
//   1 - exp(-x) * sum_{k < shape} x^k / k!
// Equals lower_regularized_gamma(shape, x) for integer shape.
double erlang_cdf(int shape, double x);

// Complement of erlang_cdf, computed directly from the exponential sum so it
// stays accurate when the CDF is close to 1.
double erlang_sf(int shape, double x);

// ln C(n, k) via log-gamma.
double log_binomial(std::int64_t n, std::int64_t k);

}  // namespace fdrsma
