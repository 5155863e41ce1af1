#pragma once

#include <cstdint>
#include <vector>

namespace codedcache {

/// x^n for integer n >= 0 by squaring, with the 0^0 = 1 convention.
double ipow(double x, std::int64_t n);

/// (1 - p)^k, computed in log space so tiny p survives the subtraction.
double pow1m(double p, std::int64_t k);

/// 1 - (1 - p)^k at full precision (expm1/log1p route).
double one_minus_pow1m(double p, std::int64_t k);

/// Binomial coefficient as a double (exact while representable; 0 outside range).
double binom(std::int64_t n, std::int64_t k);

/// Pascal triangle up to row n inclusive: table[i][j] = C(i, j).
std::vector<std::vector<double>> binom_table(int n);

/// Compensated (Neumaier) sum.
double stable_sum(const std::vector<double>& xs);

/// Worker thread count: CODEDCACHE_THREADS if set (clamped to >= 1),
/// otherwise the hardware concurrency.
int thread_cap();

}  // namespace codedcache
