#include "codedcache/numeric.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace codedcache {

double ipow(double x, std::int64_t n) {
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

double pow1m(double p, std::int64_t k) {
  if (k == 0) return 1.0;
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return 1.0;
  return std::exp(static_cast<double>(k) * std::log1p(-p));
}

double one_minus_pow1m(double p, std::int64_t k) {
  if (k == 0) return 0.0;
  if (p >= 1.0) return 1.0;
  if (p <= 0.0) return 0.0;
  return -std::expm1(static_cast<double>(k) * std::log1p(-p));
}

double binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (std::int64_t j = 1; j <= k; ++j) c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  return c;
}

std::vector<std::vector<double>> binom_table(int n) {
  std::vector<std::vector<double>> t(n + 1);
  for (int i = 0; i <= n; ++i) {
    t[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return t;
}

double stable_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

int thread_cap() {
  if (const char* env = std::getenv("CODEDCACHE_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<int>(n);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace codedcache
