#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "codedcache/model.hpp"

namespace codedcache {

/// Riemann zeta for v > 1: partial sum to T terms plus the integral tail
/// 1/((v-1) T^(v-1)), with T chosen so the correction error stays below tol.
/// Throws DegeneracyError for v <= 1 and ParameterError when tol would need
/// more than ~2e8 terms.
double zeta(double v, double tol = 1e-10);

/// Maximizer of c*M - c^2 - c^2*M over c in (0, 1): c* = M / (2 + 2M).
double best_c(double cache_size);

/// Default asymptotic-regime constant: exp(-1/zeta(v)) for v > 1 and
/// exp(v - 1) for v < 1.
double default_lambda_prime(double v);

/// Performance-ratio bound (M - c) / (c*M - c^2 - c^2*M) * 1 / (1 - lambda')
/// with the default lambda' for the given Zipf exponent. v must differ from 1
/// and the quadratic denominator must be positive (DegeneracyError otherwise).
double ratio_bound(double cache_size, double c, double v);

/// Same bound with an explicit regime constant lambda' in (0, 1).
double ratio_bound_lambda(double cache_size, double c, double lambda_prime);

/// One finite-size sweep over content counts: K = ceil(a * N^v), Zipf(v)
/// popularity, q_dagger placement.
struct RegimeSpec {
  double exponent = 2.0;                         // Zipf v
  double scale_a = 1.0;                          // K = ceil(a * N^v)
  std::vector<int> n_list;                       // content counts, one row each
  double c = std::numeric_limits<double>::quiet_NaN();  // NaN -> best_c(M)
  std::int64_t mc_trials = 100000;               // P(B_i) samples when N > 20
  std::uint64_t seed = 0;
};

struct SweepRow {
  int n = 0;
  int k = 0;
  double r_ub = 0.0;
  double r_lb = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
};

/// Evaluates one row per N: R_ub via the Theorem-style upper bound on the
/// co-sorted (p, q_dagger) pair, R_lb via the cut-set bound with exact P(B_i)
/// for N <= 20 and Monte Carlo estimates above, and the asymptotic ratio bound.
std::vector<SweepRow> regime_sweep(const RegimeSpec& spec, double cache_size);

/// CSV with header N,K,R_ub,R_lb,ratio,bound.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// JSON array of row objects.
std::string sweep_to_json(const std::vector<SweepRow>& rows);

}  // namespace codedcache
