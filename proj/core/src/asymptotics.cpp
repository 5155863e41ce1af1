#include "codedcache/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "codedcache/analytics.hpp"
#include "codedcache/io.hpp"
#include "codedcache/numeric.hpp"
#include "codedcache/optimizer.hpp"
#include "codedcache/rng.hpp"

namespace codedcache {

double zeta(double v, double tol) {
  if (!(v > 1.0)) throw DegeneracyError("v: zeta series diverges for v <= 1");
  if (!(tol > 0.0)) throw ParameterError("tol: must be positive");
  // The integral tail overestimates the true one by at most T^-v.
  const double t_needed = std::pow(tol, -1.0 / v);
  if (t_needed > 2e8) throw ParameterError("tol: unattainable for this v (needs > 2e8 terms)");
  const auto terms = static_cast<std::int64_t>(std::max(16.0, std::ceil(t_needed)));
  double sum = 0.0;
  for (std::int64_t j = terms; j >= 1; --j) sum += std::pow(static_cast<double>(j), -v);
  return sum + std::pow(static_cast<double>(terms), 1.0 - v) / (v - 1.0);
}

double best_c(double cache_size) {
  if (!(cache_size > 0.0)) throw ParameterError("M: must be positive");
  return cache_size / (2.0 + 2.0 * cache_size);
}

double default_lambda_prime(double v) {
  if (!(v >= 0.0) || v == 1.0) throw ParameterError("v: need v >= 0 and v != 1");
  if (v > 1.0) return std::exp(-1.0 / zeta(v, 1e-9));
  return std::exp(v - 1.0);
}

namespace {

double ratio_prefactor(double cache_size, double c) {
  if (!(c > 0.0) || !(c < 1.0)) throw ParameterError("c: must lie in (0, 1)");
  const double denom = c * cache_size - c * c - c * c * cache_size;
  if (!(denom > 0.0))
    throw DegeneracyError("c: constant choice makes c*M - c^2 - c^2*M non-positive");
  return (cache_size - c) / denom;
}

}  // namespace

double ratio_bound(double cache_size, double c, double v) {
  return ratio_prefactor(cache_size, c) / (1.0 - default_lambda_prime(v));
}

double ratio_bound_lambda(double cache_size, double c, double lambda_prime) {
  if (!(lambda_prime > 0.0) || !(lambda_prime < 1.0))
    throw ParameterError("lambda-prime: must lie in (0, 1)");
  return ratio_prefactor(cache_size, c) / (1.0 - lambda_prime);
}

std::vector<SweepRow> regime_sweep(const RegimeSpec& spec, double cache_size) {
  if (spec.n_list.empty()) throw ParameterError("n-list: must name at least one N");
  if (!(spec.scale_a > 0.0)) throw ParameterError("a: must be positive");
  if (!(spec.exponent >= 0.0) || spec.exponent == 1.0)
    throw ParameterError("zipf-v: need v >= 0 and v != 1");

  const double c = std::isnan(spec.c) ? best_c(cache_size) : spec.c;
  const double bound = ratio_bound(cache_size, c, spec.exponent);

  std::vector<SweepRow> rows;
  rows.reserve(spec.n_list.size());
  for (std::size_t r = 0; r < spec.n_list.size(); ++r) {
    const int n = spec.n_list[r];
    if (n < 1) throw ParameterError("n-list: entries must be >= 1");
    const auto k = static_cast<int>(
        std::ceil(spec.scale_a * std::pow(static_cast<double>(n), spec.exponent)));
    if (k < 2)
      throw ParameterError("a: K = ceil(a*N^v) must be >= 2 for the q_dagger placement");

    const ProblemInstance inst{n, k, cache_size, 1};
    inst.validate();
    const PopularityDist pop = zipf(n, spec.exponent);
    const auto qd = q_dagger(inst, pop);
    // Clamped q_dagger tails may hold zero cache; score them by the limit term.
    const double r_ub = upper_bound_rate(inst, pop, qd.q, ZeroCachePolicy::kLimit);
    const DistinctCountDist pb =
        n <= 20 ? prob_B_exact(pop, k)
                : prob_B_monte_carlo(pop, k, spec.mc_trials,
                                     substream(substream(spec.seed, kSaltRow), r));
    const double r_lb = lower_bound_rate(inst, pop, pb.prob);
    rows.push_back({n, k, r_ub, r_lb, r_ub / r_lb, bound});
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "N,K,R_ub,R_lb,ratio,bound\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + ',' + std::to_string(row.k) + ',' +
           format_double(row.r_ub) + ',' + format_double(row.r_lb) + ',' +
           format_double(row.ratio) + ',' + format_double(row.bound) + '\n';
  }
  return out;
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out += std::string(i == 0 ? "" : ",") + "{\"N\":" + std::to_string(row.n) +
           ",\"K\":" + std::to_string(row.k) + ",\"R_ub\":" + format_double(row.r_ub) +
           ",\"R_lb\":" + format_double(row.r_lb) + ",\"ratio\":" + format_double(row.ratio) +
           ",\"bound\":" + format_double(row.bound) + "}";
  }
  out += "]";
  return out;
}

}  // namespace codedcache
