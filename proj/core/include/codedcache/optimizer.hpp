#pragma once

#include <vector>

#include "codedcache/model.hpp"

namespace codedcache {

/// Result of the closed-form near-optimal caching distribution
///   q_i * M = 1 - (N - M) * w_i / sum_j w_j,   w_i = p_i^(-1/(K-1)).
/// `clamped` is set when the raw values left [0, 1/M] and were projected back.
struct QDaggerResult {
  CachingDist q;
  bool clamped = false;
  std::vector<int> clamp_report;  // storage-order indices that hit a bound
};

/// Requires K >= 2 (the exponent 1/(K-1) is undefined otherwise). M = N yields
/// the uniform distribution; M = 0 also returns uniform (any split works).
QDaggerResult q_dagger(const ProblemInstance& inst, const PopularityDist& pop);

struct ProjectionResult {
  CachingDist q;
  std::vector<int> clamped_indices;
};

/// Clamps entries into [0, 1/M] and redistributes the surplus or deficit
/// proportionally among unclamped entries until a fixed point. Input must sum
/// to 1 within 1e-6; output sums to 1 within 1e-9 and respects both bounds.
ProjectionResult project_feasible(std::vector<double> q_raw, double cache_size);

/// Grid-step projected coordinate descent on upper_bound_rate, started from
/// q_dagger (or uniform when K = 1). Never returns a worse objective than its
/// start. N <= 6.
CachingDist minimize_ub_numeric(const ProblemInstance& inst, const PopularityDist& pop,
                                int grid_resolution);

}  // namespace codedcache
