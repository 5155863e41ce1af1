#pragma once

#include <cstdint>
#include <vector>

#include "codedcache/model.hpp"

namespace codedcache {

/// Exact traffic rate, in units of F, that the XOR multicast scheme produces
/// for one request vector:
///   sum over subset sizes i and subsets v of max_{j in v} x_j^(i-1) (1-x_j)^(K-i+1)
/// with x_j = q_{d_j} * M. Evaluated by the sorted-rank fast path: within each
/// size i the subsets whose best member has rank r number C(K-r, i-1).
double rate_exact(const ProblemInstance& inst, const CachingDist& q, const RequestVector& d);

/// Oracle form of rate_exact: literal enumeration of all 2^K subsets. K <= 20.
double rate_exact_bruteforce(const ProblemInstance& inst, const CachingDist& q,
                             const RequestVector& d);

/// Expectation of rate_exact under i.i.d. demands, enumerating request
/// profiles (multiplicity vectors) instead of the N^K request vectors; every
/// vector with the same profile yields the same rate. Guarded by
/// C(N+K-1, K) <= 1e6.
double expected_rate_exact(const ProblemInstance& inst, const PopularityDist& pop,
                           const CachingDist& q);

/// P(A_i) for ascending-sorted probabilities: the chance that every demand
/// falls in {i..N} and content i is demanded at least once,
///   (1 - sum_{j<i} p_j)^K * [1 - (1 - p_i / (1 - sum_{j<i} p_j))^K].
std::vector<double> prob_A(const std::vector<double>& ascending_probs, int num_users);

/// Treatment of q_i = 0 entries that carry positive P(A_i) mass inside
/// upper_bound_rate: raise DegeneracyError, or use the x->0 limit K * P(A_i).
enum class ZeroCachePolicy { kError, kLimit };

/// R_ub = sum_i P(A_i) * (1-q_i M)/(q_i M) * [1 - (1-q_i M)^K] over p and q
/// co-sorted ascending. Requires q non-decreasing along ascending p
/// (HypothesisError otherwise). For M = 0 the bound is K * sum P(A_i).
double upper_bound_rate(const ProblemInstance& inst, const PopularityDist& pop,
                        const CachingDist& q, ZeroCachePolicy policy = ZeroCachePolicy::kError);

/// Both sides of the single-content-case identity
///   sum_{k=1..K} C(K,k) x^(k-1) (1-x)^(K-k+1)  ==  (1-x)/x * (1 - (1-x)^K).
struct IdentityCheck {
  double sum_form;
  double closed_form;
};
IdentityCheck per_case_identity_check(double cache_prob, int num_users);

/// Distribution of the number of distinct contents demanded by K users.
/// prob[i-1] = P(exactly i distinct). std_error empty in exact mode.
struct DistinctCountDist {
  std::vector<double> prob;
  std::vector<double> std_error;
};

/// Exact inclusion-exclusion over content subsets (N <= 20):
/// P(request set = S) = sum_{T subset S} (-1)^(|S|-|T|) (sum_{j in T} p_j)^K.
DistinctCountDist prob_B_exact(const PopularityDist& pop, int num_users);

/// Sampled estimate with per-bin standard errors; deterministic given seed.
DistinctCountDist prob_B_monte_carlo(const PopularityDist& pop, int num_users,
                                     std::int64_t samples, std::uint64_t seed);

/// Cut-set lower bound
///   R_lb = sum_i P(B_i) * max_{1<=k<=min(i,K)} max(0, k - k*M/floor(i/k)).
double lower_bound_rate(const ProblemInstance& inst, const PopularityDist& pop,
                        const std::vector<double>& prob_b);

/// Expected number of distinct contents demanded: N - sum_i (1-p_i)^K.
double expected_distinct(const PopularityDist& pop, int num_users);

}  // namespace codedcache
