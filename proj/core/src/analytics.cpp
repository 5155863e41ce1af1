#include "codedcache/analytics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "codedcache/numeric.hpp"
#include "codedcache/rng.hpp"

namespace codedcache {

namespace {

/// Per-user cache hit probabilities x_j = q_{d_j} * M, after validation.
std::vector<double> cache_probs(const ProblemInstance& inst, const CachingDist& q,
                                const RequestVector& d) {
  inst.validate();
  if (q.size() != inst.num_contents) throw ParameterError("q: length must equal N");
  q.validate_feasible(inst.cache_size);
  validate_requests(d, inst.num_contents, inst.num_users);
  std::vector<double> x(d.size());
  for (std::size_t j = 0; j < d.size(); ++j)
    x[j] = std::min(1.0, q.fraction(d[j]) * inst.cache_size);
  return x;
}

/// powers[j][e] = base_j^e for e in 0..K.
std::vector<std::vector<double>> power_table(const std::vector<double>& base, int max_exp) {
  std::vector<std::vector<double>> t(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) {
    t[j].resize(max_exp + 1);
    t[j][0] = 1.0;
    for (int e = 1; e <= max_exp; ++e) t[j][e] = t[j][e - 1] * base[j];
  }
  return t;
}

}  // namespace

double rate_exact(const ProblemInstance& inst, const CachingDist& q, const RequestVector& d) {
  const auto x = cache_probs(inst, q, d);
  const int K = inst.num_users;
  std::vector<double> xc(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) xc[j] = 1.0 - x[j];
  const auto xp = power_table(x, K);
  const auto cp = power_table(xc, K + 1);
  const auto C = binom_table(K);

  double total = 0.0;
  std::vector<std::pair<double, int>> f(K);
  for (int i = 1; i <= K; ++i) {
    for (int j = 0; j < K; ++j) f[j] = {xp[j][i - 1] * cp[j][K - i + 1], j};
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    // Subsets of size i whose largest term sits at sorted rank r: the other
    // i-1 members come from the K-r users ranked below, C(K-r, i-1) ways.
    for (int r = 1; r <= K - i + 1; ++r) total += f[r - 1].first * C[K - r][i - 1];
  }
  return total;
}

double rate_exact_bruteforce(const ProblemInstance& inst, const CachingDist& q,
                             const RequestVector& d) {
  const auto x = cache_probs(inst, q, d);
  const int K = inst.num_users;
  if (K > 20) throw CapacityError("K: brute-force subset enumeration limited to K <= 20");

  double total = 0.0;
  const std::uint32_t full = (1u << K) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int i = std::popcount(mask);
    double best = 0.0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      best = std::max(best, ipow(x[j], i - 1) * ipow(1.0 - x[j], K - i + 1));
    }
    total += best;
  }
  return total;
}

double expected_rate_exact(const ProblemInstance& inst, const PopularityDist& pop,
                           const CachingDist& q) {
  inst.validate();
  const int N = inst.num_contents;
  const int K = inst.num_users;
  if (pop.size() != N) throw ParameterError("p: length must equal N");
  if (q.size() != N) throw ParameterError("q: length must equal N");
  const double profiles = binom(static_cast<std::int64_t>(N) + K - 1, K);
  if (!(profiles <= 1e6))
    throw CapacityError("profile enumeration needs C(N+K-1, K) <= 1e6, got " +
                        std::to_string(profiles));

  const double log_k_fact = std::lgamma(static_cast<double>(K) + 1.0);
  std::vector<std::int64_t> alpha(N, 0);
  alpha[0] = K;
  double total = 0.0;
  while (true) {
    double log_w = log_k_fact;
    for (int i = 0; i < N; ++i) {
      if (alpha[i] == 0) continue;
      log_w -= std::lgamma(static_cast<double>(alpha[i]) + 1.0);
      log_w += static_cast<double>(alpha[i]) * std::log(pop.prob(i));
    }
    RequestProfile profile{alpha};
    total += std::exp(log_w) * rate_exact(inst, q, representative_requests(profile));

    // next weak composition of K into N parts
    int i = 0;
    while (i < N - 1 && alpha[i] == 0) ++i;
    if (i == N - 1) break;
    const std::int64_t t = alpha[i];
    alpha[i] = 0;
    alpha[0] = t - 1;
    ++alpha[i + 1];
  }
  return total;
}

std::vector<double> prob_A(const std::vector<double>& ascending_probs, int num_users) {
  const int n = static_cast<int>(ascending_probs.size());
  if (n < 1) throw ParameterError("p: must have at least one entry");
  if (num_users < 1) throw ParameterError("K: need at least one user");
  for (int i = 0; i + 1 < n; ++i)
    if (ascending_probs[i] > ascending_probs[i + 1] + 1e-12)
      throw ParameterError("p: must be ascending-sorted");

  // Suffix sums keep 1 - sum_{j<i} p_j positive by construction.
  std::vector<double> suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + ascending_probs[i];
  std::vector<double> pa(n);
  for (int i = 0; i < n; ++i) {
    if (ascending_probs[i] > 0.0 && suffix[i] <= 0.0)
      throw DegeneracyError("p: probability mass exhausted before index " + std::to_string(i));
    // suffix_i^K * [1 - (1 - p_i/suffix_i)^K] telescopes to the difference below.
    pa[i] = ipow(suffix[i], num_users) - ipow(suffix[i + 1], num_users);
    if (pa[i] < 0.0) pa[i] = 0.0;
  }
  return pa;
}

double upper_bound_rate(const ProblemInstance& inst, const PopularityDist& pop,
                        const CachingDist& q, ZeroCachePolicy policy) {
  inst.validate();
  const int N = inst.num_contents;
  const int K = inst.num_users;
  const double M = inst.cache_size;
  if (pop.size() != N) throw ParameterError("p: length must equal N");
  if (q.size() != N) throw ParameterError("q: length must equal N");
  q.validate_feasible(M);

  // Co-sort by (p, q); ties in p are ordered by q so they can never fail the
  // monotonicity hypothesis on their own.
  std::vector<std::pair<double, double>> pq(N);
  for (int i = 0; i < N; ++i) pq[i] = {pop.prob(i), q.fraction(i)};
  std::sort(pq.begin(), pq.end());
  for (int i = 0; i + 1 < N; ++i)
    if (pq[i].second > pq[i + 1].second + 1e-12)
      throw HypothesisError("q: not co-monotone with p (bound requires ascending q along ascending p)");

  std::vector<double> p_sorted(N);
  for (int i = 0; i < N; ++i) p_sorted[i] = pq[i].first;
  const auto pa = prob_A(p_sorted, K);

  if (M == 0.0) {
    // x -> 0 limit of (1-x)/x * (1-(1-x)^K) is K.
    return static_cast<double>(K) * stable_sum(pa);
  }

  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = std::min(1.0, pq[i].second * M);
    if (x == 0.0) {
      if (pa[i] == 0.0) continue;
      if (policy == ZeroCachePolicy::kError)
        throw DegeneracyError("q: entry with q*M = 0 carries positive request mass");
      total += pa[i] * static_cast<double>(K);
      continue;
    }
    total += pa[i] * ((1.0 - x) / x) * one_minus_pow1m(x, K);
  }
  return total;
}

IdentityCheck per_case_identity_check(double cache_prob, int num_users) {
  if (!(cache_prob > 0.0) || cache_prob > 1.0)
    throw ParameterError("qM: identity needs 0 < qM <= 1");
  if (num_users < 1) throw ParameterError("K: need at least one user");
  const int K = num_users;
  double sum_form = 0.0;
  for (int k = 1; k <= K; ++k)
    sum_form += binom(K, k) * ipow(cache_prob, k - 1) * ipow(1.0 - cache_prob, K - k + 1);
  const double closed = ((1.0 - cache_prob) / cache_prob) * one_minus_pow1m(cache_prob, K);
  return {sum_form, closed};
}

DistinctCountDist prob_B_exact(const PopularityDist& pop, int num_users) {
  const int N = pop.size();
  if (N > 20) throw CapacityError("N: exact P(B_i) limited to N <= 20");
  if (num_users < 1) throw ParameterError("K: need at least one user");

  const std::size_t full = std::size_t{1} << N;
  // g[S] = P(all demands fall inside S) = (sum_{j in S} p_j)^K, then a signed
  // subset (Moebius) transform turns it into P(request set = S) exactly.
  std::vector<double> g(full, 0.0);
  for (std::size_t mask = 1; mask < full; ++mask) {
    const std::size_t low = mask & (mask - 1);
    g[mask] = g[low] + pop.prob(std::countr_zero(mask));
  }
  for (std::size_t mask = 1; mask < full; ++mask) g[mask] = ipow(g[mask], num_users);
  for (int b = 0; b < N; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t mask = 0; mask < full; ++mask)
      if (mask & bit) g[mask] -= g[mask ^ bit];
  }

  DistinctCountDist out;
  out.prob.assign(N, 0.0);
  for (std::size_t mask = 1; mask < full; ++mask)
    out.prob[std::popcount(mask) - 1] += std::max(0.0, g[mask]);
  return out;
}

DistinctCountDist prob_B_monte_carlo(const PopularityDist& pop, int num_users,
                                     std::int64_t samples, std::uint64_t seed) {
  if (num_users < 1) throw ParameterError("K: need at least one user");
  if (samples < 1) throw ParameterError("trials: need at least one sample");
  const int N = pop.size();
  Rng rng(seed);
  CdfSampler sampler(pop.probs());
  std::vector<std::int64_t> hits(N, 0);
  std::vector<int> draw(num_users);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (auto& v : draw) v = sampler.draw(rng);
    std::sort(draw.begin(), draw.end());
    const int distinct =
        static_cast<int>(std::unique(draw.begin(), draw.end()) - draw.begin());
    ++hits[distinct - 1];
  }
  DistinctCountDist out;
  out.prob.resize(N);
  out.std_error.resize(N);
  for (int i = 0; i < N; ++i) {
    const double ph = static_cast<double>(hits[i]) / static_cast<double>(samples);
    out.prob[i] = ph;
    out.std_error[i] = std::sqrt(ph * (1.0 - ph) / static_cast<double>(samples));
  }
  return out;
}

double lower_bound_rate(const ProblemInstance& inst, const PopularityDist& pop,
                        const std::vector<double>& prob_b) {
  inst.validate();
  const int N = inst.num_contents;
  if (pop.size() != N) throw ParameterError("p: length must equal N");
  if (static_cast<int>(prob_b.size()) != N) throw ParameterError("PB: length must equal N");
  const double psum = stable_sum(prob_b);
  if (std::abs(psum - 1.0) > 1e-6) throw ParameterError("PB: entries must sum to 1");

  const double M = inst.cache_size;
  double total = 0.0;
  for (int i = 1; i <= N; ++i) {
    double inner = 0.0;
    const int kmax = std::min(i, inst.num_users);
    for (int k = 1; k <= kmax; ++k) {
      const double term = k - static_cast<double>(k) / static_cast<double>(i / k) * M;
      inner = std::max(inner, term);  // negative cut-set values carry no information
    }
    total += prob_b[i - 1] * inner;
  }
  return total;
}

double expected_distinct(const PopularityDist& pop, int num_users) {
  if (num_users < 1) throw ParameterError("K: need at least one user");
  double misses = 0.0;
  for (int i = 0; i < pop.size(); ++i) misses += pow1m(pop.prob(i), num_users);
  return static_cast<double>(pop.size()) - misses;
}

}  // namespace codedcache
