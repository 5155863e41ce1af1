#include "codedcache/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "codedcache/analytics.hpp"
#include "codedcache/numeric.hpp"

namespace codedcache {

namespace {

constexpr double kSnapTol = 1e-12;

std::vector<double> normalized(std::vector<double> v) {
  const double s = stable_sum(v);
  for (auto& x : v) x /= s;
  return v;
}

bool comonotone(const PopularityDist& pop, const std::vector<double>& q) {
  const auto& order = pop.ascending_order();
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    if (q[order[i]] > q[order[i + 1]] + 1e-12) return false;
  return true;
}

}  // namespace

QDaggerResult q_dagger(const ProblemInstance& inst, const PopularityDist& pop) {
  inst.validate();
  const int N = inst.num_contents;
  const int K = inst.num_users;
  const double M = inst.cache_size;
  if (pop.size() != N) throw ParameterError("p: length must equal N");
  if (K < 2) throw ParameterError("K: the exponent 1/(K-1) is undefined for K = 1");

  if (M == 0.0) {
    // Nothing is cached; every split of the (empty) budget is equivalent.
    return {uniform_caching(N), false, {}};
  }

  // w_i = p_i^(-1/(K-1)), in log space so tiny p_i cannot overflow.
  std::vector<double> w(N);
  for (int i = 0; i < N; ++i) w[i] = std::exp(-std::log(pop.prob(i)) / (K - 1));
  const double wsum = stable_sum(w);

  std::vector<double> raw(N);
  bool in_bounds = true;
  for (int i = 0; i < N; ++i) {
    raw[i] = (1.0 - (N - M) * w[i] / wsum) / M;
    if (raw[i] < 0.0 || raw[i] * M > 1.0) in_bounds = false;
  }

  if (in_bounds) return {CachingDist(normalized(std::move(raw))), false, {}};
  auto projected = project_feasible(std::move(raw), M);
  return {std::move(projected.q), true, std::move(projected.clamped_indices)};
}

ProjectionResult project_feasible(std::vector<double> q_raw, double cache_size) {
  const int n = static_cast<int>(q_raw.size());
  if (n < 1) throw ParameterError("q: must have at least one entry");
  for (double x : q_raw)
    if (!std::isfinite(x)) throw ParameterError("q: non-finite entry");
  if (std::abs(stable_sum(q_raw) - 1.0) > 1e-6)
    throw ParameterError("q: raw entries must sum to 1 within 1e-6");

  const double hi = cache_size > 0.0 ? 1.0 / cache_size : 1.0;
  if (n * hi < 1.0 - 1e-12)
    throw ParameterError("M: no feasible distribution, need M <= N");

  std::vector<char> at_lo(n, 0), at_hi(n, 0);
  std::vector<int> report;

  for (int round = 0; round <= 4 * n + 4; ++round) {
    for (int i = 0; i < n; ++i) {
      if (at_lo[i] || at_hi[i]) continue;
      if (q_raw[i] < kSnapTol) {
        if (q_raw[i] != 0.0) report.push_back(i);
        q_raw[i] = 0.0;
        at_lo[i] = 1;
      } else if (q_raw[i] > hi - kSnapTol) {
        if (q_raw[i] != hi) report.push_back(i);
        q_raw[i] = hi;
        at_hi[i] = 1;
      }
    }
    double fixed = 0.0, free_sum = 0.0;
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
      if (at_lo[i] || at_hi[i]) {
        fixed += q_raw[i];
      } else {
        free_sum += q_raw[i];
        ++free_count;
      }
    }
    const double target = 1.0 - fixed;
    if (free_count == 0) {
      // Everything pinned; spread the residual over the bound that has room.
      if (std::abs(target) <= 1e-13) break;
      if (target > 0.0) {
        const int cnt = static_cast<int>(std::count(at_lo.begin(), at_lo.end(), char(1)));
        if (cnt == 0) break;
        const double share = target / cnt;
        for (int i = 0; i < n; ++i)
          if (at_lo[i]) {
            at_lo[i] = 0;
            q_raw[i] = share;
          }
      } else {
        const int cnt = static_cast<int>(std::count(at_hi.begin(), at_hi.end(), char(1)));
        if (cnt == 0) break;
        const double share = -target / cnt;
        for (int i = 0; i < n; ++i)
          if (at_hi[i]) {
            at_hi[i] = 0;
            q_raw[i] = hi - share;
          }
      }
      continue;
    }
    if (free_sum > 0.0) {
      const double scale = target / free_sum;
      if (std::abs(scale - 1.0) < 8e-16) break;
      for (int i = 0; i < n; ++i)
        if (!at_lo[i] && !at_hi[i]) q_raw[i] *= scale;
    } else {
      for (int i = 0; i < n; ++i)
        if (!at_lo[i] && !at_hi[i]) q_raw[i] = target / free_count;
    }
    bool in_bounds = true;
    for (int i = 0; i < n; ++i)
      if (!at_lo[i] && !at_hi[i] && (q_raw[i] < 0.0 || q_raw[i] > hi)) in_bounds = false;
    if (in_bounds) break;
  }

  // Fold any leftover rounding drift into the entry with the most headroom.
  const double drift = stable_sum(q_raw) - 1.0;
  if (drift != 0.0) {
    int pick = -1;
    double room = -1.0;
    for (int i = 0; i < n; ++i) {
      const double h = drift > 0.0 ? q_raw[i] : hi - q_raw[i];
      if (h > room) {
        room = h;
        pick = i;
      }
    }
    q_raw[pick] -= drift;
  }

  std::sort(report.begin(), report.end());
  report.erase(std::unique(report.begin(), report.end()), report.end());
  return {CachingDist(std::move(q_raw)), std::move(report)};
}

CachingDist minimize_ub_numeric(const ProblemInstance& inst, const PopularityDist& pop,
                                int grid_resolution) {
  inst.validate();
  const int N = inst.num_contents;
  if (N > 6) throw CapacityError("N: grid search limited to N <= 6");
  if (grid_resolution < 2) throw ParameterError("grid: resolution must be >= 2");
  if (pop.size() != N) throw ParameterError("p: length must equal N");
  if (N == 1) return CachingDist({1.0});

  const double M = inst.cache_size;
  const double hi = M > 0.0 ? std::min(1.0, 1.0 / M) : 1.0;
  std::vector<double> q = inst.num_users >= 2 ? q_dagger(inst, pop).q.fractions()
                                              : uniform_caching(N).fractions();

  auto objective = [&](const std::vector<double>& cand) {
    return upper_bound_rate(inst, pop, CachingDist(cand), ZeroCachePolicy::kLimit);
  };
  double best = objective(q);

  const double step = 1.0 / grid_resolution;
  for (int pass = 0; pass < 512; ++pass) {
    double pass_best = best;
    std::vector<double> pass_q;
    for (int from = 0; from < N; ++from) {
      for (int to = 0; to < N; ++to) {
        if (from == to) continue;
        std::vector<double> cand = q;
        cand[from] -= step;
        cand[to] += step;
        if (cand[from] < 0.0 || cand[to] > hi) continue;
        if (!comonotone(pop, cand)) continue;
        const double r = objective(cand);
        if (r < pass_best - 1e-12) {
          pass_best = r;
          pass_q = std::move(cand);
        }
      }
    }
    if (pass_q.empty()) break;
    q = std::move(pass_q);
    best = pass_best;
  }
  return CachingDist(normalized(std::move(q)));
}

}  // namespace codedcache
