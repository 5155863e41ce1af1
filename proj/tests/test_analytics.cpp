#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "codedcache/analytics.hpp"
#include "codedcache/model.hpp"
#include "codedcache/numeric.hpp"
#include "codedcache/simulator.hpp"
#include "doctest.h"

using namespace codedcache;

namespace {

// Exhaustive oracle over all N^K request vectors: joint histogram of the
// least requested (ascending) index and the distinct-content count.
struct EnumeratedEvents {
  std::vector<double> prob_a;
  std::vector<double> prob_b;
};

EnumeratedEvents enumerate_events(const std::vector<double>& p_ascending, int K) {
  const int n = static_cast<int>(p_ascending.size());
  EnumeratedEvents ev;
  ev.prob_a.assign(n, 0.0);
  ev.prob_b.assign(n, 0.0);
  std::vector<int> d(K, 0);
  while (true) {
    double prob = 1.0;
    for (int v : d) prob *= p_ascending[v];
    const int lowest = *std::min_element(d.begin(), d.end());
    std::vector<int> sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const int distinct =
        static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    ev.prob_a[lowest] += prob;
    ev.prob_b[distinct - 1] += prob;
    int j = K - 1;
    while (j >= 0 && d[j] == n - 1) d[j--] = 0;
    if (j < 0) break;
    ++d[j];
  }
  return ev;
}

std::vector<double> random_simplex(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) s += (x = u(gen));
  for (auto& x : w) x /= s;
  return w;
}

// Random feasible caching distribution, optionally co-sorted with p ascending.
CachingDist random_feasible_q(std::mt19937_64& gen, int n, double M, bool sorted) {
  auto w = random_simplex(gen, n);
  if (sorted) std::sort(w.begin(), w.end());
  if (M > 1.0) {
    // Push surplus above 1/M down onto the smaller entries, keeping order.
    const double hi = 1.0 / M;
    for (int pass = 0; pass < n + 2; ++pass) {
      double excess = 0.0;
      int below = 0;
      for (double x : w) {
        if (x > hi) excess += x - hi;
        else ++below;
      }
      if (excess == 0.0 || below == 0) break;
      for (auto& x : w) {
        if (x > hi) x = hi;
        else x += excess / below;
      }
    }
    const double s = stable_sum(w);
    for (auto& x : w) x /= s;
    for (auto& x : w) x = std::min(x, hi);
  }
  return CachingDist(w);
}

}  // namespace

TEST_CASE("rate_exact frozen examples") {
  const ProblemInstance inst{2, 2, 1.0, 1};
  CHECK(rate_exact(inst, CachingDist({0.5, 0.5}), {0, 1}) ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rate_exact(inst, CachingDist({0.75, 0.25}), {0, 1}) ==
        doctest::Approx(0.8125).epsilon(1e-12));
  CHECK(rate_exact(inst, CachingDist({0.75, 0.25}), {0, 0}) ==
        doctest::Approx(0.3125).epsilon(1e-12));

  // M = 0: only the K singleton subsets survive, each contributing 1.
  for (int k : {1, 3, 7}) {
    const ProblemInstance zero{3, k, 0.0, 1};
    RequestVector d(k, 1);
    CHECK(rate_exact(zero, uniform_caching(3), d) == doctest::Approx(k).epsilon(1e-12));
    CHECK(rate_exact_bruteforce(zero, uniform_caching(3), d) ==
          doctest::Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("rate_exact matches the brute-force oracle") {
  std::mt19937_64 gen(2024);
  for (int round = 0; round < 1000; ++round) {
    const int n = 2 + static_cast<int>(gen() % 4);   // N <= 5
    const int k = 1 + static_cast<int>(gen() % 10);  // K <= 10
    const double M = (gen() % 2 == 0) ? 1.0 : 0.5 + 0.5 * (gen() % 3);
    const ProblemInstance inst{n, k, std::min<double>(M, n), 1};
    const auto q = random_feasible_q(gen, n, inst.cache_size, false);
    RequestVector d(k);
    for (auto& v : d) v = static_cast<int>(gen() % n);
    const double fast = rate_exact(inst, q, d);
    const double brute = rate_exact_bruteforce(inst, q, d);
    REQUIRE(fast == doctest::Approx(brute).epsilon(0).scale(1).margin(1e-10));
  }
}

TEST_CASE("rate_exact is exactly permutation invariant") {
  std::mt19937_64 gen(11);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + static_cast<int>(gen() % 3);
    const int k = 2 + static_cast<int>(gen() % 7);
    const ProblemInstance inst{n, k, 1.0, 1};
    const auto q = random_feasible_q(gen, n, 1.0, false);
    RequestVector d(k);
    for (auto& v : d) v = static_cast<int>(gen() % n);
    RequestVector pd = d;
    std::shuffle(pd.begin(), pd.end(), gen);
    CHECK(rate_exact(inst, q, d) == rate_exact(inst, q, pd));  // bitwise equal
  }
}

TEST_CASE("rate_exact brute-force guard") {
  const ProblemInstance inst{2, 21, 1.0, 1};
  RequestVector d(21, 0);
  CHECK_THROWS_AS(rate_exact_bruteforce(inst, uniform_caching(2), d), CapacityError);
}

TEST_CASE("uniform caching reduces to the closed form") {
  for (int n : {2, 4, 8}) {
    for (double M : {1.0, n / 2.0}) {
      for (int k = 1; k <= n; ++k) {
        const ProblemInstance inst{n, k, M, 1};
        RequestVector d(k);
        for (int j = 0; j < k; ++j) d[j] = j;  // all distinct
        const double x = M / n;
        const double closed = ((1.0 - x) * n / M) * (1.0 - std::pow(1.0 - x, k));
        CHECK(rate_exact(inst, uniform_caching(n), d) ==
              doctest::Approx(closed).epsilon(0).scale(1).margin(1e-9));
      }
    }
  }
}

TEST_CASE("expected_rate_exact frozen examples") {
  const ProblemInstance inst{2, 2, 1.0, 1};
  CHECK(expected_rate_exact(inst, uniform_popularity(2), uniform_caching(2)) ==
        doctest::Approx(0.75).epsilon(1e-12));

  // N = 1: the single profile is the all-ones demand.
  const ProblemInstance one{1, 4, 0.5, 1};
  const auto q1 = CachingDist({1.0});
  CHECK(expected_rate_exact(one, uniform_popularity(1), q1) ==
        doctest::Approx(rate_exact(one, q1, {0, 0, 0, 0})).epsilon(1e-12));

  const ProblemInstance huge{50, 50, 1.0, 1};
  CHECK_THROWS_AS(expected_rate_exact(huge, uniform_popularity(50), uniform_caching(50)),
                  CapacityError);
}

TEST_CASE("expected_rate_exact equals full enumeration on small instances") {
  std::mt19937_64 gen(5);
  for (int round = 0; round < 20; ++round) {
    const int n = 2 + static_cast<int>(gen() % 2);
    const int k = 2 + static_cast<int>(gen() % 3);
    const ProblemInstance inst{n, k, 1.0, 1};
    const auto p = PopularityDist(random_simplex(gen, n));
    const auto q = random_feasible_q(gen, n, 1.0, false);
    // direct N^K enumeration oracle
    std::vector<int> d(k, 0);
    double expect = 0.0;
    while (true) {
      double prob = 1.0;
      for (int v : d) prob *= p.prob(v);
      expect += prob * rate_exact_bruteforce(inst, q, d);
      int j = k - 1;
      while (j >= 0 && d[j] == n - 1) d[j--] = 0;
      if (j < 0) break;
      ++d[j];
    }
    CHECK(expected_rate_exact(inst, p, q) ==
          doctest::Approx(expect).epsilon(0).scale(1).margin(1e-10));
  }
}

TEST_CASE("expected_rate_exact agrees with the simulator") {
  const ProblemInstance inst{3, 3, 1.0, 20000};
  const auto p = zipf(3, 1.0);
  const auto q = CachingDist({0.5, 0.3, 0.2});
  const double exact = expected_rate_exact(inst, p, q);
  const auto mc = monte_carlo_rate(inst, p, q, 60, 424242);
  CHECK(std::abs(mc.mean_rate - exact) <= 3.0 * mc.std_error + 1e-3);
}

TEST_CASE("prob_A frozen examples") {
  const auto a1 = prob_A({0.5, 0.5}, 2);
  CHECK(a1[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(a1[1] == doctest::Approx(0.25).epsilon(1e-12));

  const auto a2 = prob_A({0.25, 0.75}, 2);
  CHECK(a2[0] == doctest::Approx(0.4375).epsilon(1e-12));
  CHECK(a2[1] == doctest::Approx(0.5625).epsilon(1e-12));

  CHECK(prob_A({1.0}, 5) == std::vector<double>{1.0});
  CHECK_THROWS_AS(prob_A({0.75, 0.25}, 2), ParameterError);  // not ascending
}

TEST_CASE("prob_A and prob_B match exhaustive enumeration") {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 6; ++k) {
      for (bool uniform : {true, false}) {
        const auto pop = uniform ? uniform_popularity(n) : zipf(n, 1.0);
        const auto asc = pop.ascending_probs();
        const auto ev = enumerate_events(asc, k);
        const auto pa = prob_A(asc, k);
        const auto pb = prob_B_exact(pop, k);
        REQUIRE(pa.size() == ev.prob_a.size());
        for (int i = 0; i < n; ++i) {
          CHECK(pa[i] == doctest::Approx(ev.prob_a[i]).epsilon(0).scale(1).margin(1e-12));
          CHECK(pb.prob[i] == doctest::Approx(ev.prob_b[i]).epsilon(0).scale(1).margin(1e-12));
        }
        CHECK(stable_sum(pa) == doctest::Approx(1.0).epsilon(0).scale(1).margin(1e-9));
        CHECK(stable_sum(pb.prob) == doctest::Approx(1.0).epsilon(0).scale(1).margin(1e-9));
      }
    }
  }
}

TEST_CASE("prob_B frozen examples and the indicator identity") {
  const auto pb = prob_B_exact(PopularityDist({0.5, 0.5}), 2);
  CHECK(pb.prob[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pb.prob[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto one_user = prob_B_exact(uniform_popularity(3), 1);
  CHECK(one_user.prob == std::vector<double>{1.0, 0.0, 0.0});

  // sum_i i*P(B_i) = N - sum_i (1-p_i)^K
  for (double v : {0.0, 1.0, 2.0}) {
    for (int k : {1, 3, 8}) {
      const auto pop = zipf(6, v);
      const auto dist = prob_B_exact(pop, k);
      double mean = 0.0;
      for (int i = 0; i < 6; ++i) mean += (i + 1) * dist.prob[i];
      CHECK(mean == doctest::Approx(expected_distinct(pop, k)).epsilon(0).scale(1).margin(1e-9));
    }
  }

  CHECK_THROWS_AS(prob_B_exact(uniform_popularity(21), 2), CapacityError);
}

TEST_CASE("prob_B monte carlo tracks the exact distribution") {
  const auto pop = zipf(5, 1.0);
  const auto exact = prob_B_exact(pop, 4);
  const auto mc = prob_B_monte_carlo(pop, 4, 200000, 99);
  const auto mc2 = prob_B_monte_carlo(pop, 4, 200000, 99);
  CHECK(mc.prob == mc2.prob);  // deterministic
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(mc.prob[i] - exact.prob[i]) <= 5.0 * mc.std_error[i] + 1e-4);
}

TEST_CASE("expected_distinct") {
  CHECK(expected_distinct(PopularityDist({0.5, 0.5}), 2) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(expected_distinct(zipf(7, 1.3), 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expected_distinct(uniform_popularity(3), 4000) == doctest::Approx(3.0).epsilon(1e-9));
  // monotone nondecreasing in K
  double prev = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double cur = expected_distinct(zipf(4, 0.8), k);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
}

TEST_CASE("upper_bound_rate frozen examples") {
  const ProblemInstance inst{2, 2, 1.0, 1};
  const double ub = upper_bound_rate(inst, uniform_popularity(2), uniform_caching(2));
  CHECK(ub == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(ub == doctest::Approx(expected_rate_exact(inst, uniform_popularity(2),
                                                  uniform_caching(2)))
                  .epsilon(0)
                  .scale(1)
                  .margin(1e-9));

  const ProblemInstance one{1, 3, 1.0, 1};
  CHECK(upper_bound_rate(one, uniform_popularity(1), CachingDist({1.0})) ==
        doctest::Approx(0.0).epsilon(0).scale(1).margin(1e-12));

  const ProblemInstance zero{3, 4, 0.0, 1};
  CHECK(upper_bound_rate(zero, zipf(3, 1.0), uniform_caching(3)) ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("upper_bound_rate error paths") {
  const ProblemInstance inst{2, 2, 1.0, 1};
  // q decreasing while p increasing: hypothesis violation
  CHECK_THROWS_AS(
      upper_bound_rate(inst, PopularityDist({0.25, 0.75}), CachingDist({0.75, 0.25})),
      HypothesisError);
  // zero cache share on a content with positive request mass
  CHECK_THROWS_AS(upper_bound_rate(inst, PopularityDist({0.25, 0.75}), CachingDist({0.0, 1.0})),
                  DegeneracyError);
  CHECK(upper_bound_rate(inst, PopularityDist({0.25, 0.75}), CachingDist({0.0, 1.0}),
                         ZeroCachePolicy::kLimit) > 0.0);
  // ties in p may be reordered to satisfy the hypothesis
  CHECK_NOTHROW(upper_bound_rate(inst, PopularityDist({0.5, 0.5}), CachingDist({0.7, 0.3})));
}

TEST_CASE("per_case_identity_check") {
  const auto id1 = per_case_identity_check(0.5, 2);
  CHECK(id1.sum_form == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(id1.closed_form == doctest::Approx(0.75).epsilon(1e-12));

  const auto id2 = per_case_identity_check(1.0, 7);
  CHECK(id2.sum_form == doctest::Approx(0.0).epsilon(0).scale(1).margin(1e-12));
  CHECK(id2.closed_form == doctest::Approx(0.0).epsilon(0).scale(1).margin(1e-12));

  for (int g = 1; g <= 10; ++g) {
    for (int k = 1; k <= 16; ++k) {
      const auto id = per_case_identity_check(0.1 * g, k);
      CHECK(id.sum_form == doctest::Approx(id.closed_form).epsilon(0).scale(1).margin(1e-10));
    }
  }
}

TEST_CASE("lower_bound_rate frozen examples") {
  const ProblemInstance inst{2, 2, 1.0, 1};
  const auto pop = uniform_popularity(2);
  const auto pb = prob_B_exact(pop, 2);
  CHECK(lower_bound_rate(inst, pop, pb.prob) == doctest::Approx(0.25).epsilon(1e-12));

  const ProblemInstance full{3, 4, 3.0, 1};
  const auto pb3 = prob_B_exact(uniform_popularity(3), 4);
  CHECK(lower_bound_rate(full, uniform_popularity(3), pb3.prob) == 0.0);

  const ProblemInstance zero{2, 2, 0.0, 1};
  CHECK(lower_bound_rate(zero, pop, pb.prob) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("bound sandwich on random co-monotone instances") {
  std::mt19937_64 gen(17);
  for (int n = 2; n <= 4; ++n) {
    for (int k = 1; k <= 5; ++k) {
      for (double M : {0.5, 1.0, 2.0}) {
        if (M > n) continue;
        for (int round = 0; round < 6; ++round) {
          auto pw = random_simplex(gen, n);
          std::sort(pw.begin(), pw.end());
          const auto pop = PopularityDist(pw);
          const auto q = random_feasible_q(gen, n, M, true);
          const ProblemInstance inst{n, k, M, 1};
          const double mean = expected_rate_exact(inst, pop, q);
          const double ub = upper_bound_rate(inst, pop, q, ZeroCachePolicy::kLimit);
          const auto pb = prob_B_exact(pop, k);
          const double lb = lower_bound_rate(inst, pop, pb.prob);
          CHECK(lb <= mean + 1e-9);
          CHECK(mean <= ub + 1e-9);
        }
      }
    }
  }
}
