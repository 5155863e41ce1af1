#include "codedcache/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "codedcache/numeric.hpp"
#include "codedcache/rng.hpp"

namespace codedcache {

std::vector<std::int64_t> cache_targets(const CachingDist& q, double cache_size,
                                        std::int64_t bits_per_content) {
  q.validate_feasible(cache_size);
  const int n = q.size();
  const double fbits = static_cast<double>(bits_per_content);
  const std::int64_t budget = std::llround(cache_size * fbits);

  std::vector<std::int64_t> sizes(n);
  std::vector<std::pair<double, int>> remainders(n);
  std::int64_t assigned = 0;
  for (int i = 0; i < n; ++i) {
    const double target = std::min(1.0, q.fraction(i) * cache_size) * fbits;
    sizes[i] = static_cast<std::int64_t>(std::floor(target));
    if (sizes[i] > bits_per_content) sizes[i] = bits_per_content;
    remainders[i] = {target - static_cast<double>(sizes[i]), i};
    assigned += sizes[i];
  }
  // Largest remainder tops up until the per-user total hits round(M*F).
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::int64_t deficit = budget - assigned;
  for (const auto& [rem, i] : remainders) {
    if (deficit <= 0) break;
    if (sizes[i] < bits_per_content) {
      ++sizes[i];
      --deficit;
    }
  }
  return sizes;
}

PlacementState place(const ProblemInstance& inst, const CachingDist& q, std::uint64_t seed) {
  inst.validate();
  if (q.size() != inst.num_contents) throw ParameterError("q: length must equal N");
  const int N = inst.num_contents;
  const int K = inst.num_users;
  const std::int64_t F = inst.bits_per_content;
  const auto targets = cache_targets(q, inst.cache_size, F);

  PlacementState pl;
  pl.num_users = K;
  pl.num_contents = N;
  pl.bits_per_content = F;

  pl.contents.reserve(N);
  const std::uint64_t content_seed = substream(seed, kSaltContents);
  for (int i = 0; i < N; ++i) {
    Rng rng(substream(content_seed, i));
    pl.contents.push_back(BitVec::random(F, rng));
  }

  pl.cached.assign(K, std::vector<BitVec>());
  const std::uint64_t cache_seed = substream(seed, kSaltCache);
  std::vector<std::uint32_t> scratch(F);
  for (int k = 0; k < K; ++k) {
    pl.cached[k].reserve(N);
    const std::uint64_t user_seed = substream(cache_seed, k);
    for (int i = 0; i < N; ++i) {
      BitVec mask(F);
      const std::int64_t c = targets[i];
      if (c >= F) {
        mask.set_all();
      } else if (c > 0) {
        // Partial Fisher-Yates: the first c entries are a uniform c-subset.
        Rng rng(substream(user_seed, i));
        std::iota(scratch.begin(), scratch.end(), 0u);
        for (std::int64_t j = 0; j < c; ++j) {
          const std::int64_t r = j + static_cast<std::int64_t>(rng.below(F - j));
          std::swap(scratch[j], scratch[r]);
          mask.set(scratch[j]);
        }
      }
      pl.cached[k].push_back(std::move(mask));
    }
  }
  return pl;
}

const Subfile* SubfilePartition::find(int user, std::uint32_t holders) const {
  const auto& idx = index_[user];
  auto it = idx.find(holders);
  if (it == idx.end()) return nullptr;
  return &per_user_[user][it->second];
}

std::int64_t SubfilePartition::size_of(int user, std::uint32_t holders) const {
  const Subfile* sf = find(user, holders);
  return sf ? static_cast<std::int64_t>(sf->positions.size()) : 0;
}

SubfilePartition partition_subfiles(const PlacementState& pl, const RequestVector& d) {
  const int K = pl.num_users;
  const std::int64_t F = pl.bits_per_content;
  validate_requests(d, pl.num_contents, K);
  if (K > 32) throw CapacityError("K: holder masks limited to 32 users");

  SubfilePartition part;
  part.per_user_.resize(K);
  part.index_.resize(K);
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> classes;
  for (int k = 0; k < K; ++k) {
    classes.clear();
    const int content = d[k];
    for (std::int64_t b = 0; b < F; ++b) {
      std::uint32_t holders = 0;
      for (int u = 0; u < K; ++u)
        if (pl.cached[u][content].test(b)) holders |= (1u << u);
      classes[holders].push_back(static_cast<std::uint32_t>(b));
    }
    auto& list = part.per_user_[k];
    list.reserve(classes.size());
    for (auto& [holders, positions] : classes)
      list.push_back(Subfile{k, holders, std::move(positions)});
    std::sort(list.begin(), list.end(),
              [](const Subfile& a, const Subfile& b) { return a.holders < b.holders; });
    for (std::size_t s = 0; s < list.size(); ++s) part.index_[k][list[s].holders] = s;
  }
  return part;
}

namespace {

BitVec gather_bits(const BitVec& content, const std::vector<std::uint32_t>& positions) {
  BitVec out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (content.test(positions[i])) out.set(i);
  return out;
}

/// Calls fn for every size-s subset of [0, K), lexicographic on member lists.
template <typename Fn>
void for_each_subset_of_size(int K, int s, Fn&& fn) {
  std::vector<int> members(s);
  std::iota(members.begin(), members.end(), 0);
  while (true) {
    std::uint32_t mask = 0;
    for (int m : members) mask |= (1u << m);
    fn(mask);
    int j = s - 1;
    while (j >= 0 && members[j] == K - s + j) --j;
    if (j < 0) break;
    ++members[j];
    for (int t = j + 1; t < s; ++t) members[t] = members[t - 1] + 1;
  }
}

}  // namespace

DeliveryResult deliver(const PlacementState& pl, const RequestVector& d) {
  const int K = pl.num_users;
  if (K > 24) throw CapacityError("K: delivery enumerates 2^K subsets, K <= 24 required");
  const auto part = partition_subfiles(pl, d);

  DeliveryResult result;
  for (int s = K; s >= 1; --s) {
    for_each_subset_of_size(K, s, [&](std::uint32_t subset) {
      std::int64_t longest = 0;
      for (std::uint32_t rest = subset; rest != 0; rest &= rest - 1) {
        const int k = std::countr_zero(rest);
        longest = std::max(longest, part.size_of(k, subset & ~(1u << k)));
      }
      if (longest == 0) return;
      Transmission tx;
      tx.subset = subset;
      tx.payload_bits = longest;
      tx.payload = BitVec(static_cast<std::size_t>(longest));
      for (std::uint32_t rest = subset; rest != 0; rest &= rest - 1) {
        const int k = std::countr_zero(rest);
        const Subfile* sf = part.find(k, subset & ~(1u << k));
        if (sf) tx.payload.xor_padded(gather_bits(pl.contents[d[k]], sf->positions));
      }
      result.traffic_bits += longest;
      result.transmissions.push_back(std::move(tx));
    });
  }
  return result;
}

bool decode_and_verify(const PlacementState& pl, const RequestVector& d,
                       const std::vector<Transmission>& transmissions) {
  const int K = pl.num_users;
  const std::int64_t F = pl.bits_per_content;
  const auto part = partition_subfiles(pl, d);

  for (int k = 0; k < K; ++k) {
    // Start from the cached bits of the demanded content.
    BitVec rec = pl.contents[d[k]];
    rec.and_with(pl.cache_mask(k, d[k]));

    for (const auto& tx : transmissions) {
      if (!(tx.subset & (1u << k))) continue;
      const Subfile* own = part.find(k, tx.subset & ~(1u << k));
      if (!own) continue;
      // Cancel the other users' subfiles; all of them are in k's cache.
      BitVec acc = tx.payload;
      for (std::uint32_t rest = tx.subset & ~(1u << k); rest != 0; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        const Subfile* sfj = part.find(j, tx.subset & ~(1u << j));
        if (sfj) acc.xor_padded(gather_bits(pl.contents[d[j]], sfj->positions));
      }
      for (std::size_t idx = 0; idx < own->positions.size(); ++idx)
        if (acc.test(idx)) rec.set(own->positions[idx]);
    }

    if (!(rec == pl.contents[d[k]])) return false;
  }
  (void)F;
  return true;
}

namespace {

MonteCarloResult run_trials(const ProblemInstance& inst, const CachingDist& q,
                            const PopularityDist* pop, const RequestVector* fixed,
                            std::int64_t trials, std::uint64_t seed,
                            const TrialObserver& observer) {
  inst.validate();
  if (trials < 1) throw ParameterError("trials: need at least one trial");
  if (fixed) validate_requests(*fixed, inst.num_contents, inst.num_users);

  MonteCarloResult result;
  result.rates.resize(trials);
  result.traffic_bits.resize(trials);
  const std::uint64_t trial_root = substream(seed, kSaltTrial);
  const double fbits = static_cast<double>(inst.bits_per_content);

  auto run_one = [&](std::int64_t t) {
    const std::uint64_t trial_seed = substream(trial_root, static_cast<std::uint64_t>(t));
    const RequestVector d = fixed
        ? *fixed
        : sample_requests(*pop, inst.num_users, substream(trial_seed, kSaltDemands));
    const PlacementState pl = place(inst, q, substream(trial_seed, kSaltCache));
    const DeliveryResult dr = deliver(pl, d);
    result.traffic_bits[t] = dr.traffic_bits;
    result.rates[t] = static_cast<double>(dr.traffic_bits) / fbits;
    if (observer) observer(t, pl, d, dr);
  };

  const int workers = observer ? 1 : std::min<std::int64_t>(thread_cap(), trials);
  if (workers <= 1) {
    for (std::int64_t t = 0; t < trials; ++t) run_one(t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::int64_t t = w; t < trials; t += workers) run_one(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Aggregate in trial order: independent of the thread schedule.
  const double mean = stable_sum(result.rates) / static_cast<double>(trials);
  result.mean_rate = mean;
  if (trials > 1) {
    double ss = 0.0;
    for (double r : result.rates) ss += (r - mean) * (r - mean);
    result.std_error = std::sqrt(ss / (static_cast<double>(trials) * (trials - 1.0)));
  }
  return result;
}

}  // namespace

MonteCarloResult monte_carlo_rate(const ProblemInstance& inst, const PopularityDist& pop,
                                  const CachingDist& q, std::int64_t trials, std::uint64_t seed,
                                  const TrialObserver& observer) {
  if (pop.size() != inst.num_contents) throw ParameterError("p: length must equal N");
  return run_trials(inst, q, &pop, nullptr, trials, seed, observer);
}

MonteCarloResult monte_carlo_rate_fixed(const ProblemInstance& inst, const CachingDist& q,
                                        const RequestVector& d, std::int64_t trials,
                                        std::uint64_t seed, const TrialObserver& observer) {
  return run_trials(inst, q, nullptr, &d, trials, seed, observer);
}

}  // namespace codedcache
