#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "codedcache/bitvec.hpp"
#include "codedcache/model.hpp"

namespace codedcache {

/// Integer per-content cache sizes: q_i*M*F rounded by largest remainder so
/// the per-user total equals round(M*F) exactly and no entry exceeds F.
std::vector<std::int64_t> cache_targets(const CachingDist& q, double cache_size,
                                        std::int64_t bits_per_content);

/// Placement-phase outcome: synthetic contents plus, for every (user, content)
/// pair, the mask of bit positions held in that user's cache.
struct PlacementState {
  int num_users = 0;
  int num_contents = 0;
  std::int64_t bits_per_content = 0;
  std::vector<BitVec> contents;             // [content]
  std::vector<std::vector<BitVec>> cached;  // [user][content]

  const BitVec& cache_mask(int user, int content) const { return cached[user][content]; }
};

/// Each user independently stores a uniformly random subset of exactly
/// cache_targets(q,M,F)[i] bits of every content i.
PlacementState place(const ProblemInstance& inst, const CachingDist& q, std::uint64_t seed);

/// Bits of one demanded content held by exactly the users in `holders`.
struct Subfile {
  int owner = 0;
  std::uint32_t holders = 0;              // user bitmask, may include the owner
  std::vector<std::uint32_t> positions;   // ascending bit positions
};

/// Per-user partition of the demanded content's bit positions by exact holder
/// set. Only nonempty classes are stored.
class SubfilePartition {
 public:
  const std::vector<Subfile>& of_user(int user) const { return per_user_[user]; }
  const Subfile* find(int user, std::uint32_t holders) const;
  std::int64_t size_of(int user, std::uint32_t holders) const;

  int num_users() const { return static_cast<int>(per_user_.size()); }

 private:
  friend SubfilePartition partition_subfiles(const PlacementState&, const RequestVector&);
  std::vector<std::vector<Subfile>> per_user_;
  std::vector<std::unordered_map<std::uint32_t, std::size_t>> index_;
};

SubfilePartition partition_subfiles(const PlacementState& pl, const RequestVector& d);

/// One multicast: XOR of the zero-padded subfiles needed by each user in
/// `subset` and held by all the others in it.
struct Transmission {
  std::uint32_t subset = 0;
  std::int64_t payload_bits = 0;
  BitVec payload;
};

struct DeliveryResult {
  std::vector<Transmission> transmissions;
  std::int64_t traffic_bits = 0;
};

/// Runs delivery over all user subsets, largest size first and lexicographic
/// within a size. Transmissions whose every constituent subfile is empty are
/// skipped. Guarded at K <= 24.
DeliveryResult deliver(const PlacementState& pl, const RequestVector& d);

/// True iff every user reconstructs all F bits of its demand exactly from its
/// cache plus the transmissions.
bool decode_and_verify(const PlacementState& pl, const RequestVector& d,
                       const std::vector<Transmission>& transmissions);

struct MonteCarloResult {
  double mean_rate = 0.0;
  double std_error = 0.0;
  std::vector<double> rates;               // per trial, units of F
  std::vector<std::int64_t> traffic_bits;  // per trial
};

/// Observer invoked once per trial (forces sequential execution).
using TrialObserver = std::function<void(std::int64_t trial, const PlacementState& pl,
                                         const RequestVector& d, const DeliveryResult& dr)>;

/// Mean and standard error of traffic/F over independent trials; demands are
/// redrawn i.i.d. from `pop` each trial. Trials run on up to thread_cap()
/// threads with per-trial derived seeds, so results do not depend on the
/// execution order.
MonteCarloResult monte_carlo_rate(const ProblemInstance& inst, const PopularityDist& pop,
                                  const CachingDist& q, std::int64_t trials, std::uint64_t seed,
                                  const TrialObserver& observer = {});

/// Same, with a fixed demand vector and fresh placement per trial.
MonteCarloResult monte_carlo_rate_fixed(const ProblemInstance& inst, const CachingDist& q,
                                        const RequestVector& d, std::int64_t trials,
                                        std::uint64_t seed, const TrialObserver& observer = {});

}  // namespace codedcache
