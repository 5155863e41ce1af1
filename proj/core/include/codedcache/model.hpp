#pragma once

#include <cstdint>
#include <vector>

#include "codedcache/errors.hpp"

namespace codedcache {

/// System parameters: N contents, K users, per-user cache budget M measured
/// in whole contents, F bits per content.
struct ProblemInstance {
  int num_contents = 1;               // N >= 1
  int num_users = 1;                  // K >= 1
  double cache_size = 0.0;            // M, real in [0, N]
  std::int64_t bits_per_content = 1;  // F >= 1

  void validate() const;  // throws ParameterError naming the bad field
};

/// Request probabilities p_1..p_N in storage order, plus the permutation that
/// sorts them ascending (the canonical order used by the traffic bounds).
class PopularityDist {
 public:
  explicit PopularityDist(std::vector<double> probs);

  int size() const { return static_cast<int>(p_.size()); }
  double prob(int i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

  /// Storage-order indices such that prob(order[0]) <= prob(order[1]) <= ...
  const std::vector<int>& ascending_order() const { return asc_; }
  std::vector<double> ascending_probs() const;

 private:
  std::vector<double> p_;
  std::vector<int> asc_;
};

/// Cache placement fractions q_1..q_N: content i gets a q_i share of the
/// cache budget, so each of its bits is stored with probability q_i * M.
class CachingDist {
 public:
  explicit CachingDist(std::vector<double> fractions);

  int size() const { return static_cast<int>(q_.size()); }
  double fraction(int i) const { return q_[i]; }
  const std::vector<double>& fractions() const { return q_; }

  /// Throws FeasibilityError naming the first index with q_i * M > 1.
  void validate_feasible(double cache_size) const;

 private:
  std::vector<double> q_;
};

/// One 0-based content index per user.
using RequestVector = std::vector<int>;

/// Multiplicity counts: counts[i] = number of users demanding content i.
struct RequestProfile {
  std::vector<std::int64_t> counts;
  std::int64_t total() const;
};

/// Checks length and index range of a request vector.
void validate_requests(const RequestVector& d, int num_contents, int num_users);

/// Zipf popularity p_i proportional to (i+1)^-exponent, stored most popular first.
PopularityDist zipf(int num_contents, double exponent);

PopularityDist uniform_popularity(int num_contents);
CachingDist uniform_caching(int num_contents);

/// K i.i.d. demands. Bitwise reproducible for equal (pop, num_users, seed).
RequestVector sample_requests(const PopularityDist& pop, int num_users, std::uint64_t seed);

RequestProfile profile_of(const RequestVector& d, int num_contents);

/// Canonical request vector realizing a profile: content i repeated counts[i] times.
RequestVector representative_requests(const RequestProfile& profile);

}  // namespace codedcache
