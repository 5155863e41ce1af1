#include "codedcache/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "codedcache/numeric.hpp"
#include "codedcache/rng.hpp"

namespace codedcache {

namespace {

constexpr double kSumTol = 1e-12;

void check_distribution(const std::vector<double>& w, const char* field, bool strictly_positive) {
  if (w.empty()) throw ParameterError(std::string(field) + ": must have at least one entry");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) throw ParameterError(std::string(field) + ": non-finite entry");
    if (strictly_positive ? w[i] <= 0.0 : w[i] < 0.0)
      throw ParameterError(std::string(field) + ": entry " + std::to_string(i) +
                           (strictly_positive ? " must be > 0" : " must be >= 0"));
  }
  const double s = stable_sum(w);
  if (std::abs(s - 1.0) > kSumTol)
    throw ParameterError(std::string(field) + ": entries must sum to 1 (got " + std::to_string(s) + ")");
}

}  // namespace

void ProblemInstance::validate() const {
  if (num_contents < 1) throw ParameterError("N: need at least one content");
  if (num_users < 1) throw ParameterError("K: need at least one user");
  if (!std::isfinite(cache_size) || cache_size < 0.0 || cache_size > num_contents)
    throw ParameterError("M: cache size must lie in [0, N]");
  if (bits_per_content < 1) throw ParameterError("F: need at least one bit per content");
}

PopularityDist::PopularityDist(std::vector<double> probs) : p_(std::move(probs)) {
  check_distribution(p_, "p", /*strictly_positive=*/true);
  asc_.resize(p_.size());
  std::iota(asc_.begin(), asc_.end(), 0);
  std::stable_sort(asc_.begin(), asc_.end(), [&](int a, int b) { return p_[a] < p_[b]; });
}

std::vector<double> PopularityDist::ascending_probs() const {
  std::vector<double> out(p_.size());
  for (std::size_t i = 0; i < p_.size(); ++i) out[i] = p_[asc_[i]];
  return out;
}

CachingDist::CachingDist(std::vector<double> fractions) : q_(std::move(fractions)) {
  check_distribution(q_, "q", /*strictly_positive=*/false);
}

void CachingDist::validate_feasible(double cache_size) const {
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (q_[i] * cache_size > 1.0 + 1e-12)
      throw FeasibilityError("q: entry " + std::to_string(i) + " has q*M = " +
                             std::to_string(q_[i] * cache_size) + " > 1");
  }
}

std::int64_t RequestProfile::total() const {
  std::int64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

void validate_requests(const RequestVector& d, int num_contents, int num_users) {
  if (static_cast<int>(d.size()) != num_users)
    throw ParameterError("d: expected one demand per user (" + std::to_string(num_users) + ")");
  for (int v : d)
    if (v < 0 || v >= num_contents) throw ParameterError("d: content index out of range");
}

PopularityDist zipf(int num_contents, double exponent) {
  if (num_contents < 1) throw ParameterError("N: need at least one content");
  if (!std::isfinite(exponent) || exponent < 0.0)
    throw ParameterError("zipf-v: exponent must be finite and >= 0");
  std::vector<double> p(num_contents);
  for (int i = 0; i < num_contents; ++i) p[i] = std::pow(static_cast<double>(i + 1), -exponent);
  const double s = stable_sum(p);
  for (auto& x : p) x /= s;
  return PopularityDist(std::move(p));
}

PopularityDist uniform_popularity(int num_contents) {
  if (num_contents < 1) throw ParameterError("N: need at least one content");
  return PopularityDist(std::vector<double>(num_contents, 1.0 / num_contents));
}

CachingDist uniform_caching(int num_contents) {
  if (num_contents < 1) throw ParameterError("N: need at least one content");
  return CachingDist(std::vector<double>(num_contents, 1.0 / num_contents));
}

RequestVector sample_requests(const PopularityDist& pop, int num_users, std::uint64_t seed) {
  if (num_users < 1) throw ParameterError("K: need at least one user");
  Rng rng(seed);
  CdfSampler sampler(pop.probs());
  RequestVector d(num_users);
  for (auto& v : d) v = sampler.draw(rng);
  return d;
}

RequestProfile profile_of(const RequestVector& d, int num_contents) {
  RequestProfile profile;
  profile.counts.assign(num_contents, 0);
  for (int v : d) {
    if (v < 0 || v >= num_contents) throw ParameterError("d: content index out of range");
    ++profile.counts[v];
  }
  return profile;
}

RequestVector representative_requests(const RequestProfile& profile) {
  RequestVector d;
  d.reserve(static_cast<std::size_t>(profile.total()));
  for (std::size_t i = 0; i < profile.counts.size(); ++i)
    for (std::int64_t r = 0; r < profile.counts[i]; ++r) d.push_back(static_cast<int>(i));
  return d;
}

}  // namespace codedcache
