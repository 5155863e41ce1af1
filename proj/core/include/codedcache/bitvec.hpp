#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "codedcache/rng.hpp"

namespace codedcache {

/// Fixed-length packed bit vector. Bits past size() are kept zero so that
/// word-wise operations and equality stay well defined.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitVec random(std::size_t nbits, Rng& rng) {
    BitVec v(nbits);
    for (auto& w : v.words_) w = rng.u64();
    v.mask_tail();
    return v;
  }

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  void set_all() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    mask_tail();
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// XOR `other` into this vector; `other` may be shorter (zero padding at the tail).
  void xor_padded(const BitVec& other) {
    for (std::size_t i = 0; i < other.words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  /// Bitwise AND with an equal-length vector.
  void and_with(const BitVec& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  }

  bool operator==(const BitVec&) const = default;

 private:
  void mask_tail() {
    const std::size_t rem = nbits_ & 63;
    if (rem != 0 && !words_.empty()) words_.back() &= (~std::uint64_t{0}) >> (64 - rem);
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace codedcache
