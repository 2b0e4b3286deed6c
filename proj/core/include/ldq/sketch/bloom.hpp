#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ldq::sketch {

/// Standard Bloom filter with Kirsch-Mitzenmacher double hashing. No false
/// negatives; expected false-positive rate (1 - e^{-h n / m})^h.
class BloomFilter {
 public:
  BloomFilter(std::size_t bits, std::size_t hashes);

  /// Sized with the textbook optimum m = -n ln p / (ln 2)^2, h = (m / n) ln 2.
  static BloomFilter for_capacity(std::size_t expected_items, double false_positive_rate);

  void insert(std::string_view key);
  bool contains(std::string_view key) const;

  /// Inserts and reports whether the key was (probably) new.
  bool insert_if_absent(std::string_view key);

  std::size_t bit_count() const noexcept { return bits_; }
  std::size_t hash_count() const noexcept { return hashes_; }
  /// Keys that set at least one new bit, i.e. distinct as far as the filter can tell.
  std::size_t inserted() const noexcept { return inserted_; }

  double expected_false_positive_rate() const;

 private:
  std::size_t bits_;
  std::size_t hashes_;
  std::size_t inserted_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ldq::sketch
