#include "ldq/sketch/bloom.hpp"

#include <algorithm>
#include <cmath>

#include "ldq/rdf.hpp"

namespace ldq::sketch {

BloomFilter::BloomFilter(std::size_t bits, std::size_t hashes)
    : bits_(bits == 0 ? 64 : bits), hashes_(hashes == 0 ? 1 : hashes), words_((bits_ + 63) / 64) {}

BloomFilter BloomFilter::for_capacity(std::size_t expected_items, double false_positive_rate) {
  const double n = static_cast<double>(std::max<std::size_t>(1, expected_items));
  const double p = std::clamp(false_positive_rate, 1e-12, 0.5);
  const double ln2 = std::log(2.0);
  const auto m = static_cast<std::size_t>(std::ceil(-n * std::log(p) / (ln2 * ln2)));
  const auto h = static_cast<std::size_t>(std::max(1.0, std::round(m / n * ln2)));
  return BloomFilter(m, h);
}

void BloomFilter::insert(std::string_view key) { insert_if_absent(key); }

bool BloomFilter::insert_if_absent(std::string_view key) {
  const auto h1 = stable_hash(key);
  const auto h2 = stable_hash(key, 0x9e3779b97f4a7c15ULL) | 1;
  bool fresh = false;
  for (std::size_t i = 0; i < hashes_; ++i) {
    const auto bit = (h1 + i * h2) % bits_;
    auto& word = words_[bit / 64];
    const auto mask = std::uint64_t{1} << (bit % 64);
    if (!(word & mask)) {
      fresh = true;
      word |= mask;
    }
  }
  if (fresh) ++inserted_;
  return fresh;
}

bool BloomFilter::contains(std::string_view key) const {
  const auto h1 = stable_hash(key);
  const auto h2 = stable_hash(key, 0x9e3779b97f4a7c15ULL) | 1;
  for (std::size_t i = 0; i < hashes_; ++i) {
    const auto bit = (h1 + i * h2) % bits_;
    if (!(words_[bit / 64] & (std::uint64_t{1} << (bit % 64)))) return false;
  }
  return true;
}

double BloomFilter::expected_false_positive_rate() const {
  const double k = static_cast<double>(hashes_);
  return std::pow(1.0 - std::exp(-k * static_cast<double>(inserted_) / bits_), k);
}

}  // namespace ldq::sketch
