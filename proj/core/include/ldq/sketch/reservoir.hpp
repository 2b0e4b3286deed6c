#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ldq::sketch {

/// Uniform fixed-size sample of a stream (Vitter's Algorithm R): after n
/// insertions each element is retained with probability min(1, k/n).
template <class T>
class Reservoir {
 public:
  struct Offer {
    bool stored = false;
    std::optional<T> evicted;
  };

  explicit Reservoir(std::size_t capacity, std::uint64_t seed = 0x5eed)
      : capacity_(capacity == 0 ? 1 : capacity), rng_(seed) {
    items_.reserve(std::min<std::size_t>(capacity_, 1024));
  }

  Offer add(T item) {
    ++seen_;
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
      return {true, std::nullopt};
    }
    std::uniform_int_distribution<std::uint64_t> slot(0, seen_ - 1);
    const auto j = slot(rng_);
    if (j >= capacity_) return {false, std::nullopt};
    Offer offer{true, std::move(items_[j])};
    items_[j] = std::move(item);
    return offer;
  }

  std::span<const T> items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::uint64_t seen() const noexcept { return seen_; }

 private:
  std::size_t capacity_;
  std::uint64_t seen_ = 0;
  std::vector<T> items_;
  std::mt19937_64 rng_;
};

/// Samples pay-level domains first and then resources within each sampled
/// domain, so hosts with millions of resources cannot crowd out small ones.
/// Only currently sampled domains hold a sub-reservoir.
class TwoLevelReservoir {
 public:
  TwoLevelReservoir(std::size_t domain_capacity, std::size_t resource_capacity,
                    std::uint64_t seed = 0x5eed);

  /// Offers a resource. The domain is offered to the first level the first
  /// time it is seen; resources of rejected domains are dropped.
  void add(const std::string& domain, std::string resource);

  /// All sampled resources, grouped by domain in sample order.
  std::vector<std::string> sample() const;

  std::size_t domain_count() const noexcept { return per_domain_.size(); }
  std::size_t domain_capacity() const noexcept { return domains_.capacity(); }
  std::size_t resource_capacity() const noexcept { return resource_capacity_; }

 private:
  Reservoir<std::string> domains_;
  std::unordered_map<std::string, Reservoir<std::string>> per_domain_;
  std::unordered_set<std::string> offered_;
  std::size_t resource_capacity_;
  std::uint64_t seed_;
};

}  // namespace ldq::sketch
