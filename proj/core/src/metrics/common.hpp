#pragma once

#include <absl/container/flat_hash_set.h>
#include <absl/hash/hash.h>
#include <absl/numeric/int128.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "ldq/error.hpp"
#include "ldq/metrics.hpp"
#include "ldq/probe.hpp"
#include "ldq/rdf.hpp"
#include "ldq/sketch/bloom.hpp"
#include "ldq/sketch/reservoir.hpp"
#include "ldq/stream.hpp"
#include "ldq/vocab_store.hpp"

namespace ldq::metrics {

inline constexpr std::size_t kDefaultBloomBits = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultBloomHashes = 7;

/// Distinct-string counter that keeps 128-bit fingerprints (two unrelated
/// 64-bit hashes) instead of the strings. A collision needs ~2^64 distinct
/// keys, so counts are exact at any dataset size we will meet, and the table
/// stays a quarter of the size of a string set.
class DistinctStrings {
 public:
  bool insert(std::string_view key) {
    return seen_.insert(absl::MakeUint128(absl::Hash<std::string_view>{}(key), std::hash<std::string_view>{}(key)))
        .second;
  }
  std::size_t size() const noexcept { return seen_.size(); }

 private:
  absl::flat_hash_set<absl::uint128> seen_;
};

/// Distinct resources, either kept in full or thinned to a two-level
/// (pay-level domain, resource) reservoir sample. In sampling mode
/// distinctness is judged by a Bloom filter so memory stays bounded.
class ResourcePool {
 public:
  ResourcePool(bool sampling, const MetricOptions& options, std::uint64_t seed);

  void offer(const std::string& iri);

  /// Sorted members (exhaustive) or the reservoir sample.
  std::vector<std::string> members() const;
  std::uint64_t distinct() const noexcept { return distinct_; }
  bool sampling() const noexcept { return reservoir_.has_value(); }

 private:
  std::set<std::string> all_;
  std::optional<sketch::BloomFilter> bloom_;
  std::optional<sketch::TwoLevelReservoir> reservoir_;
  std::uint64_t distinct_ = 0;
};

/// Counts subject IRIs per pay-level domain to guess the dataset's own
/// domain when no `base_iri` option is given.
class DomainTally {
 public:
  void add_subject(const RdfTerm& subject);
  /// The configured base, else the most frequent subject domain (ties to the
  /// lexicographically smallest). Empty if nothing was seen.
  std::string base_domain(const MetricOptions& options) const;

 private:
  std::map<std::string, std::uint64_t> counts_;
};

std::shared_ptr<ResourceProber> require_prober(const InstantiationContext& ctx, std::string_view metric);
std::shared_ptr<const VocabularyStore> resolve_vocabulary(const MetricOptions& options,
                                                          const InstantiationContext& ctx);
bool sampling_enabled(const MetricOptions& options, const InstantiationContext& ctx);

template <class M>
MetricFactory factory() {
  return [](const MetricDescriptor& d, const MetricOptions& o, const InstantiationContext& c) {
    return std::unique_ptr<MetricInstance>(std::make_unique<M>(d, o, c));
  };
}

void register_availability(MetricRegistry& registry);
void register_licensing_and_provenance(MetricRegistry& registry);
void register_representation(MetricRegistry& registry);
void register_intrinsic(MetricRegistry& registry);
void register_interlinking(MetricRegistry& registry);

}  // namespace ldq::metrics
