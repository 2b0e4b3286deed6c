#include "ldq/sketch/reservoir.hpp"

#include "ldq/rdf.hpp"

namespace ldq::sketch {

TwoLevelReservoir::TwoLevelReservoir(std::size_t domain_capacity, std::size_t resource_capacity,
                                     std::uint64_t seed)
    : domains_(domain_capacity, seed),
      resource_capacity_(resource_capacity == 0 ? 1 : resource_capacity),
      seed_(seed) {}

void TwoLevelReservoir::add(const std::string& domain, std::string resource) {
  if (auto it = per_domain_.find(domain); it != per_domain_.end()) {
    it->second.add(std::move(resource));
    return;
  }
  if (!offered_.insert(domain).second) return;  // domain was rejected or evicted earlier
  auto offer = domains_.add(domain);
  if (!offer.stored) return;
  if (offer.evicted) per_domain_.erase(*offer.evicted);
  auto [it, inserted] =
      per_domain_.try_emplace(domain, resource_capacity_, seed_ ^ stable_hash(domain));
  it->second.add(std::move(resource));
}

std::vector<std::string> TwoLevelReservoir::sample() const {
  std::vector<std::string> out;
  for (const auto& domain : domains_.items()) {
    if (auto it = per_domain_.find(domain); it != per_domain_.end()) {
      for (const auto& r : it->second.items()) out.push_back(r);
    }
  }
  return out;
}

}  // namespace ldq::sketch
