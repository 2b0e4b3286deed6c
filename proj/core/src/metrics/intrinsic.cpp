#include <absl/container/flat_hash_set.h>

#include <algorithm>
#include <unordered_map>

#include "common.hpp"

namespace ldq::metrics {

namespace {

// Predicates and rdf:type objects that no loaded vocabulary defines.
class UndefinedClassesAndProperties final : public MetricInstance {
 public:
  UndefinedClassesAndProperties(const MetricDescriptor& d, const MetricOptions& options,
                                const InstantiationContext& ctx)
      : MetricInstance(d.metric_iri, d.value_kind), vocabulary_(resolve_vocabulary(options, ctx)) {}

 protected:
  void on_accept(const Triple& t) override {
    if (t.predicate.is_iri()) check(t.predicate.value(), "property");
    if (t.predicate.value() == vocab::rdf_type && t.object.is_iri()) check(t.object.value(), "class");
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    for (const auto& [iri, role] : undefined_) {
      report(ProblemItem::resource(RdfTerm::iri(iri), "undefined " + role));
    }
    return ratio_or_degenerate(static_cast<double>(checked_.size() - undefined_.size()),
                               static_cast<double>(checked_.size()), "classes or properties");
  }

 private:
  void check(const std::string& iri, const char* role) {
    if (!checked_.insert(iri).second) return;
    if (!vocabulary_->defines(iri)) undefined_.emplace(iri, role);
  }

  std::shared_ptr<const VocabularyStore> vocabulary_;
  absl::flat_hash_set<std::string> checked_;
  std::map<std::string, std::string> undefined_;
};

// Reservoir sample of typed resources; a resource violates when two of its
// types, closed under rdfs:subClassOf, are declared owl:disjointWith.
class MemberOfDisjointClasses final : public MetricInstance {
 public:
  MemberOfDisjointClasses(const MetricDescriptor& d, const MetricOptions& options,
                          const InstantiationContext& ctx)
      : MetricInstance(d.metric_iri, d.value_kind),
        vocabulary_(resolve_vocabulary(options, ctx)),
        reservoir_(options.get_size("reservoir_size", 10'000), ctx.seed),
        first_seen_(options.get_size("bloom_bits", kDefaultBloomBits),
                    options.get_size("bloom_hashes", kDefaultBloomHashes)) {}

 protected:
  void on_accept(const Triple& t) override {
    if (t.predicate.value() != vocab::rdf_type || !t.object.is_iri() || t.subject.is_literal()) return;
    if (auto it = types_.find(t.subject); it != types_.end()) {
      it->second.insert(t.object.value());
      return;
    }
    if (!first_seen_.insert_if_absent(to_ntriples(t.subject))) return;
    // Types are gathered from the first rdf:type statement on, so a retained
    // resource always has its complete type set.
    auto offer = reservoir_.add(t.subject);
    if (!offer.stored) return;
    if (offer.evicted) types_.erase(*offer.evicted);
    types_[t.subject].insert(t.object.value());
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    std::vector<RdfTerm> sampled(reservoir_.items().begin(), reservoir_.items().end());
    std::sort(sampled.begin(), sampled.end());
    std::uint64_t violators = 0;
    for (const auto& resource : sampled) {
      std::set<std::string> closure;
      for (const auto& type : types_.at(resource)) {
        auto up = vocabulary_->superclass_closure(type);
        closure.insert(up.begin(), up.end());
      }
      if (auto clash = find_clash(closure)) {
        ++violators;
        report(ProblemItem::resource(resource, "<" + clash->first + "> owl:disjointWith <" +
                                                   clash->second + ">"));
      }
    }
    if (sampled.empty()) return ratio_or_degenerate(0, 0, "typed resources");
    return MetricValue::real(1.0 - static_cast<double>(violators) / static_cast<double>(sampled.size()));
  }

 private:
  std::optional<std::pair<std::string, std::string>> find_clash(const std::set<std::string>& types) const {
    if (!vocabulary_->has_disjointness_axioms()) return std::nullopt;
    for (auto a = types.begin(); a != types.end(); ++a) {
      for (auto b = std::next(a); b != types.end(); ++b) {
        if (vocabulary_->declared_disjoint(*a, *b)) return std::pair{*a, *b};
      }
    }
    return std::nullopt;
  }

  std::shared_ptr<const VocabularyStore> vocabulary_;
  sketch::Reservoir<RdfTerm> reservoir_;
  sketch::BloomFilter first_seen_;
  std::unordered_map<RdfTerm, std::set<std::string>> types_;
};

// Subjects whose set of (predicate, object) pairs repeats that of an earlier
// subject are redundant. Repeats are detected with a Bloom filter over the
// per-subject fingerprints.
class ExtensionalConciseness final : public MetricInstance {
 public:
  ExtensionalConciseness(const MetricDescriptor& d, const MetricOptions& options,
                         const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind),
        bloom_bits_(options.get_size("bloom_bits", kDefaultBloomBits)),
        bloom_hashes_(options.get_size("bloom_hashes", kDefaultBloomHashes)) {}

 protected:
  void on_accept(const Triple& t) override {
    auto [it, inserted] = index_.try_emplace(t.subject, subjects_.size());
    if (inserted) subjects_.emplace_back(t.subject, std::vector<std::uint64_t>{});
    const auto pair = to_ntriples(t.predicate) + ' ' + to_ntriples(t.object);
    subjects_[it->second].second.push_back(stable_hash(pair));
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    sketch::BloomFilter fingerprints(bloom_bits_, bloom_hashes_);
    std::uint64_t unique = 0;
    for (auto& [subject, pairs] : subjects_) {
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
      const std::string_view bytes(reinterpret_cast<const char*>(pairs.data()),
                                   pairs.size() * sizeof(std::uint64_t));
      const auto fingerprint = stable_hash(bytes);
      const std::string_view key(reinterpret_cast<const char*>(&fingerprint), sizeof fingerprint);
      if (fingerprints.insert_if_absent(key)) {
        ++unique;
      } else {
        report(ProblemItem::resource(subject, "same properties and values as an earlier subject"));
      }
    }
    return ratio_or_degenerate(static_cast<double>(unique), static_cast<double>(subjects_.size()),
                               "subjects");
  }

 private:
  std::size_t bloom_bits_;
  std::size_t bloom_hashes_;
  std::unordered_map<RdfTerm, std::size_t> index_;
  std::vector<std::pair<RdfTerm, std::vector<std::uint64_t>>> subjects_;
};

}  // namespace

void register_intrinsic(MetricRegistry& registry) {
  registry.add("undefined-classes-and-properties", factory<UndefinedClassesAndProperties>());
  registry.add("member-of-disjoint-classes", factory<MemberOfDisjointClasses>());
  registry.add("extensional-conciseness", factory<ExtensionalConciseness>());
}

}  // namespace ldq::metrics
