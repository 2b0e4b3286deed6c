#include <absl/container/flat_hash_set.h>

#include <unordered_map>

#include "common.hpp"
#include "ldq/url.hpp"

namespace ldq::metrics {

namespace {

using vocab::term;

std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

// Distinct subject IRIs of at most 80 characters and without a query part.
class ShortUris final : public MetricInstance {
 public:
  ShortUris(const MetricDescriptor& d, const MetricOptions& options, const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind), max_length_(options.get_size("max_length", 80)) {}

 protected:
  void on_accept(const Triple& t) override {
    if (!t.subject.is_iri()) return;
    const auto& iri = t.subject.value();
    if (!seen_.insert(iri)) return;
    if (code_points(iri) > max_length_) {
      offending_.emplace(iri, "longer than " + std::to_string(max_length_) + " characters");
    } else if (iri.find('?') != std::string::npos) {
      offending_.emplace(iri, "has query parameters");
    }
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    for (const auto& [iri, why] : offending_) report(ProblemItem::resource(RdfTerm::iri(iri), why));
    return ratio_or_degenerate(static_cast<double>(seen_.size() - offending_.size()),
                               static_cast<double>(seen_.size()), "subject IRIs");
  }

 private:
  std::size_t max_length_;
  DistinctStrings seen_;
  std::map<std::string, std::string> offending_;
};

class NoRdfCollections final : public MetricInstance {
 public:
  NoRdfCollections(const MetricDescriptor& d, const MetricOptions&, const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind),
        first_(term(vocab::rdf, "first")),
        rest_(term(vocab::rdf, "rest")),
        containers_{term(vocab::rdf, "Seq"), term(vocab::rdf, "Bag"), term(vocab::rdf, "Alt"),
                    term(vocab::rdf, "List")} {}

 protected:
  void on_accept(const Triple& t) override {
    const auto& p = t.predicate.value();
    bool hit = p == first_ || p == rest_;
    if (!hit && p == vocab::rdf_type && t.object.is_iri()) hit = containers_.count(t.object.value()) > 0;
    if (hit) {
      ++collection_triples_;
      report(ProblemItem::statement(t, "RDF collection or container"));
    }
  }

  MetricValue on_finalize(const AssessmentRun& run) override {
    if (run.total_triples == 0) return ratio_or_degenerate(0, 0, "triples");
    return MetricValue::real(1.0 - static_cast<double>(collection_triples_) /
                                       static_cast<double>(run.total_triples));
  }

 private:
  std::string first_;
  std::string rest_;
  std::set<std::string> containers_;
  std::uint64_t collection_triples_ = 0;
};

// Small datasets should prefer hash IRIs, large ones slash IRIs. Only IRIs
// on the dataset's own pay-level domain are judged.
class HashVsSlashUris final : public MetricInstance {
 public:
  HashVsSlashUris(const MetricDescriptor& d, const MetricOptions& options, const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind),
        options_(options),
        large_threshold_(options.get_size("large_dataset_triples", 500'000)) {}

 protected:
  void on_accept(const Triple& t) override {
    domains_.add_subject(t.subject);
    if (t.subject.is_iri()) seen_.insert(t.subject.value());
    if (t.object.is_iri()) seen_.insert(t.object.value());
  }

  MetricValue on_finalize(const AssessmentRun& run) override {
    const auto base = domains_.base_domain(options_);
    const bool large = run.total_triples >= large_threshold_;
    std::vector<std::string> local;
    for (const auto& iri : seen_) {
      if (base.empty() || pay_level_domain(iri) == base) local.push_back(iri);
    }
    std::sort(local.begin(), local.end());
    std::uint64_t preferred = 0;
    for (const auto& iri : local) {
      const bool hash = iri.find('#') != std::string::npos;
      if (hash != large) {
        ++preferred;
      } else {
        report(ProblemItem::resource(RdfTerm::iri(iri), large ? "hash IRI in a large dataset"
                                                              : "slash IRI in a small dataset"));
      }
    }
    return ratio_or_degenerate(static_cast<double>(preferred), static_cast<double>(local.size()),
                               "local IRIs");
  }

 private:
  MetricOptions options_;
  std::uint64_t large_threshold_;
  DomainTally domains_;
  absl::flat_hash_set<std::string> seen_;
};

class LowBlankNodeUsage final : public MetricInstance {
 public:
  LowBlankNodeUsage(const MetricDescriptor& d, const MetricOptions&, const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind) {}

 protected:
  void on_accept(const Triple& t) override {
    note(t.subject);
    note(t.object);
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    for (const auto& b : blanks_) report(ProblemItem::resource(RdfTerm::blank(b), "blank node"));
    const auto terms = iris_.size() + blanks_.size();
    if (terms == 0) return ratio_or_degenerate(0, 0, "IRI or blank-node terms");
    return MetricValue::real(1.0 - static_cast<double>(blanks_.size()) / static_cast<double>(terms));
  }

 private:
  // plain strings keep the working set small on large dumps
  void note(const RdfTerm& term) {
    if (term.is_iri()) {
      iris_.insert(term.value());
    } else if (term.is_blank()) {
      blanks_.insert(term.value());
    }
  }

  DistinctStrings iris_;
  std::set<std::string> blanks_;
};

// Average number of distinct language tags per subject that has any
// language-tagged literal.
class MultipleLanguageUsage final : public MetricInstance {
 public:
  MultipleLanguageUsage(const MetricDescriptor& d, const MetricOptions&, const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind) {}

 protected:
  void on_accept(const Triple& t) override {
    if (!t.object.is_literal()) return;
    const auto& language = t.object.as_literal().language;
    if (language) tags_[t.subject].insert(*language);
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    std::uint64_t total = 0;
    for (const auto& [_, tags] : tags_) total += tags.size();
    if (tags_.empty()) {
      warn("no language-tagged literals; value set to 0");
      return MetricValue::real(0.0);
    }
    return MetricValue::real(static_cast<double>(total) / static_cast<double>(tags_.size()));
  }

 private:
  std::unordered_map<RdfTerm, std::set<std::string>> tags_;
};

}  // namespace

void register_representation(MetricRegistry& registry) {
  registry.add("short-uris", factory<ShortUris>());
  registry.add("no-rdf-collections", factory<NoRdfCollections>());
  registry.add("hash-vs-slash-uris", factory<HashVsSlashUris>());
  registry.add("low-blank-node-usage", factory<LowBlankNodeUsage>());
  registry.add("multiple-language-usage", factory<MultipleLanguageUsage>());
}

}  // namespace ldq::metrics
