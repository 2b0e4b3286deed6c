#include <algorithm>
#include <array>
#include <cctype>

#include "common.hpp"

namespace ldq::metrics {

namespace {

using vocab::term;

/// Share of nodes typed with one of `classes` that carry, for every
/// requirement group, at least one predicate of that group.
class TypedNodeCoverage : public MetricInstance {
 public:
  TypedNodeCoverage(const MetricDescriptor& d, std::vector<std::string> classes,
                    std::vector<std::vector<std::string>> requirements, std::string node_kind,
                    std::string missing_note)
      : MetricInstance(d.metric_iri, d.value_kind),
        classes_(std::move(classes)),
        requirements_(std::move(requirements)),
        node_kind_(std::move(node_kind)),
        missing_note_(std::move(missing_note)) {}

 protected:
  void on_accept(const Triple& t) override {
    const auto& p = t.predicate.value();
    if (p == vocab::rdf_type && t.object.is_iri() &&
        std::find(classes_.begin(), classes_.end(), t.object.value()) != classes_.end()) {
      nodes_.insert(t.subject);
    }
    for (std::size_t g = 0; g < requirements_.size(); ++g) {
      const auto& group = requirements_[g];
      if (std::find(group.begin(), group.end(), p) != group.end()) {
        satisfied_[t.subject] |= std::uint32_t{1} << g;
      }
    }
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    const std::uint32_t all = (std::uint32_t{1} << requirements_.size()) - 1;
    std::uint64_t covered = 0;
    for (const auto& node : nodes_) {
      auto it = satisfied_.find(node);
      if (it != satisfied_.end() && it->second == all) {
        ++covered;
      } else {
        report(ProblemItem::resource(node, missing_note_));
      }
    }
    return ratio_or_degenerate(static_cast<double>(covered), static_cast<double>(nodes_.size()),
                               node_kind_);
  }

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<std::string>> requirements_;
  std::string node_kind_;
  std::string missing_note_;
  std::set<RdfTerm> nodes_;
  std::map<RdfTerm, std::uint32_t> satisfied_;
};

std::vector<std::string> dataset_classes() {
  return {term(vocab::void_, "Dataset"), term(vocab::dcat, "Dataset")};
}

MetricFactory coverage(std::vector<std::string> classes, std::vector<std::vector<std::string>> groups,
                       std::string node_kind, std::string note) {
  return [=](const MetricDescriptor& d, const MetricOptions&, const InstantiationContext&) {
    return std::unique_ptr<MetricInstance>(
        std::make_unique<TypedNodeCoverage>(d, classes, groups, node_kind, note));
  };
}

constexpr std::array<std::string_view, 5> kLicenseLexicon = {"license", "licence", "copyright",
                                                             "cc-by", "public domain"};

bool mentions_license(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::any_of(kLicenseLexicon.begin(), kLicenseLexicon.end(),
                     [&](std::string_view word) { return lowered.find(word) != std::string::npos; });
}

// 1 if some label, comment or description literal talks about licensing.
class HumanReadableLicense final : public MetricInstance {
 public:
  HumanReadableLicense(const MetricDescriptor& d, const MetricOptions&, const InstantiationContext&)
      : MetricInstance(d.metric_iri, d.value_kind),
        properties_{term(vocab::rdfs, "label"), term(vocab::rdfs, "comment"),
                    term(vocab::dcterms, "description"), term(vocab::dc, "description")} {}

 protected:
  void on_accept(const Triple& t) override {
    if (found_ || !t.object.is_literal()) return;
    if (std::find(properties_.begin(), properties_.end(), t.predicate.value()) == properties_.end()) {
      return;
    }
    found_ = mentions_license(t.object.value());
  }

  MetricValue on_finalize(const AssessmentRun& run) override {
    if (!found_ && !run.dataset_iri.empty()) {
      report(ProblemItem::resource(RdfTerm::iri(run.dataset_iri), "no human-readable license statement"));
    }
    return MetricValue::real(found_ ? 1.0 : 0.0);
  }

 private:
  std::vector<std::string> properties_;
  bool found_ = false;
};

}  // namespace

void register_licensing_and_provenance(MetricRegistry& registry) {
  registry.add("machine-readable-license",
               coverage(dataset_classes(),
                        {{term(vocab::dcterms, "license"), term(vocab::cc, "license")}},
                        "dataset nodes", "no machine-readable license"));
  registry.add("human-readable-license", factory<HumanReadableLicense>());
  registry.add("basic-provenance",
               coverage(dataset_classes(),
                        {{term(vocab::dc, "creator"), term(vocab::dc, "publisher"),
                          term(vocab::dcterms, "creator"), term(vocab::dcterms, "publisher")}},
                        "dataset nodes", "no creator or publisher"));
  registry.add("extended-provenance",
               coverage({term(vocab::prov, "Activity")},
                        {{term(vocab::prov, "wasAssociatedWith")}, {term(vocab::prov, "used")}},
                        "prov:Activity nodes", "activity lacks an associated agent or a used source"));
  registry.add("different-serialisations",
               coverage(dataset_classes(), {{term(vocab::void_, "feature")}}, "dataset nodes",
                        "no void:feature"));
}

}  // namespace ldq::metrics
