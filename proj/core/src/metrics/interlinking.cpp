#include <algorithm>

#include "common.hpp"
#include "ldq/sketch/graph.hpp"
#include "ldq/url.hpp"

namespace ldq::metrics {

namespace {

bool is_web_iri(const std::string& iri) {
  return iri.rfind("http://", 0) == 0 || iri.rfind("https://", 0) == 0;
}

// Reservoir sample of http(s) object IRIs (rdf:type objects excluded); the
// share hosted outside the dataset's own pay-level domain.
class LinksToExternalProviders final : public MetricInstance {
 public:
  LinksToExternalProviders(const MetricDescriptor& d, const MetricOptions& options,
                           const InstantiationContext& ctx)
      : MetricInstance(d.metric_iri, d.value_kind),
        options_(options),
        reservoir_(options.get_size("reservoir_size", 10'000), ctx.seed) {}

 protected:
  void on_accept(const Triple& t) override {
    domains_.add_subject(t.subject);
    if (!t.object.is_iri() || t.predicate.value() == vocab::rdf_type) return;
    if (is_web_iri(t.object.value())) reservoir_.add(t.object.value());
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    const auto base = domains_.base_domain(options_);
    std::uint64_t external = 0;
    std::set<std::string> internal;
    for (const auto& iri : reservoir_.items()) {
      if (pay_level_domain(iri) != base) {
        ++external;
      } else {
        internal.insert(iri);
      }
    }
    for (const auto& iri : internal) {
      report(ProblemItem::resource(RdfTerm::iri(iri), "link stays within " + base));
    }
    return ratio_or_degenerate(static_cast<double>(external),
                               static_cast<double>(reservoir_.size()), "object IRIs");
  }

 private:
  MetricOptions options_;
  DomainTally domains_;
  sketch::Reservoir<std::string> reservoir_;
};

// Clustering-coefficient part of "good interlinks": IRI-to-IRI triples form
// an undirected graph whose mean local clustering is estimated by a walk.
class GoodInterlinks final : public MetricInstance {
 public:
  GoodInterlinks(const MetricDescriptor& d, const MetricOptions& options, const InstantiationContext& ctx)
      : MetricInstance(d.metric_iri, d.value_kind),
        walk_factor_(options.get_size("walk_factor", 10)),
        seed_(ctx.seed) {}

 protected:
  void on_accept(const Triple& t) override {
    if (!t.subject.is_iri() || !t.object.is_iri() || t.predicate.value() == vocab::rdf_type) return;
    graph_.add_edge(t.subject.value(), t.object.value());
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    if (graph_.node_count() == 0) return ratio_or_degenerate(0, 0, "IRI-to-IRI links");
    return MetricValue::real(sketch::clustering_coefficient_estimate(
        graph_, walk_factor_ * graph_.node_count(), seed_));
  }

 private:
  std::size_t walk_factor_;
  std::uint64_t seed_;
  sketch::StreamedGraph graph_;
};

}  // namespace

void register_interlinking(MetricRegistry& registry) {
  registry.add("links-to-external-providers", factory<LinksToExternalProviders>());
  registry.add("good-interlinks", factory<GoodInterlinks>());
}

}  // namespace ldq::metrics
