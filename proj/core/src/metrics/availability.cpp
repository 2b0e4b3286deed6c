#include "common.hpp"

namespace ldq::metrics {

namespace {

std::string probe_note(const HttpProbeResult& probe) {
  if (probe.timed_out) return "timeout";
  if (!probe.error.empty()) return "transport error: " + probe.error;
  if (probe.status_chain.empty()) return "no response";
  std::string chain;
  for (int status : probe.status_chain) {
    if (!chain.empty()) chain += " -> ";
    chain += std::to_string(status);
  }
  return "no 303 in redirect chain (" + chain + ")";
}

// Unique dereferenceable subjects plus unique dereferenceable objects over
// the number of triples. In sampling mode the dereferenceable share of each
// sample is scaled back up by the number of distinct resources seen, so a
// sample that holds the whole population gives the exhaustive answer.
class Dereferenceability final : public MetricInstance {
 public:
  Dereferenceability(const MetricDescriptor& d, const MetricOptions& options,
                     const InstantiationContext& ctx)
      : MetricInstance(d.metric_iri, d.value_kind),
        prober_(require_prober(ctx, "dereferenceability")),
        subjects_(sampling_enabled(options, ctx), options, ctx.seed),
        objects_(sampling_enabled(options, ctx), options, ctx.seed ^ 0x0b1ec7) {}

 protected:
  void on_accept(const Triple& t) override {
    if (t.subject.is_iri()) subjects_.offer(t.subject.value());
    if (t.object.is_iri()) objects_.offer(t.object.value());
  }

  MetricValue on_finalize(const AssessmentRun& run) override {
    const double estimate = estimate_dereferenceable(subjects_) + estimate_dereferenceable(objects_);
    auto value = ratio_or_degenerate(estimate, static_cast<double>(run.total_triples), "triples");
    if (value.as_double() > 1.0) {
      warn("more dereferenceable subjects and objects than triples; value capped at 1");
      return MetricValue::real(1.0);
    }
    return value;
  }

 private:
  double estimate_dereferenceable(const ResourcePool& pool) {
    const auto members = pool.members();
    std::uint64_t hits = 0;
    for (const auto& iri : members) {
      auto outcome = prober_->dereferenceability(iri);
      if (outcome.dereferenceable) {
        ++hits;
      } else {
        report(ProblemItem::resource(RdfTerm::iri(iri), probe_note(outcome.probe)));
      }
    }
    if (!pool.sampling()) return static_cast<double>(hits);
    if (members.empty()) return 0.0;
    return static_cast<double>(hits * pool.distinct()) / static_cast<double>(members.size());
  }

  std::shared_ptr<ResourceProber> prober_;
  ResourcePool subjects_;
  ResourcePool objects_;
};

// Of the subject IRIs answering 200 OK to an RDF-preferring request, the
// share whose Content-Type is an RDF media type.
class MisreportedContentTypes final : public MetricInstance {
 public:
  MisreportedContentTypes(const MetricDescriptor& d, const MetricOptions& options,
                          const InstantiationContext& ctx)
      : MetricInstance(d.metric_iri, d.value_kind),
        prober_(require_prober(ctx, "misreported-content-types")),
        pool_(sampling_enabled(options, ctx), options, ctx.seed) {}

 protected:
  void on_accept(const Triple& t) override {
    if (t.subject.is_iri()) pool_.offer(t.subject.value());
  }

  MetricValue on_finalize(const AssessmentRun&) override {
    std::uint64_t ok = 0;
    std::uint64_t correct = 0;
    for (const auto& iri : pool_.members()) {
      const auto probe = prober_->content_negotiation(iri);
      if (probe.timed_out) {
        report(ProblemItem::resource(RdfTerm::iri(iri), "timeout"));
        continue;
      }
      if (probe.final_status() != 200) continue;
      ++ok;
      if (is_rdf_media_type(probe.content_type)) {
        ++correct;
      } else {
        report(ProblemItem::resource(
            RdfTerm::iri(iri),
            probe.content_type.empty() ? "no content type" : "served as " + probe.content_type));
      }
    }
    return ratio_or_degenerate(static_cast<double>(correct), static_cast<double>(ok),
                               "resources answering 200 OK");
  }

 private:
  std::shared_ptr<ResourceProber> prober_;
  ResourcePool pool_;
};

}  // namespace

void register_availability(MetricRegistry& registry) {
  registry.add("dereferenceability", factory<Dereferenceability>());
  registry.add("misreported-content-types", factory<MisreportedContentTypes>());
}

}  // namespace ldq::metrics
