#include <fstream>
#include <sstream>

#include "common.hpp"
#include "ldq/lqml/compiled.hpp"
#include "ldq/lqml/parser.hpp"
#include "ldq/url.hpp"

namespace ldq {

namespace metrics {

ResourcePool::ResourcePool(bool sampling, const MetricOptions& options, std::uint64_t seed) {
  if (!sampling) return;
  bloom_.emplace(options.get_size("bloom_bits", kDefaultBloomBits),
                 options.get_size("bloom_hashes", kDefaultBloomHashes));
  reservoir_.emplace(options.get_size("k_pld", 50), options.get_size("k_res", 100), seed);
}

void ResourcePool::offer(const std::string& iri) {
  if (!reservoir_) {
    if (all_.insert(iri).second) ++distinct_;
    return;
  }
  if (!bloom_->insert_if_absent(iri)) return;
  ++distinct_;
  reservoir_->add(pay_level_domain(iri), iri);
}

std::vector<std::string> ResourcePool::members() const {
  if (reservoir_) return reservoir_->sample();
  return {all_.begin(), all_.end()};
}

void DomainTally::add_subject(const RdfTerm& subject) {
  if (!subject.is_iri()) return;
  auto domain = pay_level_domain(subject.value());
  if (!domain.empty()) ++counts_[domain];
}

std::string DomainTally::base_domain(const MetricOptions& options) const {
  if (auto base = options.get_string("base_iri", ""); !base.empty()) return pay_level_domain(base);
  std::string best;
  std::uint64_t best_count = 0;
  for (const auto& [domain, count] : counts_) {
    if (count > best_count) {
      best = domain;
      best_count = count;
    }
  }
  return best;
}

std::shared_ptr<ResourceProber> require_prober(const InstantiationContext& ctx, std::string_view metric) {
  if (!ctx.prober) {
    throw Error(ErrorCode::invalid_config, std::string(metric) + " needs an HTTP prober");
  }
  return ctx.prober;
}

std::shared_ptr<const VocabularyStore> resolve_vocabulary(const MetricOptions& options,
                                                          const InstantiationContext& ctx) {
  if (auto dir = options.get_string("vocab_dir", ""); !dir.empty()) {
    std::filesystem::path path = dir;
    if (path.is_relative() && !ctx.base_dir.empty()) path = ctx.base_dir / path;
    return std::make_shared<const VocabularyStore>(VocabularyStore::load_directory(path));
  }
  if (ctx.vocabulary) return ctx.vocabulary;
  return std::make_shared<const VocabularyStore>();
}

bool sampling_enabled(const MetricOptions& options, const InstantiationContext& ctx) {
  return options.get_bool("sampling", ctx.sampling);
}

}  // namespace metrics

void MetricRegistry::add(std::string name, MetricFactory factory) {
  factories_[std::move(name)] = std::move(factory);
}

const MetricFactory* MetricRegistry::find(std::string_view name) const {
  auto it = factories_.find(name);
  return it == factories_.end() ? nullptr : &it->second;
}

std::vector<std::string> MetricRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : factories_) out.push_back(name);
  return out;
}

const MetricRegistry& MetricRegistry::builtins() {
  static const MetricRegistry registry = [] {
    MetricRegistry r;
    metrics::register_availability(r);
    metrics::register_licensing_and_provenance(r);
    metrics::register_representation(r);
    metrics::register_intrinsic(r);
    metrics::register_interlinking(r);
    return r;
  }();
  return registry;
}

namespace {

std::unique_ptr<MetricInstance> instantiate_lqml(const LqmlImpl& impl, const MetricDescriptor& descriptor,
                                                 const InstantiationContext& ctx) {
  try {
    auto def = lqml::parse_lqml_file(impl.path.string());
    if (def.metric_iri != descriptor.metric_iri) {
      throw Error(ErrorCode::invalid_config, "file defines <" + def.metric_iri +
                                                 "> but is bound to <" + descriptor.metric_iri + ">");
    }
    auto functions = ctx.functions;
    if (!functions) {
      functions = std::make_shared<const lqml::FunctionRegistry>(
          lqml::FunctionRegistry::with_builtins(ctx.prober));
    }
    return lqml::compile(def, std::move(functions), descriptor.value_kind);
  } catch (const Error& e) {
    throw Error(ErrorCode::lqml_error, impl.path.string() + ": " + std::string(to_string(e.code())) +
                                           ": " + e.what());
  }
}

}  // namespace

std::unique_ptr<MetricInstance> instantiate(const MetricBinding& binding,
                                            const MetricDescriptor& descriptor,
                                            const MetricRegistry& registry,
                                            const InstantiationContext& context) {
  if (const auto* lqml = std::get_if<LqmlImpl>(&binding.implementation)) {
    return instantiate_lqml(*lqml, descriptor, context);
  }
  const auto& name = std::get<BuiltinImpl>(binding.implementation).name;
  const auto* factory = registry.find(name);
  if (!factory) throw Error(ErrorCode::unknown_builtin, "no builtin metric named '" + name + "'");
  return (*factory)(descriptor, binding.options, context);
}

std::vector<std::unique_ptr<MetricInstance>> instantiate_all(const Taxonomy& taxonomy,
                                                             const MetricRegistry& registry,
                                                             const InstantiationContext& context) {
  std::vector<std::unique_ptr<MetricInstance>> out;
  for (const auto& iri : taxonomy.metric_iris()) {
    out.push_back(instantiate(*taxonomy.binding(iri), *taxonomy.descriptor(iri), registry, context));
  }
  return out;
}

std::unique_ptr<MetricInstance> make_builtin(std::string_view name, const MetricOptions& options,
                                             const InstantiationContext& context,
                                             std::string metric_iri, ValueKind kind) {
  MetricDescriptor descriptor;
  descriptor.metric_iri = metric_iri.empty() ? "urn:ldq:metric:" + std::string(name) : metric_iri;
  descriptor.value_kind = kind;
  MetricBinding binding{descriptor.metric_iri, BuiltinImpl{std::string(name)}, options};
  return instantiate(binding, descriptor, MetricRegistry::builtins(), context);
}

}  // namespace ldq
