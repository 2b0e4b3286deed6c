#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ldq/metric.hpp"
#include "ldq/taxonomy.hpp"

namespace ldq {

class ResourceProber;
class VocabularyStore;

namespace lqml {
class FunctionRegistry;
}

/// Everything a metric may need from the surrounding run.
struct InstantiationContext {
  std::string dataset_iri;
  /// Probe a two-level reservoir sample instead of every resource.
  bool sampling = false;
  std::uint64_t seed = 0x5eed;
  /// Shared, memoizing HTTP prober; metrics that probe fail to instantiate
  /// without one.
  std::shared_ptr<ResourceProber> prober;
  /// Used when a metric's options name no `vocab_dir`.
  std::shared_ptr<const VocabularyStore> vocabulary;
  /// For LQML bindings; builtins over `prober` when null.
  std::shared_ptr<const lqml::FunctionRegistry> functions;
  /// Relative `vocab_dir` options resolve against this.
  std::filesystem::path base_dir;
};

using MetricFactory = std::function<std::unique_ptr<MetricInstance>(
    const MetricDescriptor&, const MetricOptions&, const InstantiationContext&)>;

class MetricRegistry {
 public:
  void add(std::string name, MetricFactory factory);
  const MetricFactory* find(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Every metric shipped with the library.
  static const MetricRegistry& builtins();

 private:
  std::map<std::string, MetricFactory, std::less<>> factories_;
};

/// Throws Error(unknown_builtin) or Error(lqml_error).
std::unique_ptr<MetricInstance> instantiate(const MetricBinding& binding,
                                            const MetricDescriptor& descriptor,
                                            const MetricRegistry& registry,
                                            const InstantiationContext& context);

/// One ready instance per metric of the taxonomy, in declaration order. All
/// bindings are resolved before anything is returned.
std::vector<std::unique_ptr<MetricInstance>> instantiate_all(const Taxonomy& taxonomy,
                                                             const MetricRegistry& registry,
                                                             const InstantiationContext& context);

/// Instances for running a single builtin outside any taxonomy (tests,
/// benchmarks). The descriptor is synthesized with the given kind.
std::unique_ptr<MetricInstance> make_builtin(std::string_view name, const MetricOptions& options,
                                             const InstantiationContext& context,
                                             std::string metric_iri = {},
                                             ValueKind kind = ValueKind::real);

}  // namespace ldq
