#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldq/metric.hpp"
#include "ldq/taxonomy.hpp"

namespace ldq {

class MetadataStore;

enum class WeightLevel { metric, dimension, category };

std::string_view to_string(WeightLevel level) noexcept;

/// User preferences: θ per taxonomy node at one level. Nodes not listed
/// weigh 0.
struct WeightConfig {
  WeightLevel level = WeightLevel::metric;
  std::map<std::string, double> weights;
};

/// Parses `{"level":"dimension","weights":{"<iri>":0.8}}`. Throws
/// Error(invalid_weight) for a negative or non-numeric θ and
/// Error(invalid_config) for any other shape problem.
WeightConfig parse_weight_config(std::string_view json_text);
std::string to_json(const WeightConfig& config);

/// Throws Error(invalid_weight_target) when a weighted IRI is not a node of
/// the configured level, Error(invalid_weight) for θ < 0.
void validate_weights(const WeightConfig& config, const Taxonomy& taxonomy);

/// θ·v
double weighted_metric_value(double value, double theta);
/// θ·(Σv)/#D. Throws Error(empty_dimension) for no values.
double weighted_dimension_value(std::span<const double> values, double theta);
/// (Σ v(D,θ))/#C over the category's dimensions. Throws Error(empty_category).
double weighted_category_value(std::span<const double> dimension_values);

struct Contribution {
  std::string node_iri;
  double weight = 0.0;
  double value = 0.0;  // the node's weighted value
};

struct RankedEntry {
  std::string dataset_iri;
  double total = 0.0;
  std::vector<Contribution> breakdown;  // one per weighted node, IRI order

  const Contribution* top_contributor() const;
};

struct RankedResult {
  WeightLevel level = WeightLevel::metric;
  std::vector<RankedEntry> entries;  // total descending, IRI ascending on ties
  std::vector<std::string> warnings;
};

/// Latest metric values per dataset IRI.
using ValueTable = std::map<std::string, std::map<std::string, MetricValue>>;

/// Ranks every dataset of the table. Metrics not marked normalized are left
/// out of the computation with a warning. Throws Error(missing_observation)
/// naming the dataset and metric when a positively weighted node needs a
/// value the table lacks.
RankedResult rank_values(const ValueTable& table, const Taxonomy& taxonomy, const WeightConfig& config);

/// rank_values over the store's latest values.
RankedResult rank_datasets(const MetadataStore& store, const Taxonomy& taxonomy,
                           const WeightConfig& config);

std::string to_json(const RankedResult& result, int indent = 2);

}  // namespace ldq
