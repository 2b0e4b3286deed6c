#include "ldq/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>

#include "ldq/error.hpp"
#include "ldq/metadata.hpp"

namespace ldq {

using nlohmann::json;

std::string_view to_string(WeightLevel level) noexcept {
  switch (level) {
    case WeightLevel::metric: return "metric";
    case WeightLevel::dimension: return "dimension";
    case WeightLevel::category: return "category";
  }
  return "metric";
}

WeightConfig parse_weight_config(std::string_view json_text) {
  const auto doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::invalid_config, "weight file is not a JSON object");
  }
  WeightConfig config;
  const auto level = doc.find("level");
  if (level == doc.end() || !level->is_string()) {
    throw Error(ErrorCode::invalid_config, "weight file needs a \"level\" string");
  }
  const auto text = level->get<std::string>();
  if (text == "metric") {
    config.level = WeightLevel::metric;
  } else if (text == "dimension") {
    config.level = WeightLevel::dimension;
  } else if (text == "category") {
    config.level = WeightLevel::category;
  } else {
    throw Error(ErrorCode::invalid_config, "unknown level '" + text + "'");
  }
  const auto weights = doc.find("weights");
  if (weights == doc.end()) return config;
  if (!weights->is_object()) throw Error(ErrorCode::invalid_config, "\"weights\" must be an object");
  for (const auto& [iri, theta] : weights->items()) {
    if (!theta.is_number()) {
      throw Error(ErrorCode::invalid_weight, "weight for <" + iri + "> is not a number");
    }
    const double v = theta.get<double>();
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::invalid_weight, "weight for <" + iri + "> must be >= 0");
    }
    config.weights[iri] = v;
  }
  return config;
}

std::string to_json(const WeightConfig& config) {
  json j{{"level", to_string(config.level)}, {"weights", json::object()}};
  for (const auto& [iri, theta] : config.weights) j["weights"][iri] = theta;
  return j.dump(2);
}

void validate_weights(const WeightConfig& config, const Taxonomy& taxonomy) {
  for (const auto& [iri, theta] : config.weights) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
      throw Error(ErrorCode::invalid_weight, "weight for <" + iri + "> must be >= 0");
    }
    bool found = false;
    switch (config.level) {
      case WeightLevel::metric: found = taxonomy.descriptor(iri) != nullptr; break;
      case WeightLevel::dimension: found = taxonomy.dimension(iri) != nullptr; break;
      case WeightLevel::category: found = taxonomy.category(iri) != nullptr; break;
    }
    if (!found) {
      throw Error(ErrorCode::invalid_weight_target,
                  "<" + iri + "> is not a " + std::string(to_string(config.level)) + " of the taxonomy");
    }
  }
}

double weighted_metric_value(double value, double theta) { return theta * value; }

double weighted_dimension_value(std::span<const double> values, double theta) {
  if (values.empty()) throw Error(ErrorCode::empty_dimension, "dimension has no metric values");
  double sum = 0.0;
  for (double v : values) sum += v;
  return theta * sum / static_cast<double>(values.size());
}

double weighted_category_value(std::span<const double> dimension_values) {
  if (dimension_values.empty()) throw Error(ErrorCode::empty_category, "category has no dimension values");
  double sum = 0.0;
  for (double v : dimension_values) sum += v;
  return sum / static_cast<double>(dimension_values.size());
}

const Contribution* RankedEntry::top_contributor() const {
  const Contribution* best = nullptr;
  for (const auto& c : breakdown) {
    if (!best || c.value > best->value) best = &c;
  }
  return best;
}

namespace {

class Scorer {
 public:
  Scorer(const Taxonomy& taxonomy, std::vector<std::string>& warnings)
      : taxonomy_(taxonomy), warnings_(warnings) {}

  double metric_value(const std::string& dataset, const std::map<std::string, MetricValue>& values,
                      const std::string& metric) const {
    auto it = values.find(metric);
    if (it == values.end()) {
      throw Error(ErrorCode::missing_observation,
                  "dataset <" + dataset + "> has no observation for metric <" + metric + ">");
    }
    return it->second.as_double();
  }

  // Normalized metrics of a dimension in IRI order.
  std::vector<std::string> rankable(const DimensionNode& dimension) {
    std::vector<std::string> out;
    for (const auto& m : dimension.metrics) {
      if (taxonomy_.descriptor(m)->normalized) {
        out.push_back(m);
      } else {
        exclude(m);
      }
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) {
      throw Error(ErrorCode::empty_dimension,
                  "dimension <" + dimension.iri + "> has no normalized metric to rank on");
    }
    return out;
  }

  void exclude(const std::string& metric) {
    if (excluded_.insert(metric).second) {
      warnings_.push_back("metric <" + metric + "> is not normalized and is left out of ranking");
    }
  }

  double dimension_value(const std::string& dataset, const std::map<std::string, MetricValue>& values,
                         const DimensionNode& dimension, double theta) {
    std::vector<double> vs;
    for (const auto& m : rankable(dimension)) vs.push_back(metric_value(dataset, values, m));
    return weighted_dimension_value(vs, theta);
  }

 private:
  const Taxonomy& taxonomy_;
  std::vector<std::string>& warnings_;
  std::set<std::string> excluded_;
};

}  // namespace

RankedResult rank_values(const ValueTable& table, const Taxonomy& taxonomy, const WeightConfig& config) {
  validate_weights(config, taxonomy);
  RankedResult result;
  result.level = config.level;
  Scorer scorer(taxonomy, result.warnings);

  for (const auto& [dataset, values] : table) {
    RankedEntry entry;
    entry.dataset_iri = dataset;
    for (const auto& [iri, theta] : config.weights) {
      Contribution c{iri, theta, 0.0};
      switch (config.level) {
        case WeightLevel::metric:
          if (!taxonomy.descriptor(iri)->normalized) {
            scorer.exclude(iri);
            break;
          }
          if (theta > 0.0) c.value = weighted_metric_value(scorer.metric_value(dataset, values, iri), theta);
          break;
        case WeightLevel::dimension:
          if (theta > 0.0) c.value = scorer.dimension_value(dataset, values, *taxonomy.dimension(iri), theta);
          break;
        case WeightLevel::category:
          if (theta > 0.0) {
            std::vector<double> dims;
            for (const auto& d : taxonomy.category(iri)->dimensions) {
              dims.push_back(scorer.dimension_value(dataset, values, d, theta));
            }
            c.value = weighted_category_value(dims);
          }
          break;
      }
      entry.total += c.value;
      entry.breakdown.push_back(std::move(c));
    }
    result.entries.push_back(std::move(entry));
  }
  std::stable_sort(result.entries.begin(), result.entries.end(), [](const auto& a, const auto& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.dataset_iri < b.dataset_iri;
  });
  return result;
}

RankedResult rank_datasets(const MetadataStore& store, const Taxonomy& taxonomy,
                           const WeightConfig& config) {
  ValueTable table;
  for (const auto& dataset : store.datasets()) table.emplace(dataset, store.latest_values(dataset));
  return rank_values(table, taxonomy, config);
}

std::string to_json(const RankedResult& result, int indent) {
  json j{{"level", to_string(result.level)}, {"ranking", json::array()}, {"warnings", result.warnings}};
  std::size_t rank = 0;
  for (const auto& e : result.entries) {
    json breakdown = json::array();
    for (const auto& c : e.breakdown) {
      breakdown.push_back({{"iri", c.node_iri}, {"weight", c.weight}, {"value", c.value}});
    }
    j["ranking"].push_back({{"rank", ++rank},
                            {"dataset", e.dataset_iri},
                            {"slug", dataset_slug(e.dataset_iri)},
                            {"total", e.total},
                            {"breakdown", std::move(breakdown)}});
  }
  return j.dump(indent);
}

}  // namespace ldq
