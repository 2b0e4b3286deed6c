#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldq/metric.hpp"

namespace ldq {

/// Per-metric configuration values, e.g. reservoir sizes or a vocabulary
/// directory.
class MetricOptions {
 public:
  using Value = std::variant<bool, double, std::string>;

  void set(std::string key, Value value) { values_[std::move(key)] = std::move(value); }
  bool contains(std::string_view key) const { return values_.find(key) != values_.end(); }

  bool get_bool(std::string_view key, bool fallback) const;
  double get_number(std::string_view key, double fallback) const;
  std::size_t get_size(std::string_view key, std::size_t fallback) const;
  std::string get_string(std::string_view key, std::string fallback) const;

  const std::map<std::string, Value, std::less<>>& values() const noexcept { return values_; }

 private:
  std::map<std::string, Value, std::less<>> values_;
};

struct MetricDescriptor {
  std::string metric_iri;
  std::string label;
  std::string dimension_iri;
  std::string category_iri;
  ValueKind value_kind = ValueKind::real;
  bool normalized = true;
};

struct BuiltinImpl {
  std::string name;
};

struct LqmlImpl {
  std::filesystem::path path;
};

struct MetricBinding {
  std::string metric_iri;
  std::variant<BuiltinImpl, LqmlImpl> implementation;
  MetricOptions options;
};

struct DimensionNode {
  std::string iri;
  std::string label;
  std::vector<std::string> metrics;
};

struct CategoryNode {
  std::string iri;
  std::string label;
  std::vector<DimensionNode> dimensions;
};

/// Category -> dimension -> metric tree. Immutable once loaded; every metric
/// sits under exactly one dimension and every dimension under exactly one
/// category.
class Taxonomy {
 public:
  const std::vector<CategoryNode>& categories() const noexcept { return categories_; }

  const MetricDescriptor* descriptor(std::string_view metric_iri) const;
  const MetricBinding* binding(std::string_view metric_iri) const;
  const DimensionNode* dimension(std::string_view dimension_iri) const;
  const CategoryNode* category(std::string_view category_iri) const;

  /// Metric IRIs in declaration order.
  std::vector<std::string> metric_iris() const;
  std::size_t metric_count() const noexcept { return descriptors_.size(); }
  std::size_t dimension_count() const noexcept;
  std::size_t category_count() const noexcept { return categories_.size(); }

 private:
  friend Taxonomy load_taxonomy(std::string_view, const std::filesystem::path&);

  std::vector<CategoryNode> categories_;
  std::map<std::string, MetricDescriptor, std::less<>> descriptors_;
  std::map<std::string, MetricBinding, std::less<>> bindings_;
  std::map<std::string, std::pair<std::size_t, std::size_t>, std::less<>> dimension_index_;
  std::map<std::string, std::size_t, std::less<>> category_index_;
};

/// Parses and validates the JSON taxonomy/binding document
/// `{categories:[{iri,dimensions:[{iri,metrics:[{iri,label,kind,normalized,impl}]}]}]}`.
/// LQML paths are resolved against `base_dir`.
///
/// Throws Error with code orphan_metric, duplicate_iri, empty_dimension,
/// empty_category or invalid_config naming the first inconsistency found.
Taxonomy load_taxonomy(std::string_view json_text, const std::filesystem::path& base_dir = {});

Taxonomy load_taxonomy_file(const std::filesystem::path& path);

/// The bundled 16-metric taxonomy.
std::string_view default_taxonomy_json();
const Taxonomy& default_taxonomy();

}  // namespace ldq
