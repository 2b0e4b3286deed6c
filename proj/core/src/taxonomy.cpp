#include "ldq/taxonomy.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "ldq/error.hpp"
#include "ldq_default_taxonomy.hpp"

namespace ldq {

using nlohmann::json;

bool MetricOptions::get_bool(std::string_view key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* b = std::get_if<bool>(&it->second)) return *b;
  if (const auto* d = std::get_if<double>(&it->second)) return *d != 0.0;
  return fallback;
}

double MetricOptions::get_number(std::string_view key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  return fallback;
}

std::size_t MetricOptions::get_size(std::string_view key, std::size_t fallback) const {
  const double v = get_number(key, -1.0);
  if (v < 0.0 || !std::isfinite(v)) return fallback;
  return static_cast<std::size_t>(v);
}

std::string MetricOptions::get_string(std::string_view key, std::string fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return fallback;
}

const MetricDescriptor* Taxonomy::descriptor(std::string_view metric_iri) const {
  auto it = descriptors_.find(metric_iri);
  return it == descriptors_.end() ? nullptr : &it->second;
}

const MetricBinding* Taxonomy::binding(std::string_view metric_iri) const {
  auto it = bindings_.find(metric_iri);
  return it == bindings_.end() ? nullptr : &it->second;
}

const DimensionNode* Taxonomy::dimension(std::string_view dimension_iri) const {
  auto it = dimension_index_.find(dimension_iri);
  if (it == dimension_index_.end()) return nullptr;
  return &categories_[it->second.first].dimensions[it->second.second];
}

const CategoryNode* Taxonomy::category(std::string_view category_iri) const {
  auto it = category_index_.find(category_iri);
  return it == category_index_.end() ? nullptr : &categories_[it->second];
}

std::vector<std::string> Taxonomy::metric_iris() const {
  std::vector<std::string> out;
  for (const auto& c : categories_) {
    for (const auto& d : c.dimensions) {
      out.insert(out.end(), d.metrics.begin(), d.metrics.end());
    }
  }
  return out;
}

std::size_t Taxonomy::dimension_count() const noexcept { return dimension_index_.size(); }

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::invalid_config, what); }

std::string required_iri(const json& node, const std::string& where) {
  if (!node.is_object()) invalid(where + " must be an object");
  auto it = node.find("iri");
  if (it == node.end() || !it->is_string() || it->get<std::string>().empty()) {
    invalid(where + " is missing an 'iri'");
  }
  auto iri = it->get<std::string>();
  if (!is_valid_iri_text(iri)) invalid(where + " has a malformed IRI '" + iri + "'");
  return iri;
}

const json& array_field(const json& node, const char* key, const std::string& where) {
  static const json kEmpty = json::array();
  auto it = node.find(key);
  if (it == node.end()) return kEmpty;
  if (!it->is_array()) invalid(where + "." + key + " must be an array");
  return *it;
}

MetricOptions parse_options(const json& node, const std::string& where) {
  MetricOptions options;
  if (node.is_null()) return options;
  if (!node.is_object()) invalid(where + ".options must be an object");
  for (const auto& [key, value] : node.items()) {
    if (value.is_boolean()) {
      options.set(key, value.get<bool>());
    } else if (value.is_number()) {
      options.set(key, value.get<double>());
    } else if (value.is_string()) {
      options.set(key, value.get<std::string>());
    } else {
      invalid(where + ".options." + key + " must be a boolean, number or string");
    }
  }
  return options;
}

}  // namespace

Taxonomy load_taxonomy(std::string_view json_text, const std::filesystem::path& base_dir) {
  const auto doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) invalid("taxonomy is not a JSON object");
  if (doc.contains("metrics")) {
    throw Error(ErrorCode::orphan_metric, "metrics declared outside any dimension");
  }

  Taxonomy tax;
  std::set<std::string, std::less<>> seen;
  auto claim = [&](const std::string& iri, const std::string& where) {
    if (!seen.insert(iri).second) {
      throw Error(ErrorCode::duplicate_iri, "IRI <" + iri + "> declared more than once (" + where + ")");
    }
  };

  const auto& categories = array_field(doc, "categories", "taxonomy");
  for (std::size_t ci = 0; ci < categories.size(); ++ci) {
    const auto& cat = categories[ci];
    const auto cwhere = "categories[" + std::to_string(ci) + "]";
    CategoryNode category{required_iri(cat, cwhere), cat.value("label", ""), {}};
    claim(category.iri, cwhere);
    if (cat.contains("metrics")) {
      throw Error(ErrorCode::orphan_metric,
                  "category <" + category.iri + "> lists metrics without a dimension");
    }
    const auto& dims = array_field(cat, "dimensions", cwhere);
    if (dims.empty()) {
      throw Error(ErrorCode::empty_category, "category <" + category.iri + "> has no dimensions");
    }
    for (std::size_t di = 0; di < dims.size(); ++di) {
      const auto& dim = dims[di];
      const auto dwhere = cwhere + ".dimensions[" + std::to_string(di) + "]";
      DimensionNode dimension{required_iri(dim, dwhere), dim.value("label", ""), {}};
      claim(dimension.iri, dwhere);
      const auto& metrics = array_field(dim, "metrics", dwhere);
      if (metrics.empty()) {
        throw Error(ErrorCode::empty_dimension, "dimension <" + dimension.iri + "> has no metrics");
      }
      for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
        const auto& m = metrics[mi];
        const auto mwhere = dwhere + ".metrics[" + std::to_string(mi) + "]";
        MetricDescriptor desc;
        desc.metric_iri = required_iri(m, mwhere);
        claim(desc.metric_iri, mwhere);
        desc.label = m.value("label", "");
        desc.dimension_iri = dimension.iri;
        desc.category_iri = category.iri;
        desc.value_kind = parse_value_kind(m.value("kind", "real"));
        desc.normalized = m.value("normalized", false);
        if (desc.normalized && desc.value_kind == ValueKind::count) {
          invalid(mwhere + ": a count metric cannot be normalized");
        }

        MetricBinding binding;
        binding.metric_iri = desc.metric_iri;
        const auto impl = m.find("impl");
        if (impl == m.end() || !impl->is_object()) invalid(mwhere + " is missing 'impl'");
        if (auto b = impl->find("builtin"); b != impl->end() && b->is_string()) {
          binding.implementation = BuiltinImpl{b->get<std::string>()};
        } else if (auto l = impl->find("lqml"); l != impl->end() && l->is_string()) {
          std::filesystem::path path = l->get<std::string>();
          if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
          binding.implementation = LqmlImpl{path};
        } else {
          invalid(mwhere + ".impl needs a 'builtin' or 'lqml' string");
        }
        binding.options = parse_options(m.contains("options") ? m["options"] : json(), mwhere);

        dimension.metrics.push_back(desc.metric_iri);
        tax.bindings_.emplace(desc.metric_iri, std::move(binding));
        tax.descriptors_.emplace(desc.metric_iri, std::move(desc));
      }
      tax.dimension_index_.emplace(dimension.iri,
                                   std::pair{tax.categories_.size(), category.dimensions.size()});
      category.dimensions.push_back(std::move(dimension));
    }
    tax.category_index_.emplace(category.iri, tax.categories_.size());
    tax.categories_.push_back(std::move(category));
  }
  return tax;
}

Taxonomy load_taxonomy_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot read taxonomy file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_taxonomy(buffer.str(), path.parent_path());
}

std::string_view default_taxonomy_json() { return detail::kDefaultTaxonomyJson; }

const Taxonomy& default_taxonomy() {
  static const Taxonomy tax = load_taxonomy(default_taxonomy_json());
  return tax;
}

}  // namespace ldq
