#include <doctest.h>

#include <nlohmann/json.hpp>

#include <random>

#include "ldq/error.hpp"
#include "ldq/metadata.hpp"
#include "ldq/ranking.hpp"
#include "support/oracles.hpp"
#include "support/random_taxonomy.hpp"

using namespace ldq;

namespace {

// c1 -> {d1 -> {m1, m2}, d2 -> {m3, lang}}, c2 -> {d3 -> {m4 (boolean)}}
const char* kSmallTaxonomy = R"({"categories":[
  {"iri":"http://t.org/c1","dimensions":[
    {"iri":"http://t.org/d1","metrics":[
      {"iri":"http://t.org/m1","kind":"real","normalized":true,"impl":{"builtin":"short-uris"}},
      {"iri":"http://t.org/m2","kind":"real","normalized":true,"impl":{"builtin":"short-uris"}}]},
    {"iri":"http://t.org/d2","metrics":[
      {"iri":"http://t.org/m3","kind":"real","normalized":true,"impl":{"builtin":"short-uris"}},
      {"iri":"http://t.org/lang","kind":"real","normalized":false,"impl":{"builtin":"multiple-language-usage"}}]}]},
  {"iri":"http://t.org/c2","dimensions":[
    {"iri":"http://t.org/d3","metrics":[
      {"iri":"http://t.org/m4","kind":"boolean","normalized":true,"impl":{"builtin":"human-readable-license"}}]}]}]})";

const Taxonomy& small() {
  static const Taxonomy t = load_taxonomy(kSmallTaxonomy);
  return t;
}

ValueTable small_table() {
  auto row = [](double m1, double m2, double m3, bool m4) {
    return std::map<std::string, MetricValue>{{"http://t.org/m1", MetricValue::real(m1)},
                                              {"http://t.org/m2", MetricValue::real(m2)},
                                              {"http://t.org/m3", MetricValue::real(m3)},
                                              {"http://t.org/lang", MetricValue::real(3.5)},
                                              {"http://t.org/m4", MetricValue::boolean(m4)}};
  };
  return {{"http://d.org/a", row(0.9, 0.2, 0.4, true)},
          {"http://d.org/b", row(0.4, 0.6, 1.0, false)},
          {"http://d.org/c", row(0.5, 0.5, 0.5, true)}};
}

std::vector<std::string> order(const RankedResult& r) {
  std::vector<std::string> out;
  for (const auto& e : r.entries) out.push_back(e.dataset_iri);
  return out;
}

ErrorCode rank_error(const ValueTable& table, const Taxonomy& tax, const WeightConfig& w) {
  try {
    rank_values(table, tax, w);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("ranked");
  return ErrorCode::invalid_config;
}

void check_against_oracle(const test::RankingCase& c) {
  const auto tax = load_taxonomy(c.taxonomy_json);
  const auto got = rank_values(c.table, tax, c.weights);
  const auto want = oracle::rank(c.tree, c.plain_values, std::string(to_string(c.weights.level)), c.weights.weights);
  REQUIRE(got.entries.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(got.entries[i].dataset_iri == want[i].dataset);
    CHECK(std::abs(got.entries[i].total - want[i].total) <= 1e-12);
  }
}

}  // namespace

TEST_SUITE("ranking") {
  TEST_CASE("weighted value examples") {
    CHECK(weighted_metric_value(0.5, 1.0) == 0.5);
    CHECK(weighted_metric_value(0.123, 0.0) == 0.0);
    CHECK(weighted_metric_value(0.75, 0.8) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(weighted_dimension_value(std::vector{0.5, 1.0}, 0.8) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(weighted_dimension_value(std::vector{0.37}, 1.0) == 0.37);
    CHECK(weighted_dimension_value(std::vector{0.0, 0.0, 0.0}, 0.7) == 0.0);
    CHECK(weighted_category_value(std::vector{0.6, 0.2}) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(weighted_category_value(std::vector{0.25}) == 0.25);
    CHECK(weighted_category_value(std::vector{weighted_dimension_value(std::vector{0.9, 0.1}, 0.0)}) == 0.0);
    CHECK_THROWS_AS(weighted_dimension_value(std::vector<double>{}, 1.0), Error);
    CHECK_THROWS_AS(weighted_category_value(std::vector<double>{}), Error);
  }

  TEST_CASE("dimension value equals the mean of weighted metric values") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> v(1 + rng() % 12);
      for (auto& x : v) x = u(rng);
      const double theta = u(rng) * 3;
      double mean = 0;
      for (double x : v) mean += weighted_metric_value(x, theta);
      mean /= v.size();
      CHECK(std::abs(weighted_dimension_value(v, theta) - mean) <= 1e-12);
    }
  }

  TEST_CASE("two datasets on one metric") {
    ValueTable t{{"http://d.org/B", {{"http://t.org/m1", MetricValue::real(0.4)}}},
                 {"http://d.org/A", {{"http://t.org/m1", MetricValue::real(0.9)}}}};
    auto r = rank_values(t, small(), {WeightLevel::metric, {{"http://t.org/m1", 1.0}}});
    CHECK(order(r) == std::vector<std::string>{"http://d.org/A", "http://d.org/B"});
    CHECK(r.entries[0].total == 0.9);
    CHECK(r.entries[1].total == 0.4);
    REQUIRE(r.entries[0].breakdown.size() == 1);
    CHECK(r.entries[0].top_contributor()->node_iri == "http://t.org/m1");
  }

  TEST_CASE("ties break on IRI") {
    ValueTable t{{"http://d.org/z", {{"http://t.org/m1", MetricValue::real(0.5)}}},
                 {"http://d.org/a", {{"http://t.org/m1", MetricValue::real(0.5)}}},
                 {"http://d.org/m", {{"http://t.org/m1", MetricValue::real(0.5)}}}};
    auto r = rank_values(t, small(), {WeightLevel::metric, {{"http://t.org/m1", 1.0}}});
    CHECK(order(r) == std::vector<std::string>{"http://d.org/a", "http://d.org/m", "http://d.org/z"});
  }

  TEST_CASE("levels on the small taxonomy") {
    const auto table = small_table();
    auto m = rank_values(table, small(), {WeightLevel::metric, {{"http://t.org/m1", 1.0}, {"http://t.org/m4", 0.5}}});
    CHECK(order(m) == std::vector<std::string>{"http://d.org/a", "http://d.org/c", "http://d.org/b"});
    CHECK(m.entries[0].total == doctest::Approx(1.4).epsilon(1e-12));

    auto d = rank_values(table, small(), {WeightLevel::dimension, {{"http://t.org/d1", 0.8}, {"http://t.org/d2", 0.5}}});
    // a: 0.8*0.55 + 0.5*0.4 = 0.64, b: 0.8*0.5 + 0.5 = 0.9, c: 0.4 + 0.25 = 0.65
    CHECK(order(d) == std::vector<std::string>{"http://d.org/b", "http://d.org/c", "http://d.org/a"});
    CHECK(d.entries[0].total == doctest::Approx(0.9).epsilon(1e-12));
    CHECK_FALSE(d.warnings.empty());  // the language metric is left out

    auto c = rank_values(table, small(), {WeightLevel::category, {{"http://t.org/c1", 1.0}, {"http://t.org/c2", 0.2}}});
    // a: (0.55 + 0.4)/2 + 0.2 = 0.675, b: (0.5 + 1)/2 + 0 = 0.75, c: 0.5 + 0.2 = 0.7
    CHECK(order(c) == std::vector<std::string>{"http://d.org/b", "http://d.org/c", "http://d.org/a"});
    CHECK(c.entries[2].total == doctest::Approx(0.675).epsilon(1e-12));
  }

  TEST_CASE("empty weights give zero totals in IRI order") {
    auto r = rank_values(small_table(), small(), {WeightLevel::metric, {}});
    CHECK(order(r) == std::vector<std::string>{"http://d.org/a", "http://d.org/b", "http://d.org/c"});
    for (const auto& e : r.entries) CHECK(e.total == 0.0);
  }

  TEST_CASE("errors") {
    auto table = small_table();
    CHECK(rank_error(table, small(), {WeightLevel::metric, {{"http://t.org/d1", 1.0}}}) == ErrorCode::invalid_weight_target);
    CHECK(rank_error(table, small(), {WeightLevel::dimension, {{"http://t.org/nope", 1.0}}}) ==
          ErrorCode::invalid_weight_target);
    CHECK(rank_error(table, small(), {WeightLevel::metric, {{"http://t.org/m1", -0.1}}}) == ErrorCode::invalid_weight);
    table["http://d.org/b"].erase("http://t.org/m2");
    CHECK(rank_error(table, small(), {WeightLevel::dimension, {{"http://t.org/d1", 1.0}}}) ==
          ErrorCode::missing_observation);
    try {
      rank_values(table, small(), {WeightLevel::metric, {{"http://t.org/m2", 1.0}}});
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("http://d.org/b") != std::string::npos);
      CHECK(std::string(e.what()).find("http://t.org/m2") != std::string::npos);
    }
    // zero weight: no observation needed
    CHECK(rank_values(table, small(), {WeightLevel::metric, {{"http://t.org/m2", 0.0}}}).entries.size() == 3);
  }

  TEST_CASE("weight files") {
    auto w = parse_weight_config(R"({"level":"dimension","weights":{"http://t.org/d1":0.8}})");
    CHECK(w.level == WeightLevel::dimension);
    CHECK(w.weights.at("http://t.org/d1") == 0.8);
    CHECK(parse_weight_config(to_json(w)).weights == w.weights);
    CHECK(parse_weight_config(R"({"level":"metric"})").weights.empty());
    auto code = [](const char* text) {
      try {
        parse_weight_config(text);
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::lqml_error;
    };
    CHECK(code(R"({"level":"dimension","weights":{"x":-1}})") == ErrorCode::invalid_weight);
    CHECK(code(R"({"level":"dimension","weights":{"x":"high"}})") == ErrorCode::invalid_weight);
    CHECK(code(R"({"level":"galaxy","weights":{}})") == ErrorCode::invalid_config);
    CHECK(code("not json") == ErrorCode::invalid_config);
  }

  TEST_CASE("random taxonomies against the oracle") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 60; ++i) {
      for (auto level : {WeightLevel::metric, WeightLevel::dimension, WeightLevel::category}) {
        check_against_oracle(test::random_ranking_case(rng, level));
      }
    }
  }

  TEST_CASE("scaling every weight keeps the order") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 40; ++i) {
      for (auto level : {WeightLevel::metric, WeightLevel::dimension, WeightLevel::category}) {
        auto c = test::random_ranking_case(rng, level);
        const auto tax = load_taxonomy(c.taxonomy_json);
        const auto base = rank_values(c.table, tax, c.weights);
        for (double k : {0.5, 3.0, 1e3}) {
          auto scaled = c.weights;
          for (auto& [_, w] : scaled.weights) w *= k;
          const auto r = rank_values(c.table, tax, scaled);
          CHECK(order(r) == order(base));
          for (std::size_t j = 0; j < r.entries.size(); ++j) {
            CHECK(r.entries[j].total == doctest::Approx(k * base.entries[j].total).epsilon(1e-9));
          }
        }
      }
    }
  }

  TEST_CASE("raising a value never lowers the rank") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
      auto c = test::random_ranking_case(rng, WeightLevel(i % 3));
      const auto tax = load_taxonomy(c.taxonomy_json);
      const auto before = order(rank_values(c.table, tax, c.weights));
      auto& row = c.table.begin()->second;
      const auto& target = c.table.begin()->first;
      for (auto& [metric, v] : row) {
        if (tax.descriptor(metric)->normalized && v.kind() == ValueKind::real) {
          v = MetricValue::real(std::min(1.0, v.as_double() + 0.3));
          break;
        }
      }
      const auto after = order(rank_values(c.table, tax, c.weights));
      auto pos = [&](const std::vector<std::string>& o) { return std::find(o.begin(), o.end(), target) - o.begin(); };
      CHECK(pos(after) <= pos(before));
    }
  }

  TEST_CASE("order of insertion and enumeration does not matter") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
      auto c = test::random_ranking_case(rng, WeightLevel(i % 3));
      const auto tax = load_taxonomy(c.taxonomy_json);
      // same values through a store fed in shuffled order
      std::vector<Observation> obs;
      for (const auto& [ds, row] : c.table) {
        for (const auto& [m, v] : row) obs.push_back({ds, m, v, Timestamp{} + std::chrono::seconds(100), std::nullopt});
      }
      std::shuffle(obs.begin(), obs.end(), rng);
      MetadataStore store;
      for (const auto& o : obs) store.append(std::vector{o});
      const auto a = rank_values(c.table, tax, c.weights);
      const auto b = rank_datasets(store, tax, c.weights);
      CHECK(order(a) == order(b));
      for (std::size_t j = 0; j < a.entries.size(); ++j) CHECK(a.entries[j].total == b.entries[j].total);

      // the same taxonomy with every dimension's metrics listed in reverse
      auto j = nlohmann::json::parse(c.taxonomy_json);
      for (auto& cat : j["categories"]) {
        for (auto& dim : cat["dimensions"]) {
          auto ms = dim["metrics"];
          std::reverse(ms.begin(), ms.end());
          dim["metrics"] = ms;
        }
      }
      const auto r = rank_values(c.table, load_taxonomy(j.dump()), c.weights);
      CHECK(order(r) == order(a));
      for (std::size_t k = 0; k < a.entries.size(); ++k) {
        CHECK(r.entries[k].total == doctest::Approx(a.entries[k].total).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("totals are bounded by the number of weighted top-level nodes") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
      auto c = test::random_ranking_case(rng, WeightLevel(i % 3));
      const auto r = rank_values(c.table, load_taxonomy(c.taxonomy_json), c.weights);
      for (const auto& e : r.entries) {
        CHECK(e.total >= 0.0);
        CHECK(e.total <= static_cast<double>(c.weights.weights.size()) + 1e-12);
      }
    }
  }

  TEST_CASE("JSON output") {
    auto r = rank_values(small_table(), small(), {WeightLevel::metric, {{"http://t.org/m1", 1.0}}});
    auto j = nlohmann::json::parse(to_json(r));
    CHECK(j["level"] == "metric");
    REQUIRE(j["ranking"].size() == 3);
    CHECK(j["ranking"][0]["dataset"] == "http://d.org/a");
    CHECK(j["ranking"][0]["rank"] == 1);
    CHECK(j["ranking"][0]["total"].get<double>() == 0.9);
  }
}
