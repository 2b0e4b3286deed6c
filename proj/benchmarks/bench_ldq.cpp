#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "ldq/metrics.hpp"
#include "ldq/ntriples.hpp"
#include "ldq/ranking.hpp"
#include "ldq/sketch/bloom.hpp"
#include "ldq/sketch/graph.hpp"
#include "ldq/sketch/reservoir.hpp"
#include "ldq/stream.hpp"

using namespace ldq;

namespace {

std::vector<Triple> synthetic(std::size_t n, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<Triple> out;
  out.reserve(n);
  const std::size_t subjects = std::max<std::size_t>(1, n / 8);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = "http://data" + std::to_string(rng() % 5) + ".example.org/r/" + std::to_string(rng() % subjects);
    auto p = "http://example.org/vocab#p" + std::to_string(rng() % 20);
    RdfTerm o = rng() % 3 == 0 ? RdfTerm::iri("http://data" + std::to_string(rng() % 5) + ".example.org/r/" +
                                              std::to_string(rng() % subjects))
                               : RdfTerm::literal("value " + std::to_string(rng() % 100000));
    out.push_back(Triple{RdfTerm::iri(std::move(s)), RdfTerm::iri(std::move(p)), std::move(o)});
  }
  return out;
}

std::string as_text(const std::vector<Triple>& triples) {
  std::string text;
  for (const auto& t : triples) text += to_ntriples(t) + "\n";
  return text;
}

}  // namespace

static void BM_ParseNTriples(benchmark::State& state) {
  const auto text = as_text(synthetic(state.range(0)));
  for (auto _ : state) {
    auto doc = parse_ntriples(text);
    benchmark::DoNotOptimize(doc.triples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseNTriples)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_Metric(benchmark::State& state, const char* name) {
  const auto triples = synthetic(state.range(0));
  InstantiationContext ctx;
  ctx.dataset_iri = "http://example.org/dataset";
  for (auto _ : state) {
    auto m = make_builtin(name, {}, ctx);
    for (const auto& t : triples) m->accept(t);
    AssessmentRun run;
    run.dataset_iri = ctx.dataset_iri;
    run.total_triples = triples.size();
    m->finalize(run);
    benchmark::DoNotOptimize(m->value());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Metric, short_uris, "short-uris")->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, low_blank_node_usage, "low-blank-node-usage")->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, extensional_conciseness, "extensional-conciseness")->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, hash_vs_slash, "hash-vs-slash-uris")->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metric, links_external, "links-to-external-providers")->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_BloomInsert(benchmark::State& state) {
  std::vector<std::string> keys;
  for (int i = 0; i < 4096; ++i) keys.push_back("http://example.org/r/" + std::to_string(i));
  auto bloom = sketch::BloomFilter::for_capacity(state.range(0), 0.01);
  std::size_t i = 0;
  for (auto _ : state) bloom.insert(keys[i++ & 4095]);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BloomInsert)->Arg(10'000)->Arg(1'000'000);

static void BM_BloomQuery(benchmark::State& state) {
  auto bloom = sketch::BloomFilter::for_capacity(state.range(0), 0.01);
  for (std::int64_t i = 0; i < state.range(0); ++i) bloom.insert("k" + std::to_string(i));
  std::vector<std::string> probes;
  for (int i = 0; i < 4096; ++i) probes.push_back("q" + std::to_string(i));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bloom.contains(probes[i++ & 4095]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BloomQuery)->Arg(10'000)->Arg(1'000'000);

static void BM_ReservoirAdd(benchmark::State& state) {
  sketch::Reservoir<std::uint64_t> res(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(res.add(i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ReservoirAdd)->Arg(100)->Arg(10'000);

static void BM_ClusteringEstimate(benchmark::State& state) {
  std::mt19937_64 rng(3);
  sketch::StreamedGraph g;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (std::size_t v = 0; v < n; ++v) g.intern(std::to_string(v));
  for (std::size_t e = 0; e < 4 * n; ++e) g.add_edge(rng() % n, rng() % n);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sketch::clustering_coefficient_estimate(g, 10 * n, seed++));
  }
}
BENCHMARK(BM_ClusteringEstimate)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMicrosecond);

static void BM_RankValues(benchmark::State& state) {
  const auto& taxonomy = default_taxonomy();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ValueTable table;
  for (std::int64_t d = 0; d < state.range(0); ++d) {
    for (const auto& iri : taxonomy.metric_iris()) {
      const auto* desc = taxonomy.descriptor(iri);
      table["http://example.org/ds" + std::to_string(d)][iri] =
          desc->value_kind == ValueKind::boolean ? MetricValue::boolean(u(rng) < 0.5) : MetricValue::real(u(rng));
    }
  }
  WeightConfig weights;
  weights.level = WeightLevel::dimension;
  for (const auto& c : taxonomy.categories()) {
    for (const auto& d : c.dimensions) weights.weights[d.iri] = u(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(rank_values(table, taxonomy, weights));
}
BENCHMARK(BM_RankValues)->Arg(10)->Arg(1'000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
