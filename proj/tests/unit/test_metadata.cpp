#include <doctest.h>

#include <random>

#include "ldq/error.hpp"
#include "ldq/metadata.hpp"
#include "ldq/metrics.hpp"
#include "ldq/ntriples.hpp"
#include "ldq/time.hpp"
#include "support/support.hpp"

using namespace ldq;
using namespace std::chrono_literals;

namespace {

const std::string kDaq = "http://purl.org/eis/vocab/daq#";
const std::string kQpro = "http://purl.org/eis/vocab/qpro#";
const std::string kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

Timestamp at(int seconds) { return Timestamp{} + std::chrono::seconds(1'430'000'000 + seconds); }

Observation obs(std::string dataset, std::string metric, MetricValue v, Timestamp t) {
  return Observation{std::move(dataset), std::move(metric), v, t, std::nullopt};
}

std::size_t count_matching(const std::vector<Triple>& triples, const std::string& p, const std::string& o = {}) {
  return std::count_if(triples.begin(), triples.end(), [&](const Triple& t) {
    return t.predicate.value() == p && (o.empty() || t.object.value() == o);
  });
}

ErrorCode parse_error_code(const std::string& text) {
  try {
    parse_metadata(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parsed");
  return ErrorCode::invalid_config;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::string iri(const char* kind) { return "http://g" + std::to_string(rng() % 4) + ".org/" + kind + "/" + std::to_string(rng() % 50); }

  MetricValue value() {
    switch (rng() % 3) {
      case 0: return MetricValue::real(std::uniform_real_distribution<double>(0, 1)(rng));
      case 1: return MetricValue::boolean(rng() % 2);
      default: return MetricValue::count(rng() % 100000);
    }
  }

  Timestamp time() { return at(0) + std::chrono::microseconds(rng() % 1'000'000'000'000); }

  RdfTerm object() {
    switch (rng() % 4) {
      case 0: return RdfTerm::iri(iri("o"));
      case 1: return RdfTerm::literal("v \"q\"\n" + std::to_string(rng() % 9));
      case 2: return RdfTerm::lang_literal("hallo", "de");
      default: return RdfTerm::typed_literal(std::to_string(rng() % 99), "http://www.w3.org/2001/XMLSchema#integer");
    }
  }

  QualityReport report(const std::string& dataset) {
    QualityReport r;
    r.computed_on = dataset;
    r.iri = report_iri(dataset, time());
    const int n = rng() % 4;
    for (int i = 0; i < n; ++i) {
      QualityProblem p;
      p.described_by = iri("metric");
      if (rng() % 2) {
        ResourceList list;
        for (int k = 0, m = 1 + rng() % 5; k < m; ++k) list.push_back(RdfTerm::iri(iri("r")));
        p.thing = list;
      } else {
        ReifiedStatements st;
        for (int k = 0, m = 1 + rng() % 3; k < m; ++k) st.push_back(Triple{RdfTerm::iri(iri("s")), RdfTerm::iri(iri("p")), object()});
        p.thing = st;
      }
      if (rng() % 3 == 0) p.in_graph = iri("graph");
      if (rng() % 2) p.note = "note " + std::to_string(rng() % 3);
      r.problems.push_back(std::move(p));
    }
    return r;
  }
};

}  // namespace

TEST_SUITE("metadata") {
  TEST_CASE("two metrics give two observation nodes") {
    auto doc = emit_observations(std::vector{obs("http://d.org/ds", "http://m.org/a", MetricValue::real(0.5), at(0)),
                                             obs("http://d.org/ds", "http://m.org/b", MetricValue::real(1), at(0))});
    auto triples = parse_ntriples(doc).triples;
    CHECK(count_matching(triples, kRdf + "type", kDaq + "Observation") == 2);
    CHECK(count_matching(triples, kDaq + "value") == 2);
    CHECK(count_matching(triples, kDaq + "observedAt") == 2);
  }

  TEST_CASE("value literal typing") {
    auto doc = emit_observations(std::vector{obs("http://d.org/ds", "http://m.org/b", MetricValue::boolean(true), at(0)),
                                             obs("http://d.org/ds", "http://m.org/c", MetricValue::count(42), at(0))});
    CHECK(doc.find("\"true\"^^<http://www.w3.org/2001/XMLSchema#boolean>") != std::string::npos);
    CHECK(doc.find("^^<http://www.w3.org/2001/XMLSchema#dateTime>") != std::string::npos);
    auto back = parse_metadata(doc).observations;
    REQUIRE(back.size() == 2);
    CHECK(back[0].value == MetricValue::boolean(true));
    CHECK(back[1].value == MetricValue::count(42));
  }

  TEST_CASE("timestamps") {
    const auto t = at(0) + 123456us;
    CHECK(format_timestamp(t) == "2015-04-25T22:13:20.123456Z");
    CHECK(parse_timestamp(format_timestamp(t)) == t);
    CHECK(parse_timestamp("2015-04-25T22:13:20+00:00") == at(0));
    CHECK_FALSE(parse_timestamp("yesterday"));
  }

  TEST_CASE("emit, parse, emit is byte-identical") {
    Gen g(5);
    for (int round = 0; round < 50; ++round) {
      std::vector<Observation> os;
      for (int i = 0, n = g.rng() % 6; i < n; ++i) {
        auto o = obs(g.iri("ds"), g.iri("metric"), g.value(), g.time());
        if (g.rng() % 3 == 0) o.graph_iri = g.iri("graph");
        os.push_back(o);
      }
      const auto doc = emit_observations(os);
      const auto parsed = parse_metadata(doc);
      CHECK(emit_observations(parsed.observations) == doc);
      auto sorted = os;
      std::sort(sorted.begin(), sorted.end(), [](const Observation& a, const Observation& b) {
        return std::tie(a.dataset_iri, a.metric_iri, a.observed_at) < std::tie(b.dataset_iri, b.metric_iri, b.observed_at);
      });
      sorted.erase(std::unique(sorted.begin(), sorted.end(), [](const Observation& a, const Observation& b) {
                     return observation_iri(a) == observation_iri(b);
                   }), sorted.end());
      CHECK(parsed.observations == sorted);
    }
  }

  TEST_CASE("reports round-trip") {
    Gen g(17);
    for (int round = 0; round < 50; ++round) {
      const auto report = g.report(g.iri("ds"));
      const auto doc = emit_report(report);
      const auto parsed = parse_metadata(doc);
      REQUIRE(parsed.reports.size() == 1);
      CHECK(parsed.reports[0] == report);
      CHECK(emit_report(parsed.reports[0]) == doc);
      CHECK(to_canonical_ntriples(parse_ntriples(doc).triples) == doc);
    }
  }

  TEST_CASE("a resource list of three becomes an rdf:Seq") {
    QualityReport r{report_iri("http://d.org/ds", at(0)), "http://d.org/ds", {}};
    r.problems.push_back({"http://m.org/short", ResourceList{RdfTerm::iri("http://d.org/a"), RdfTerm::iri("http://d.org/b"),
                                                             RdfTerm::iri("http://d.org/c")}, "http://d.org/graph", ""});
    auto triples = parse_ntriples(emit_report(r)).triples;
    CHECK(count_matching(triples, kRdf + "type", kRdf + "Seq") == 1);
    CHECK(count_matching(triples, kRdf + "_1", "http://d.org/a") == 1);
    CHECK(count_matching(triples, kRdf + "_2", "http://d.org/b") == 1);
    CHECK(count_matching(triples, kRdf + "_3", "http://d.org/c") == 1);
    CHECK(count_matching(triples, kRdf + "_4") == 0);
    // all five report properties are present
    for (auto p : {"computedOn", "hasProblem", "isDescribedBy", "problematicThing", "inGraph"}) {
      CHECK_MESSAGE(count_matching(triples, kQpro + p) == 1, p);
    }
  }

  TEST_CASE("an empty report") {
    QualityReport r{report_iri("http://d.org/ds", at(0)), "http://d.org/ds", {}};
    auto triples = parse_ntriples(emit_report(r)).triples;
    CHECK(count_matching(triples, kQpro + "computedOn", "http://d.org/ds") == 1);
    CHECK(count_matching(triples, kQpro + "hasProblem") == 0);
    CHECK(parse_metadata(emit_report(r)).reports == std::vector{r});
  }

  TEST_CASE("reified statements come back as the same triples") {
    const Triple t{RdfTerm::iri("http://d.org/s"), RdfTerm::iri("http://d.org/p"), RdfTerm::lang_literal("x", "en")};
    QualityReport r{report_iri("http://d.org/ds", at(1)), "http://d.org/ds", {}};
    r.problems.push_back({"http://m.org/m", ReifiedStatements{t}, std::nullopt, "odd"});
    const auto doc = emit_report(r);
    auto triples = parse_ntriples(doc).triples;
    CHECK(count_matching(triples, kRdf + "type", kRdf + "Statement") == 1);
    CHECK(count_matching(triples, kRdf + "subject", "http://d.org/s") == 1);
    CHECK(std::get<ReifiedStatements>(parse_metadata(doc).reports.at(0).problems.at(0).thing).at(0) == t);
  }

  TEST_CASE("parsing edge cases") {
    auto empty = parse_metadata("");
    CHECK(empty.observations.empty());
    CHECK(empty.reports.empty());

    const std::string node = "<http://x.org/o1>";
    const std::string base = node + " <" + kRdf + "type> <" + kDaq + "Observation> .\n" + node + " <" + kDaq +
                             "computedOn> <http://d.org/ds> .\n" + node + " <" + kDaq + "metric> <http://m.org/a> .\n";
    const std::string value = node + " <" + kDaq + "value> \"0.5\"^^<http://www.w3.org/2001/XMLSchema#double> .\n";
    const std::string when = node + " <" + kDaq + "observedAt> \"2015-01-01T00:00:00Z\"^^<http://www.w3.org/2001/XMLSchema#dateTime> .\n";
    CHECK(parse_metadata(base + value + when).observations.size() == 1);
    CHECK(parse_error_code(base + value) == ErrorCode::malformed_metadata);
    CHECK(parse_error_code(base + when) == ErrorCode::malformed_metadata);

    auto extra = parse_metadata(base + value + when + node + " <http://x.org/unknown> \"1\" .\n");
    CHECK(extra.observations.size() == 1);
    CHECK(extra.warnings.size() == 1);
  }

  TEST_CASE("make_observations and make_report from finalized metrics") {
    InstantiationContext ctx;
    auto a = make_builtin("short-uris", {}, ctx, "http://m.org/short");
    auto b = make_builtin("human-readable-license", {}, ctx, "http://m.org/lic", ValueKind::boolean);
    std::vector<Triple> t = {test::triple("http://d.org/a?x=1", test::kEx, RdfTerm::literal("v")),
                             test::triple("http://d.org/b?x=1", test::kEx, RdfTerm::literal("v")),
                             test::triple("http://d.org/c", test::kEx, RdfTerm::literal("v"))};
    test::drive(*a, t, "http://d.org/ds");
    test::drive(*b, t, "http://d.org/ds");
    auto run = test::run_of(3, "http://d.org/ds");
    std::vector<const MetricInstance*> all{a.get(), b.get()};
    auto os = make_observations(run, all, "http://d.org/graph");
    REQUIRE(os.size() == 2);
    CHECK(os[0].metric_iri == "http://m.org/short");
    CHECK(os[0].value.as_double() == doctest::Approx(1.0 / 3));
    CHECK(os[1].value == MetricValue::boolean(false));
    CHECK(os[0].observed_at == run.finished_at);
    CHECK(os[0].graph_iri == "http://d.org/graph");

    auto report = make_report(run, all);
    CHECK(report.computed_on == "http://d.org/ds");
    // two short-uris problems share a note and merge; the license problem stands alone
    REQUIRE(report.problems.size() == 2);
    CHECK(report.problems[0].described_by == "http://m.org/short");
    CHECK(std::get<ResourceList>(report.problems[0].thing).size() == 2);
    CHECK(report.problems[1].described_by == "http://m.org/lic");
  }

  TEST_CASE("slugs") {
    const auto s = dataset_slug("http://example.org/data");
    CHECK(s.rfind("example-org-data-", 0) == 0);
    CHECK(s != dataset_slug("http://example.org/data/"));
    CHECK(s == dataset_slug("http://example.org/data"));
    for (char c : dataset_slug("http://x.org/ä b?c=d#e")) {
      CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'));
    }
  }
}

TEST_SUITE("metadata") {
  TEST_CASE("store: latest value wins") {
    MetadataStore store;
    store.append(std::vector{obs("http://d.org/x", "http://m.org/a", MetricValue::real(0.2), at(10)),
                             obs("http://d.org/x", "http://m.org/a", MetricValue::real(0.9), at(20)),
                             obs("http://d.org/x", "http://m.org/a", MetricValue::real(0.5), at(15)),
                             obs("http://d.org/y", "http://m.org/a", MetricValue::real(0.1), at(30)),
                             obs("http://d.org/x", "http://m.org/b", MetricValue::real(0.4), at(5))});
    auto latest = store.latest_values("http://d.org/x");
    CHECK(latest.size() == 2);
    CHECK(latest.at("http://m.org/a") == MetricValue::real(0.9));
    CHECK(latest.at("http://m.org/b") == MetricValue::real(0.4));
    CHECK(store.latest_values("http://d.org/y") == std::map<std::string, MetricValue>{{"http://m.org/a", MetricValue::real(0.1)}});
    CHECK(store.observations("http://d.org/x").size() == 4);
    CHECK_THROWS_AS(store.latest_values("http://d.org/nothing"), Error);
    CHECK_FALSE(store.latest("http://d.org/x", "http://m.org/zzz"));
  }

  TEST_CASE("store: appending never changes other pairs") {
    Gen g(23);
    MetadataStore store;
    std::map<std::pair<std::string, std::string>, Observation> before;
    for (int i = 0; i < 300; ++i) {
      auto o = obs(g.iri("ds"), g.iri("metric"), g.value(), g.time());
      std::map<std::pair<std::string, std::string>, std::optional<Observation>> snapshot;
      for (const auto& [key, _] : before) snapshot[key] = store.latest(key.first, key.second);
      store.append(std::vector{o});
      for (const auto& [key, prev] : snapshot) {
        if (key == std::pair{o.dataset_iri, o.metric_iri}) continue;
        CHECK(store.latest(key.first, key.second) == prev);
      }
      auto& slot = before[{o.dataset_iri, o.metric_iri}];
      if (slot.dataset_iri.empty() || slot.observed_at < o.observed_at) slot = o;
      CHECK(store.latest(o.dataset_iri, o.metric_iri)->observed_at == slot.observed_at);
    }
  }

  TEST_CASE("store: persistence and reload") {
    test::TempDir dir;
    {
      MetadataStore store(dir.path());
      QualityReport r{report_iri("http://d.org/x", at(1)), "http://d.org/x", {}};
      r.problems.push_back({"http://m.org/a", ResourceList{RdfTerm::iri("http://d.org/x/1")}, std::nullopt, "bad"});
      store.append(std::vector{obs("http://d.org/x", "http://m.org/a", MetricValue::real(0.2), at(1))}, r);
      store.append(std::vector{obs("http://d.org/x", "http://m.org/a", MetricValue::real(0.3), at(2)),
                               obs("http://d.org/x", "http://m.org/a", MetricValue::real(0.2), at(1))});
    }
    const auto slug = dataset_slug("http://d.org/x");
    CHECK(std::filesystem::exists(dir / (slug + ".quality.nt")));
    CHECK(std::filesystem::exists(dir / (slug + ".problems.nt")));
    MetadataStore again(dir.path());
    again.load();
    CHECK(again.datasets() == std::vector<std::string>{"http://d.org/x"});
    CHECK(again.observations("http://d.org/x").size() == 2);
    CHECK(again.latest_values("http://d.org/x").at("http://m.org/a") == MetricValue::real(0.3));
    CHECK(again.resolve(slug) == "http://d.org/x");
    CHECK(again.resolve("http://d.org/x") == "http://d.org/x");
    CHECK_FALSE(again.resolve("nope"));
    REQUIRE(again.reports("http://d.org/x").size() == 1);
    CHECK(again.reports("http://d.org/x")[0].problems[0].note == "bad");
  }

  TEST_CASE("store: a broken file is reported") {
    test::TempDir dir;
    test::write_file(dir / "bad.quality.nt", "<http://x.org/o> <" + kRdf + "type> <" + kDaq + "Observation> .\n");
    MetadataStore store(dir.path());
    try {
      store.load();
      FAIL("expected MalformedMetadata");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::malformed_metadata);
    }
  }
}
