#include <doctest.h>

#include <set>
#include <sstream>

#include "ldq/error.hpp"
#include "ldq/ntriples.hpp"
#include "ldq/stream.hpp"
#include "support/support.hpp"

using namespace ldq;
using ldq::test::TempDir;

namespace {

class CountingSink final : public MetricInstance {
 public:
  CountingSink() : MetricInstance("urn:test:counting", ValueKind::count) {}
  std::vector<Triple> seen;
  std::uint64_t finalized_total = 0;

 protected:
  void on_accept(const Triple& t) override { seen.push_back(t); }
  MetricValue on_finalize(const AssessmentRun& run) override {
    finalized_total = run.total_triples;
    return MetricValue::count(static_cast<std::int64_t>(seen.size()));
  }
};

class ExplodingSink final : public MetricInstance {
 public:
  ExplodingSink() : MetricInstance("urn:test:boom", ValueKind::real) {}

 protected:
  void on_accept(const Triple&) override { throw std::runtime_error("boom"); }
  MetricValue on_finalize(const AssessmentRun&) override { return MetricValue::real(0); }
};

std::string dump_of(std::size_t n) {
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    text += "<http://example.org/s" + std::to_string(i % 37) + "> <http://example.org/p> \"" +
            std::to_string(i) + "\" .\n";
  }
  return text;
}

}  // namespace

TEST_SUITE("ntriples") {
  TEST_CASE("empty input yields nothing") {
    auto doc = parse_ntriples("");
    CHECK(doc.triples.empty());
    CHECK(doc.errors.empty());
  }

  TEST_CASE("language-tagged literal") {
    auto doc = parse_ntriples("<http://a> <http://p> \"x\"@en .\n");
    REQUIRE(doc.triples.size() == 1);
    const auto& t = doc.triples[0];
    CHECK(t.subject == RdfTerm::iri("http://a"));
    CHECK(t.predicate == RdfTerm::iri("http://p"));
    CHECK(t.object == RdfTerm::lang_literal("x", "en"));
  }

  TEST_CASE("missing object is a line error") {
    auto doc = parse_ntriples("<http://a> <http://p> .\n");
    CHECK(doc.triples.empty());
    REQUIRE(doc.errors.size() == 1);
    CHECK(doc.errors[0].line == 1);
  }

  TEST_CASE("comments and blank lines are skipped") {
    auto doc = parse_ntriples("# header\n\n   \n<http://a> <http://p> <http://o> . # trailing\n");
    CHECK(doc.triples.size() == 1);
    CHECK(doc.errors.empty());
  }

  TEST_CASE("typed literals, blank nodes and escapes") {
    auto doc = parse_ntriples(
        "_:b1 <http://p> \"4\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n"
        "<http://a> <http://p> \"line\\nbreak \\\"q\\\" \\u00e9\" .\n");
    REQUIRE(doc.triples.size() == 2);
    CHECK(doc.triples[0].subject.is_blank());
    CHECK(doc.triples[0].object.datatype() == "http://www.w3.org/2001/XMLSchema#integer");
    CHECK(doc.triples[1].object.value() == "line\nbreak \"q\" \xc3\xa9");
  }

  TEST_CASE("literal subject and non-IRI predicate are rejected") {
    auto doc = parse_ntriples("\"x\" <http://p> <http://o> .\n<http://a> _:p <http://o> .\n");
    CHECK(doc.triples.empty());
    CHECK(doc.errors.size() == 2);
    CHECK(doc.errors[1].line == 2);
  }

  TEST_CASE("k malformed lines among n good ones") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
      const std::size_t n = rng() % 50, k = rng() % 10;
      std::vector<std::string> lines;
      for (std::size_t i = 0; i < n; ++i) lines.push_back("<http://s" + std::to_string(i) + "> <http://p> \"v\" .");
      for (std::size_t i = 0; i < k; ++i) lines.push_back("<http://broken" + std::to_string(i) + "> <http://p>");
      std::shuffle(lines.begin(), lines.end(), rng);
      std::string text;
      for (const auto& l : lines) text += l + "\n";
      auto doc = parse_ntriples(text);
      CHECK(doc.triples.size() == n);
      CHECK(doc.errors.size() == k);
    }
  }

  TEST_CASE("serialisation round-trips") {
    const std::string text =
        "<http://a> <http://p> \"tab\\there\"@en-GB .\n"
        "_:x <http://p> \"1.5\"^^<http://www.w3.org/2001/XMLSchema#double> .\n"
        "<http://a> <http://p> <http://b> .\n";
    auto first = parse_ntriples(text).triples;
    auto again = parse_ntriples(to_canonical_ntriples(first)).triples;
    std::sort(first.begin(), first.end());
    std::sort(again.begin(), again.end());
    CHECK(first == again);
  }

  TEST_CASE("streaming reader reports line numbers") {
    std::istringstream in("<http://a> <http://p> \"x\" .\nnonsense\n<http://b> <http://p> \"y\" .\n");
    NTriplesReader reader(in);
    int triples = 0;
    std::vector<std::size_t> bad;
    while (auto item = reader.next()) {
      if (std::holds_alternative<Triple>(*item)) {
        ++triples;
      } else {
        bad.push_back(std::get<LineError>(*item).line);
      }
    }
    CHECK(triples == 2);
    CHECK(bad == std::vector<std::size_t>{2});
  }
}

TEST_SUITE("url") {
  TEST_CASE("pay-level domains") {
    CHECK(pay_level_domain("http://dbpedia.org/resource/Berlin") == "dbpedia.org");
    CHECK(pay_level_domain("http://www.bbc.co.uk/things/1") == "bbc.co.uk");
    CHECK(pay_level_domain("https://a.b.example.com:8443/x") == "example.com");
    CHECK(pay_level_domain("http://127.0.0.1:8080/x") == "127.0.0.1");
    CHECK(pay_level_domain("urn:isbn:123") == "");
  }

  TEST_CASE("parse and resolve") {
    auto u = parse_url("http://Example.org:81/a/b?q=1#frag");
    REQUIRE(u);
    CHECK(u->host == "example.org");
    CHECK(u->port == 81);
    CHECK(u->target() == "/a/b?q=1");
    CHECK(u->fragment == "frag");
    CHECK(resolve_reference(*u, "/doc") == "http://example.org:81/doc");
    CHECK(resolve_reference(*u, "c") == "http://example.org:81/a/c");
    CHECK(resolve_reference(*u, "https://other.org/x") == "https://other.org/x");
  }
}

TEST_SUITE("stream") {
  TEST_CASE("empty dump finalizes every sink with zero accepts") {
    TempDir dir;
    test::write_file(dir / "empty.nt", "");
    CountingSink a, b, c;
    std::vector<MetricInstance*> sinks{&a, &b, &c};
    auto run = stream_dataset(DumpFile{dir / "empty.nt"}, sinks, {"http://example.org/d"});
    CHECK(run.total_triples == 0);
    for (auto* s : sinks) {
      CHECK(s->state() == MetricInstance::State::finalized);
      CHECK(s->accept_count() == 0);
    }
  }

  TEST_CASE("fan-out delivers identical streams") {
    TempDir dir;
    test::write_file(dir / "d.nt", dump_of(1000));
    CountingSink a, b;
    std::vector<MetricInstance*> sinks{&a, &b};
    StreamOptions options;
    options.queue_capacity = 16;
    options.batch_size = 7;
    auto run = stream_dataset(DumpFile{dir / "d.nt"}, sinks, options);
    CHECK(run.total_triples == 1000);
    CHECK(a.accept_count() == 1000);
    CHECK(b.accept_count() == 1000);
    CHECK(a.seen == b.seen);
    CHECK(a.finalized_total == 1000);
  }

  TEST_CASE("two runs over one dump see the same sequence") {
    TempDir dir;
    test::write_file(dir / "d.nt", dump_of(300));
    CountingSink a, b;
    std::vector<MetricInstance*> one{&a}, two{&b};
    stream_dataset(DumpFile{dir / "d.nt"}, one);
    stream_dataset(DumpFile{dir / "d.nt"}, two);
    CHECK(a.seen == b.seen);
  }

  TEST_CASE("malformed lines are recorded and skipped") {
    TempDir dir;
    test::write_file(dir / "d.nt", "<http://a> <http://p> \"1\" .\nbad line\n<http://a> <http://p> \"2\" .\n");
    CountingSink a;
    std::vector<MetricInstance*> sinks{&a};
    auto run = stream_dataset(DumpFile{dir / "d.nt"}, sinks);
    CHECK(run.total_triples == 2);
    REQUIRE(run.parse_errors.size() == 1);
    CHECK(run.parse_errors[0].line == 2);
  }

  TEST_CASE("missing dump is SourceUnreadable") {
    CountingSink a;
    std::vector<MetricInstance*> sinks{&a};
    try {
      stream_dataset(DumpFile{"/nonexistent/file.nt"}, sinks);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::source_unreadable);
    }
    CHECK(a.state() == MetricInstance::State::ready);
  }

  TEST_CASE("a throwing sink aborts the run without finalizing anyone") {
    TempDir dir;
    test::write_file(dir / "d.nt", dump_of(50));
    CountingSink good;
    ExplodingSink bad;
    std::vector<MetricInstance*> sinks{&good, &bad};
    try {
      stream_dataset(DumpFile{dir / "d.nt"}, sinks);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::sink_panicked);
    }
    CHECK(good.state() != MetricInstance::State::finalized);
  }
}

TEST_SUITE("endpoint") {
  TEST_CASE("page query text") {
    CHECK(page_query(10, 20) == "SELECT ?s ?p ?o WHERE { ?s ?p ?o } ORDER BY ?s ?p ?o LIMIT 10 OFFSET 20");
  }

  TEST_CASE("25 triples at page size 10 take 3 requests") {
    test::MockSparql sparql(test::synthetic_triples(25, 3));
    BasicHttpClient http;
    Endpoint ep{sparql.url(), 10};
    std::vector<Triple> got;
    const auto requests = fetch_endpoint_pages(ep, http, [&](Triple&& t) { got.push_back(std::move(t)); });
    CHECK(requests == 3);
    CHECK(sparql.requests() == 3);
    CHECK(got.size() == 25);
  }

  TEST_CASE("empty endpoint: one request, nothing streamed") {
    test::MockSparql sparql({});
    BasicHttpClient http;
    std::size_t n = 0;
    CHECK(fetch_endpoint_pages({sparql.url(), 10}, http, [&](Triple&&) { ++n; }) == 1);
    CHECK(n == 0);
  }

  TEST_CASE("paging is complete and duplicate free") {
    for (std::size_t n : {0u, 1u, 9u, 10u, 11u, 40u, 57u}) {
      const auto triples = test::synthetic_triples(n, n + 11);
      std::set<Triple> expected(triples.begin(), triples.end());
      test::MockSparql sparql(std::vector<Triple>(expected.begin(), expected.end()));
      BasicHttpClient http;
      std::vector<Triple> got;
      const auto requests =
          fetch_endpoint_pages({sparql.url(), 10}, http, [&](Triple&& t) { got.push_back(std::move(t)); });
      const std::size_t m = expected.size();
      CHECK(requests == m / 10 + 1);
      std::set<Triple> unique(got.begin(), got.end());
      CHECK(unique.size() == got.size());
      CHECK(unique == expected);
    }
  }

  TEST_CASE("page size is bounded by the truncation limit") {
    BasicHttpClient http;
    Endpoint ep{"http://127.0.0.1:1/sparql", 10'001};
    CHECK_THROWS_AS(fetch_endpoint_pages(ep, http, [](Triple&&) {}), Error);
    ep.page_size = 0;
    try {
      fetch_endpoint_pages(ep, http, [](Triple&&) {});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_page_size);
    }
  }

  TEST_CASE("more rows than requested means truncation is suspected") {
    // This endpoint ignores LIMIT up to its own cap.
    test::MockSparql sparql(test::synthetic_triples(30, 5), 10'000);
    struct Greedy final : HttpClient {
      std::string url;
      HttpResponse send(const HttpRequest& r) override {
        auto req = r;
        req.url = url + "?query=SELECT";  // no LIMIT: whole set
        return BasicHttpClient().send(req);
      }
    } greedy;
    greedy.url = sparql.url();
    try {
      fetch_endpoint_pages({sparql.url(), 10}, greedy, [](Triple&&) {});
      FAIL("expected truncation_suspected");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::truncation_suspected);
    }
  }

  TEST_CASE("transient failures are retried") {
    test::MockSparql sparql(test::synthetic_triples(5, 1));
    sparql.fail_next(2);
    BasicHttpClient http;
    Endpoint ep{sparql.url(), 10};
    ep.initial_backoff = std::chrono::milliseconds(1);
    std::size_t n = 0;
    CHECK(fetch_endpoint_pages(ep, http, [&](Triple&&) { ++n; }) == 1);
    CHECK(n == 5);
    CHECK(sparql.requests() == 3);
  }

  TEST_CASE("retry budget exhausted is a TransportError") {
    test::MockSparql sparql(test::synthetic_triples(5, 1));
    sparql.fail_next(10);
    BasicHttpClient http;
    Endpoint ep{sparql.url(), 10};
    ep.initial_backoff = std::chrono::milliseconds(1);
    try {
      fetch_endpoint_pages(ep, http, [](Triple&&) {});
      FAIL("expected transport_error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::transport_error);
    }
    CHECK(sparql.requests() == 3);
  }

  TEST_CASE("decoding SPARQL JSON terms") {
    auto triples = decode_select_results(R"({"results":{"bindings":[
      {"s":{"type":"uri","value":"http://a"},"p":{"type":"uri","value":"http://p"},
       "o":{"type":"literal","value":"x","xml:lang":"de"}},
      {"s":{"type":"bnode","value":"b0"},"p":{"type":"uri","value":"http://p"},
       "o":{"type":"typed-literal","value":"1","datatype":"http://www.w3.org/2001/XMLSchema#integer"}},
      {"s":{"type":"literal","value":"bad"},"p":{"type":"uri","value":"http://p"},
       "o":{"type":"uri","value":"http://o"}}]}})");
    REQUIRE(triples.size() == 2);
    CHECK(triples[0].object == RdfTerm::lang_literal("x", "de"));
    CHECK(triples[1].subject == RdfTerm::blank("b0"));
  }

  TEST_CASE("endpoint source through stream_dataset") {
    const auto triples = test::synthetic_triples(123, 9);
    test::MockSparql sparql(triples);
    CountingSink a;
    std::vector<MetricInstance*> sinks{&a};
    StreamOptions options;
    options.http = std::make_shared<BasicHttpClient>();
    auto run = stream_dataset(Endpoint{sparql.url(), 50}, sinks, options);
    std::set<Triple> expected(triples.begin(), triples.end());
    CHECK(run.total_triples == expected.size());
    CHECK(std::set<Triple>(a.seen.begin(), a.seen.end()) == expected);
  }
}
