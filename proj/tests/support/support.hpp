#pragma once

#include <httplib.h>
#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ldq/error.hpp"
#include "ldq/http.hpp"
#include "ldq/metric.hpp"
#include "ldq/ntriples.hpp"
#include "ldq/rdf.hpp"
#include "ldq/stream.hpp"
#include "ldq/url.hpp"

namespace ldq::test {

inline std::vector<Triple> nt(std::string_view text) {
  auto doc = parse_ntriples(text);
  if (!doc.errors.empty()) {
    throw std::runtime_error("bad fixture line " + std::to_string(doc.errors[0].line) + ": " +
                             doc.errors[0].message);
  }
  return std::move(doc.triples);
}

inline Triple triple(std::string s, std::string p, RdfTerm o) {
  return Triple{RdfTerm::iri(std::move(s)), RdfTerm::iri(std::move(p)), std::move(o)};
}

inline AssessmentRun run_of(std::uint64_t total, std::string dataset = "http://example.org/dataset") {
  AssessmentRun run;
  run.dataset_iri = std::move(dataset);
  run.total_triples = total;
  run.started_at = run.finished_at = now_utc();
  return run;
}

/// Drives one instance through its whole lifecycle.
inline const MetricValue& drive(MetricInstance& m, const std::vector<Triple>& triples,
                                std::string dataset = "http://example.org/dataset") {
  for (const auto& t : triples) m.accept(t);
  m.finalize(run_of(triples.size(), std::move(dataset)));
  return m.value();
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ldq-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_ntriples(const std::filesystem::path& path, const std::vector<Triple>& triples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  for (const auto& t : triples) {
    out << to_ntriples(t) << '\n';
  }
}

// --- scripted web ----------------------------------------------------------

struct Route {
  int status = 200;
  std::string content_type;
  std::string location;  // for 3xx
  int delay_ms = 0;
};

/// Path -> scripted answer. Paths not listed answer 404.
using RouteTable = std::map<std::string, Route>;

/// In-process HttpClient answering from a route table; logs every request.
class FakeHttp final : public HttpClient {
 public:
  explicit FakeHttp(RouteTable routes = {}) : routes_(std::move(routes)) {}

  void set(std::string path, Route route) {
    std::lock_guard lock(mutex_);
    routes_[std::move(path)] = std::move(route);
  }

  HttpResponse send(const HttpRequest& request) override {
    std::lock_guard lock(mutex_);
    log_.push_back(request.method + " " + request.url);
    const auto url = parse_url(request.url);
    if (!url) throw Error(ErrorCode::transport_error, "bad url " + request.url);
    auto it = routes_.find(url->path);
    if (it == routes_.end()) return HttpResponse{404, "text/plain", "", ""};
    if (it->second.status == -1) throw Error(ErrorCode::http_timeout, "scripted timeout");
    return HttpResponse{it->second.status, it->second.content_type, it->second.location, ""};
  }

  std::vector<std::string> log() const {
    std::lock_guard lock(mutex_);
    return log_;
  }
  std::size_t requests() const {
    std::lock_guard lock(mutex_);
    return log_.size();
  }

 private:
  mutable std::mutex mutex_;
  RouteTable routes_;
  std::vector<std::string> log_;
};

/// A real HTTP server on 127.0.0.1 and an ephemeral port, run on a
/// background thread for the lifetime of the object.
class ServerThread {
 public:
  ServerThread() = default;
  ServerThread(const ServerThread&) = delete;
  ServerThread& operator=(const ServerThread&) = delete;
  ~ServerThread() { stop(); }

  httplib::Server& server() { return server_; }

  void start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind mock server");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }

  int port() const { return port_; }
  std::string base() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

/// Route table served over real HTTP. HEAD is answered by the GET handler.
class MockWeb {
 public:
  explicit MockWeb(RouteTable routes) : routes_(std::move(routes)) {
    server_.server().Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mutex_);
        log_.push_back(req.method + " " + req.path);
      }
      auto it = routes_.find(req.path);
      if (it == routes_.end()) {
        res.status = 404;
        return;
      }
      if (it->second.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(it->second.delay_ms));
      res.status = it->second.status;
      if (!it->second.location.empty()) res.set_header("Location", it->second.location);
      if (!it->second.content_type.empty()) res.set_content("", it->second.content_type);
    });
    server_.start();
  }

  std::string base() const { return server_.base(); }
  std::size_t requests() const {
    std::lock_guard lock(mutex_);
    return log_.size();
  }
  std::vector<std::string> log() const {
    std::lock_guard lock(mutex_);
    return log_;
  }

 private:
  RouteTable routes_;
  mutable std::mutex mutex_;
  std::vector<std::string> log_;
  ServerThread server_;  // last: stopped before the state it touches goes away
};

// --- SPARQL endpoint ---------------------------------------------------------

inline nlohmann::json sparql_binding(const RdfTerm& term) {
  if (term.is_iri()) return {{"type", "uri"}, {"value", term.value()}};
  if (term.is_blank()) return {{"type", "bnode"}, {"value", term.value()}};
  nlohmann::json j{{"type", "literal"}, {"value", term.value()}};
  const auto& lit = term.as_literal();
  if (lit.language) j["xml:lang"] = *lit.language;
  if (lit.datatype) j["datatype"] = *lit.datatype;
  return j;
}

/// SELECT ?s ?p ?o endpoint over a fixed triple set, honouring LIMIT/OFFSET
/// and cutting every answer at `truncation` rows the way public endpoints do.
class MockSparql {
 public:
  MockSparql(std::vector<Triple> triples, std::size_t truncation = 10'000)
      : triples_(std::move(triples)), truncation_(truncation) {
    std::sort(triples_.begin(), triples_.end());
    server_.server().Get("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res);
    });
    server_.start();
  }

  std::string url() const { return server_.base() + "/sparql"; }
  std::size_t requests() const { return requests_.load(); }
  /// Make the next n requests fail with 503.
  void fail_next(int n) { failures_ = n; }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    if (failures_ > 0) {
      --failures_;
      res.status = 503;
      return;
    }
    static const std::regex kPage(R"(LIMIT\s+(\d+)\s+OFFSET\s+(\d+))");
    std::smatch m;
    const auto query = req.get_param_value("query");
    std::size_t limit = truncation_, offset = 0;
    if (std::regex_search(query, m, kPage)) {
      limit = std::stoul(m[1]);
      offset = std::stoul(m[2]);
    }
    limit = std::min(limit, truncation_);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = offset; i < triples_.size() && i < offset + limit; ++i) {
      rows.push_back({{"s", sparql_binding(triples_[i].subject)},
                      {"p", sparql_binding(triples_[i].predicate)},
                      {"o", sparql_binding(triples_[i].object)}});
    }
    nlohmann::json body{{"head", {{"vars", {"s", "p", "o"}}}}, {"results", {{"bindings", rows}}}};
    res.set_content(body.dump(), "application/sparql-results+json");
  }

  std::vector<Triple> triples_;
  std::size_t truncation_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<int> failures_{0};
  ServerThread server_;
};

// --- shared fixtures ---------------------------------------------------------

inline constexpr const char* kEx = "http://example.org/p";

/// 20 triples: subjects s1..s6 (s1-s3 answer 303, s4 is a hash IRI, s5/s6
/// answer 200), objects o1..o4 (o1 303, o2 302 then 303, o3 200, o4 404).
/// Unique dereferenceable subjects 4, objects 2.
inline std::vector<Triple> deref_fixture(const std::string& base) {
  const auto s = [&](int i) { return i == 4 ? base + "/things#s4" : base + "/s" + std::to_string(i); };
  const auto o = [&](int i) { return RdfTerm::iri(base + "/o" + std::to_string(i)); };
  const auto lit = [](const char* v) { return RdfTerm::literal(v); };
  return {
      triple(s(1), kEx, o(1)),      triple(s(1), kEx, lit("a")), triple(s(1), kEx, lit("b")),
      triple(s(1), kEx, lit("l")),  triple(s(2), kEx, o(2)),     triple(s(2), kEx, lit("c")),
      triple(s(2), kEx, o(1)),      triple(s(2), kEx, lit("m")), triple(s(3), kEx, o(3)),
      triple(s(3), kEx, lit("d")),  triple(s(3), kEx, lit("e")), triple(s(4), kEx, o(4)),
      triple(s(4), kEx, lit("f")),  triple(s(4), kEx, lit("n")), triple(s(5), kEx, lit("g")),
      triple(s(5), kEx, lit("h")),  triple(s(5), kEx, o(3)),     triple(s(6), kEx, lit("i")),
      triple(s(6), kEx, lit("j")),  triple(s(6), kEx, lit("k")),
  };
}

inline RouteTable deref_routes() {
  return {
      {"/s1", {303, "", "/doc/s1"}},
      {"/s2", {303, "", "/doc/s2"}},
      {"/s3", {303, "", "/doc/s3"}},
      {"/s5", {200, "text/html"}},
      {"/s6", {200, "text/html"}},
      {"/o1", {303, "", "/doc/o1"}},
      {"/o2", {302, "", "/o2/moved"}},
      {"/o2/moved", {303, "", "/doc/o2"}},
      {"/o3", {200, "text/turtle"}},
      {"/doc/s1", {200, "text/turtle"}},
      {"/doc/s2", {200, "text/turtle"}},
      {"/doc/s3", {200, "text/turtle"}},
      {"/doc/o1", {200, "text/turtle"}},
      {"/doc/o2", {200, "text/turtle"}},
  };
}

/// Uniform random synthetic dump: `subjects` IRIs on a handful of hosts,
/// IRI or literal objects.
inline std::vector<Triple> synthetic_triples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t subjects = std::max<std::size_t>(1, n / 8);
  std::uniform_int_distribution<std::size_t> pick_s(0, subjects - 1);
  std::uniform_int_distribution<int> pick_p(0, 19), pick_kind(0, 2), pick_host(0, 4);
  std::vector<Triple> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = "http://data" + std::to_string(pick_host(rng)) + ".example.org/r/" + std::to_string(pick_s(rng));
    auto p = "http://example.org/vocab#p" + std::to_string(pick_p(rng));
    RdfTerm o = pick_kind(rng) == 0
                    ? RdfTerm::iri("http://data" + std::to_string(pick_host(rng)) + ".example.org/r/" +
                                   std::to_string(pick_s(rng)))
                    : RdfTerm::literal("value " + std::to_string(rng() % 100000));
    out.push_back(Triple{RdfTerm::iri(std::move(s)), RdfTerm::iri(std::move(p)), std::move(o)});
  }
  return out;
}

}  // namespace ldq::test
