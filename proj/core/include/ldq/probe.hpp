#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ldq/http.hpp"

namespace ldq {

struct HttpProbeResult {
  std::string iri;
  std::vector<int> status_chain;  // one entry per hop actually answered
  std::string content_type;       // of the final hop
  std::chrono::milliseconds elapsed{0};
  bool timed_out = false;
  std::string error;  // transport failure other than a timeout

  int final_status() const noexcept { return status_chain.empty() ? 0 : status_chain.back(); }
};

struct DerefOutcome {
  bool dereferenceable = false;
  HttpProbeResult probe;
};

struct ProbeOptions {
  int max_redirects = 10;
  std::string accept = "application/rdf+xml";
};

/// HEAD with GET fallback on 405, following redirects up to the cap. Never
/// throws for network trouble; failures land in the result.
HttpProbeResult probe_http(const std::string& iri, HttpClient& http, const ProbeOptions& options);

/// Dereferenceable iff the IRI has a fragment, or some hop in its redirect
/// chain answered 303 See Other. Hash IRIs are decided without network I/O.
DerefOutcome probe_dereferenceability(const std::string& iri, HttpClient& http,
                                      const ProbeOptions& options = {});

/// True for the RDF media types accepted as a correct answer to RDF content
/// negotiation; parameters such as charset are ignored.
bool is_rdf_media_type(std::string_view content_type);

/// Memoizing front for the probes above: one network probe per IRI per run,
/// shared by every metric. Safe for concurrent use.
class ResourceProber {
 public:
  explicit ResourceProber(std::shared_ptr<HttpClient> http, ProbeOptions options = {})
      : http_(std::move(http)), options_(std::move(options)) {}

  DerefOutcome dereferenceability(const std::string& iri);
  HttpProbeResult content_negotiation(const std::string& iri);

  /// Number of probes that actually reached the HTTP client.
  std::size_t network_probes() const;

 private:
  std::shared_ptr<HttpClient> http_;
  ProbeOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, DerefOutcome, std::less<>> deref_cache_;
  std::map<std::string, HttpProbeResult, std::less<>> content_cache_;
  std::size_t network_probes_ = 0;
};

}  // namespace ldq
