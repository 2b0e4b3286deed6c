#include "ldq/probe.hpp"

#include <algorithm>
#include <mutex>

#include "ldq/error.hpp"
#include "ldq/url.hpp"

namespace ldq {

HttpProbeResult probe_http(const std::string& iri, HttpClient& http, const ProbeOptions& options) {
  HttpProbeResult result;
  result.iri = iri;
  const auto started = std::chrono::steady_clock::now();

  std::string current = iri;
  if (auto hash = current.find('#'); hash != std::string::npos) current.resize(hash);

  for (int hop = 0; hop <= options.max_redirects; ++hop) {
    const auto url = parse_url(current);
    if (!url) {
      result.error = "not an http(s) IRI";
      break;
    }
    HttpRequest request{"HEAD", current, {{"Accept", options.accept}}};
    try {
      auto response = http.send(request);
      if (response.status == 405) {
        request.method = "GET";
        response = http.send(request);
      }
      result.status_chain.push_back(response.status);
      result.content_type = response.content_type;
      const bool redirect = response.status >= 300 && response.status < 400;
      if (!redirect || response.location.empty()) break;
      current = resolve_reference(*url, response.location);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::http_timeout) {
        result.timed_out = true;
      } else {
        result.error = e.what();
      }
      break;
    }
  }
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  return result;
}

DerefOutcome probe_dereferenceability(const std::string& iri, HttpClient& http,
                                      const ProbeOptions& options) {
  DerefOutcome outcome;
  if (iri.find('#') != std::string::npos) {
    outcome.dereferenceable = true;
    outcome.probe.iri = iri;
    return outcome;
  }
  outcome.probe = probe_http(iri, http, options);
  const auto& chain = outcome.probe.status_chain;
  outcome.dereferenceable = std::find(chain.begin(), chain.end(), 303) != chain.end();
  return outcome;
}

bool is_rdf_media_type(std::string_view content_type) {
  auto end = content_type.find(';');
  auto type = content_type.substr(0, end);
  while (!type.empty() && type.back() == ' ') type.remove_suffix(1);
  while (!type.empty() && type.front() == ' ') type.remove_prefix(1);
  std::string lowered(type);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lowered == "application/rdf+xml" || lowered == "text/turtle" ||
         lowered == "application/n-triples" || lowered == "application/ld+json";
}

DerefOutcome ResourceProber::dereferenceability(const std::string& iri) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = deref_cache_.find(iri); it != deref_cache_.end()) return it->second;
  }
  // Probing happens outside the lock; a concurrent duplicate probe of the same
  // IRI is harmless and the first stored answer wins.
  const bool networked = iri.find('#') == std::string::npos;
  auto outcome = probe_dereferenceability(iri, *http_, options_);
  std::unique_lock lock(mutex_);
  if (networked) ++network_probes_;
  return deref_cache_.try_emplace(iri, std::move(outcome)).first->second;
}

HttpProbeResult ResourceProber::content_negotiation(const std::string& iri) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = content_cache_.find(iri); it != content_cache_.end()) return it->second;
  }
  auto result = probe_http(iri, *http_, options_);
  std::unique_lock lock(mutex_);
  ++network_probes_;
  return content_cache_.try_emplace(iri, std::move(result)).first->second;
}

std::size_t ResourceProber::network_probes() const {
  std::shared_lock lock(mutex_);
  return network_probes_;
}

}  // namespace ldq
