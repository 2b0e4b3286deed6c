#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ldq {

/// Just enough of RFC 3986 for http(s) IRIs: scheme, authority, path, query
/// and fragment, split without percent-decoding.
struct Url {
  std::string scheme;
  std::string host;
  std::optional<int> port;
  std::string path;  // always begins with '/' for hierarchical URLs
  std::optional<std::string> query;
  std::optional<std::string> fragment;

  /// scheme://host[:port]
  std::string origin() const;
  /// path[?query]; what goes on the HTTP request line.
  std::string target() const;
  std::string str() const;
};

std::optional<Url> parse_url(std::string_view text);

/// Resolves a Location header value against the URL it was received from.
std::string resolve_reference(const Url& base, std::string_view reference);

/// Pay-level domain: the registrable domain one label below the longest
/// matching public suffix in the bundled snapshot. Falls back to the host
/// itself for IP literals and single-label hosts. Empty when `iri` has no host.
std::string pay_level_domain(std::string_view iri);

/// True when the host (lower-cased) is listed as a public suffix.
bool is_public_suffix(std::string_view host);

}  // namespace ldq
