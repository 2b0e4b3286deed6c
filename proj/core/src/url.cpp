#include "ldq/url.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace ldq {

namespace {

// Snapshot of multi-label public suffixes that matter for Linked Data hosts.
// Single-label TLDs need no entry: any unknown last label counts as a suffix,
// which is also the public-suffix-list default rule.
constexpr std::string_view kMultiLabelSuffixes[] = {
    "co.uk",  "org.uk", "ac.uk",  "gov.uk", "ltd.uk", "plc.uk", "me.uk",  "net.uk",
    "sch.uk", "nhs.uk", "co.jp",  "ac.jp",  "go.jp",  "or.jp",  "ne.jp",  "com.au",
    "net.au", "org.au", "edu.au", "gov.au", "co.nz",  "org.nz", "ac.nz",  "govt.nz",
    "com.br", "org.br", "gov.br", "edu.br", "com.cn", "org.cn", "gov.cn", "edu.cn",
    "ac.cn",  "co.in",  "gov.in", "ac.in",  "org.in", "co.za",  "ac.za",  "gov.za",
    "org.za", "com.mt", "org.mt", "edu.mt", "gov.mt", "com.mx", "gob.mx", "edu.mx",
    "ac.at",  "gv.at",  "co.at",  "or.at",  "ac.il",  "co.il",  "gov.il", "github.io",
    "gitlab.io", "blogspot.com",
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  });
  return out;
}

bool looks_like_ip(std::string_view host) {
  if (!host.empty() && host.front() == '[') return true;
  return std::all_of(host.begin(), host.end(),
                     [](char c) { return (c >= '0' && c <= '9') || c == '.'; });
}

}  // namespace

std::string Url::origin() const {
  std::string out = scheme + "://" + host;
  if (port) out += ":" + std::to_string(*port);
  return out;
}

std::string Url::target() const {
  std::string out = path.empty() ? "/" : path;
  if (query) out += "?" + *query;
  return out;
}

std::string Url::str() const {
  std::string out = origin() + target();
  if (fragment) out += "#" + *fragment;
  return out;
}

std::optional<Url> parse_url(std::string_view text) {
  const auto colon = text.find("://");
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  Url url;
  url.scheme = lower(text.substr(0, colon));
  auto rest = text.substr(colon + 3);

  const auto authority_end = rest.find_first_of("/?#");
  auto authority = rest.substr(0, authority_end);
  rest = authority_end == std::string_view::npos ? std::string_view{} : rest.substr(authority_end);

  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host = authority;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(0, close + 1);
    authority.remove_prefix(close + 1);
  } else {
    const auto port_sep = authority.rfind(':');
    host = authority.substr(0, port_sep);
    authority = port_sep == std::string_view::npos ? std::string_view{} : authority.substr(port_sep);
  }
  if (host.empty()) return std::nullopt;
  url.host = lower(host);
  if (!authority.empty() && authority.front() == ':') {
    authority.remove_prefix(1);
    if (!authority.empty()) {
      int port = 0;
      auto [ptr, ec] = std::from_chars(authority.data(), authority.data() + authority.size(), port);
      if (ec != std::errc{} || ptr != authority.data() + authority.size() || port <= 0 ||
          port > 65535) {
        return std::nullopt;
      }
      url.port = port;
    }
  }

  if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
    url.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    url.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  url.path = rest.empty() ? "/" : std::string(rest);
  return url;
}

std::string resolve_reference(const Url& base, std::string_view reference) {
  if (reference.find("://") != std::string_view::npos) return std::string(reference);
  if (reference.starts_with("//")) return base.scheme + ":" + std::string(reference);
  if (reference.starts_with("/")) return base.origin() + std::string(reference);
  if (reference.starts_with("?")) return base.origin() + base.path + std::string(reference);
  const auto slash = base.path.rfind('/');
  const std::string dir = slash == std::string::npos ? "/" : base.path.substr(0, slash + 1);
  return base.origin() + dir + std::string(reference);
}

bool is_public_suffix(std::string_view host) {
  const auto h = lower(host);
  if (h.find('.') == std::string::npos) return !h.empty();
  return std::find(std::begin(kMultiLabelSuffixes), std::end(kMultiLabelSuffixes), h) !=
         std::end(kMultiLabelSuffixes);
}

std::string pay_level_domain(std::string_view iri) {
  const auto url = parse_url(iri);
  if (!url) return {};
  const std::string& host = url->host;
  if (looks_like_ip(host)) return host;

  // Walk suffixes from longest to shortest; the first public suffix found
  // determines the registrable domain.
  std::size_t start = 0;
  std::size_t previous = std::string::npos;
  while (true) {
    const std::string_view candidate(host.data() + start, host.size() - start);
    if (is_public_suffix(candidate)) {
      if (previous == std::string::npos) return host;
      return host.substr(previous);
    }
    const auto dot = host.find('.', start);
    if (dot == std::string::npos) return host;
    previous = start;
    start = dot + 1;
  }
}

}  // namespace ldq
