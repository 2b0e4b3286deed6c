#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace ldq {

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
};

struct HttpResponse {
  int status = 0;
  std::string content_type;
  std::string location;
  std::string body;
};

/// One request, one response. Implementations never follow redirects; callers
/// that care about the redirect chain walk it themselves.
///
/// Throws Error(http_timeout) when the peer does not answer in time and
/// Error(transport_error) for any other network failure.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse send(const HttpRequest& request) = 0;
};

struct HttpClientOptions {
  std::chrono::milliseconds timeout{10'000};
  std::string user_agent = "ldq-quality-assessor/0.1 (linked data quality probe)";
};

/// Plain HTTP/1.1 client backed by cpp-httplib. Thread-safe: every call opens
/// its own connection.
class BasicHttpClient final : public HttpClient {
 public:
  explicit BasicHttpClient(HttpClientOptions options = {}) : options_(std::move(options)) {}
  HttpResponse send(const HttpRequest& request) override;

 private:
  HttpClientOptions options_;
};

}  // namespace ldq
