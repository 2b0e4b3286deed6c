#include "ldq/http.hpp"

#include <httplib.h>

#include "ldq/error.hpp"
#include "ldq/url.hpp"

namespace ldq {

HttpResponse BasicHttpClient::send(const HttpRequest& request) {
  const auto url = parse_url(request.url);
  if (!url) throw Error(ErrorCode::transport_error, "not an absolute http(s) URL: " + request.url);

  httplib::Client client(url->origin());
  if (!client.is_valid()) {
    throw Error(ErrorCode::transport_error, "unsupported URL scheme: " + request.url);
  }
  const auto timeout = options_.timeout;
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_follow_location(false);

  httplib::Headers headers{{"User-Agent", options_.user_agent}};
  for (const auto& [name, value] : request.headers) headers.emplace(name, value);

  const auto started = std::chrono::steady_clock::now();
  httplib::Result result;
  const auto target = url->target();
  if (request.method == "HEAD") {
    result = client.Head(target, headers);
  } else if (request.method == "GET") {
    result = client.Get(target, headers);
  } else if (request.method == "POST") {
    result = client.Post(target, headers, "", "application/x-www-form-urlencoded");
  } else {
    throw Error(ErrorCode::transport_error, "unsupported HTTP method " + request.method);
  }

  if (!result) {
    const auto err = result.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= timeout * 9 / 10)) {
      throw Error(ErrorCode::http_timeout, "timed out requesting " + request.url);
    }
    throw Error(ErrorCode::transport_error,
                "request to " + request.url + " failed: " + httplib::to_string(err));
  }

  HttpResponse response;
  response.status = result->status;
  response.content_type = result->get_header_value("Content-Type");
  response.location = result->get_header_value("Location");
  response.body = std::move(result->body);
  return response;
}

}  // namespace ldq
