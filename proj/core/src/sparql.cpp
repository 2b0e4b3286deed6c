#include <nlohmann/json.hpp>
#include <thread>

#include "ldq/error.hpp"
#include "ldq/stream.hpp"

namespace ldq {

namespace {

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(text.size() * 3);
  for (unsigned char c : text) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::optional<RdfTerm> decode_term(const nlohmann::json& binding) {
  if (!binding.is_object()) return std::nullopt;
  const auto type = binding.value("type", "");
  const auto value = binding.value("value", "");
  if (type == "uri") {
    if (!is_valid_iri_text(value)) return std::nullopt;
    return RdfTerm::iri(value);
  }
  if (type == "bnode") {
    if (value.empty()) return std::nullopt;
    return RdfTerm::blank(sanitize_blank_label(value));
  }
  if (type == "literal" || type == "typed-literal") {
    if (auto lang = binding.find("xml:lang"); lang != binding.end() && lang->is_string()) {
      return RdfTerm::lang_literal(value, lang->get<std::string>());
    }
    if (auto dt = binding.find("datatype"); dt != binding.end() && dt->is_string()) {
      return RdfTerm::typed_literal(value, dt->get<std::string>());
    }
    return RdfTerm::literal(value);
  }
  return std::nullopt;
}

}  // namespace

std::string page_query(std::size_t page_size, std::size_t offset) {
  return "SELECT ?s ?p ?o WHERE { ?s ?p ?o } ORDER BY ?s ?p ?o LIMIT " +
         std::to_string(page_size) + " OFFSET " + std::to_string(offset);
}

namespace {

struct DecodedPage {
  std::size_t rows = 0;
  std::vector<Triple> triples;
};

DecodedPage decode_page(std::string_view json_body) {
  const auto doc = nlohmann::json::parse(json_body, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::transport_error, "endpoint returned malformed SPARQL JSON");
  }
  DecodedPage page;
  const auto results = doc.find("results");
  if (results == doc.end() || !results->is_object()) return page;
  const auto bindings = results->find("bindings");
  if (bindings == results->end() || !bindings->is_array()) return page;
  page.rows = bindings->size();
  page.triples.reserve(page.rows);
  for (const auto& row : *bindings) {
    if (!row.is_object() || !row.contains("s") || !row.contains("p") || !row.contains("o")) {
      continue;
    }
    auto s = decode_term(row["s"]);
    auto p = decode_term(row["p"]);
    auto o = decode_term(row["o"]);
    if (!s || !p || !o || s->is_literal() || !p->is_iri()) continue;
    page.triples.push_back(Triple{std::move(*s), std::move(*p), std::move(*o)});
  }
  return page;
}

}  // namespace

std::vector<Triple> decode_select_results(std::string_view json_body) {
  return decode_page(json_body).triples;
}

namespace {

HttpResponse fetch_page(const Endpoint& endpoint, HttpClient& http, const std::string& url) {
  HttpRequest request;
  request.method = "GET";
  request.url = url;
  request.headers = {{"Accept", "application/sparql-results+json"}};

  auto backoff = endpoint.initial_backoff;
  std::string last_failure;
  for (int attempt = 1; attempt <= std::max(1, endpoint.max_attempts); ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    try {
      auto response = http.send(request);
      if (response.status == 200) return response;
      last_failure = "HTTP status " + std::to_string(response.status);
      if (response.status < 500) break;  // client errors will not heal on retry
    } catch (const Error& e) {
      if (e.code() != ErrorCode::transport_error && e.code() != ErrorCode::http_timeout) throw;
      last_failure = e.what();
    }
  }
  throw Error(ErrorCode::transport_error,
              "endpoint " + endpoint.url + " failed after retries: " + last_failure);
}

}  // namespace

std::size_t fetch_endpoint_pages(const Endpoint& endpoint, HttpClient& http,
                                 const std::function<void(Triple&&)>& on_triple) {
  if (endpoint.page_size == 0 || endpoint.page_size > endpoint.truncation_limit) {
    throw Error(ErrorCode::invalid_page_size,
                "page size " + std::to_string(endpoint.page_size) + " must be in [1, " +
                    std::to_string(endpoint.truncation_limit) + "]");
  }
  const char separator = endpoint.url.find('?') == std::string::npos ? '?' : '&';
  std::size_t requests = 0;
  for (std::size_t offset = 0;; offset += endpoint.page_size) {
    const auto url = endpoint.url + separator + "query=" +
                     percent_encode(page_query(endpoint.page_size, offset));
    const auto response = fetch_page(endpoint, http, url);
    ++requests;
    auto page = decode_page(response.body);
    const auto rows = page.rows;
    if (rows > endpoint.page_size) {
      throw Error(ErrorCode::truncation_suspected,
                  "page at offset " + std::to_string(offset) + " returned " +
                      std::to_string(rows) + " rows for LIMIT " +
                      std::to_string(endpoint.page_size));
    }
    for (auto& t : page.triples) on_triple(std::move(t));
    if (rows < endpoint.page_size) break;
  }
  return requests;
}

}  // namespace ldq
