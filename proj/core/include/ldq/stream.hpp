#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ldq/http.hpp"
#include "ldq/metric.hpp"
#include "ldq/ntriples.hpp"
#include "ldq/rdf.hpp"
#include "ldq/time.hpp"

namespace ldq {

struct DumpFile {
  std::filesystem::path path;
};

/// A SPARQL endpoint read page by page with LIMIT/OFFSET over a total order
/// on (?s ?p ?o). Assumes the store is not written to during the run.
struct Endpoint {
  std::string url;
  std::size_t page_size = 5000;
  std::size_t truncation_limit = 10'000;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

using DatasetSource = std::variant<DumpFile, Endpoint>;

struct AssessmentRun {
  std::string dataset_iri;
  std::uint64_t total_triples = 0;
  Timestamp started_at{};
  Timestamp finished_at{};
  std::vector<LineError> parse_errors;
};

/// The SELECT issued for page `offset / page_size`.
std::string page_query(std::size_t page_size, std::size_t offset);

/// Decodes an application/sparql-results+json body into triples. Rows that do
/// not bind s, p and o to a legal triple are skipped.
std::vector<Triple> decode_select_results(std::string_view json_body);

/// Streams every triple of the endpoint into `on_triple`. Returns the number
/// of HTTP requests issued (successful pages, retries not counted).
///
/// Throws Error(invalid_page_size), Error(transport_error) once the retry
/// budget is spent, and Error(truncation_suspected) if a page carries more
/// rows than requested.
std::size_t fetch_endpoint_pages(const Endpoint& endpoint, HttpClient& http,
                                 const std::function<void(Triple&&)>& on_triple);

struct StreamOptions {
  std::string dataset_iri;
  /// Bound on triples buffered per sink before the producer blocks.
  std::size_t queue_capacity = 1024;
  std::size_t batch_size = 256;
  /// Used for endpoint sources; a BasicHttpClient is created when null.
  std::shared_ptr<HttpClient> http;
};

/// Feeds every triple of `source` to every sink, each sink on its own
/// consumer thread, then finalizes all sinks with the completed run.
///
/// Throws Error(source_unreadable) when a dump cannot be opened and
/// Error(sink_panicked) when any sink throws from accept; in that case no sink
/// is finalized.
AssessmentRun stream_dataset(const DatasetSource& source, std::span<MetricInstance* const> sinks,
                             const StreamOptions& options = {});

}  // namespace ldq
