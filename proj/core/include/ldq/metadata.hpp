#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldq/metric.hpp"
#include "ldq/rdf.hpp"
#include "ldq/time.hpp"

namespace ldq {

struct AssessmentRun;

/// One metric value for one dataset at one point in time (daq vocabulary).
struct Observation {
  std::string dataset_iri;
  std::string metric_iri;
  MetricValue value;
  Timestamp observed_at{};
  std::optional<std::string> graph_iri;

  bool operator==(const Observation&) const = default;
};

struct QualityProblem {
  std::string described_by;  // metric IRI
  ProblematicThing thing;
  std::optional<std::string> in_graph;
  std::string note;

  bool operator==(const QualityProblem&) const = default;
};

/// A qpro:QualityReport. Problems keep their order through emit/parse.
struct QualityReport {
  std::string iri;
  std::string computed_on;  // dataset IRI
  std::vector<QualityProblem> problems;

  bool operator==(const QualityReport&) const = default;
};

/// Stable observation node IRI for (dataset, metric, time).
std::string observation_iri(const Observation& observation);
std::string report_iri(std::string_view dataset_iri, Timestamp generated_at);

/// Canonical (sorted) N-Triples.
std::string emit_observations(std::span<const Observation> observations);
std::string emit_report(const QualityReport& report);

struct ParsedMetadata {
  std::vector<Observation> observations;  // sorted by dataset, metric, time
  std::vector<QualityReport> reports;     // sorted by report IRI
  std::vector<std::string> warnings;
};

/// Inverse of the emitters. Throws Error(malformed_metadata) for an
/// observation without dataset, metric, value or timestamp, or a problem
/// without a metric or a non-empty problematic thing.
ParsedMetadata parse_metadata(std::string_view ntriples);

/// One observation per finalized instance, stamped with the run's end time.
std::vector<Observation> make_observations(const AssessmentRun& run,
                                           std::span<const MetricInstance* const> instances,
                                           std::optional<std::string> graph_iri = std::nullopt);

/// Problems grouped per metric and note, in the order the metric reported them.
QualityReport make_report(const AssessmentRun& run, std::span<const MetricInstance* const> instances,
                          std::optional<std::string> graph_iri = std::nullopt);

/// File-name-safe, human-recognisable and collision-resistant dataset key,
/// e.g. `example-org-data-3f2a91c0`.
std::string dataset_slug(std::string_view dataset_iri);

/// Observation history per dataset and metric. With a directory it persists
/// to `<dir>/<slug>.quality.nt` and `<dir>/<slug>.problems.nt` (append only)
/// and rebuilds its index on load. Concurrent readers, exclusive writers.
class MetadataStore {
 public:
  MetadataStore() = default;
  explicit MetadataStore(std::filesystem::path directory);

  /// Reads every `*.quality.nt` in the directory.
  void load();

  /// Records observations (skipping exact (dataset, metric, time) repeats) and
  /// optionally a report, writing through to disk when persistent.
  void append(std::span<const Observation> observations,
              const std::optional<QualityReport>& report = std::nullopt);

  std::vector<std::string> datasets() const;
  bool contains(std::string_view dataset_iri) const;
  /// Resolves a slug or an IRI to the dataset IRI.
  std::optional<std::string> resolve(std::string_view slug_or_iri) const;

  /// Throws Error(unknown_dataset).
  std::map<std::string, MetricValue> latest_values(std::string_view dataset_iri) const;
  std::optional<Observation> latest(std::string_view dataset_iri, std::string_view metric_iri) const;
  /// Full history, oldest first per metric.
  std::vector<Observation> observations(std::string_view dataset_iri) const;
  /// Reports recorded for the dataset, oldest first.
  std::vector<QualityReport> reports(std::string_view dataset_iri) const;

  const std::filesystem::path& directory() const noexcept { return directory_; }

 private:
  using History = std::map<std::string, std::vector<Observation>, std::less<>>;

  void index(const Observation& observation, std::vector<Observation>* added);
  const History& history(std::string_view dataset_iri) const;

  std::filesystem::path directory_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, History, std::less<>> by_dataset_;
  std::map<std::string, std::vector<QualityReport>, std::less<>> memory_reports_;
};

}  // namespace ldq
