#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldq {

enum class ErrorCode {
  // rdf-stream
  source_unreadable,
  sink_panicked,
  transport_error,
  truncation_suspected,
  invalid_page_size,
  http_timeout,
  // lqml
  parse_error,
  unknown_function,
  unbound_rule_ref,
  arity_mismatch,
  invalid_expression,
  duplicate_function,
  evaluation_error,
  // metric-core
  orphan_metric,
  duplicate_iri,
  empty_dimension,
  empty_category,
  invalid_config,
  unknown_builtin,
  lqml_error,
  not_finalized,
  lifecycle_violation,
  // metrics-lib
  probe_timeout,
  empty_graph,
  // quality-metadata
  malformed_metadata,
  unknown_dataset,
  // ranking
  missing_observation,
  invalid_weight_target,
  invalid_weight,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every recoverable failure in the library. The code is
/// stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ldq
