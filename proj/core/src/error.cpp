#include "ldq/error.hpp"

namespace ldq {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::source_unreadable: return "SourceUnreadable";
    case ErrorCode::sink_panicked: return "SinkPanicked";
    case ErrorCode::transport_error: return "TransportError";
    case ErrorCode::truncation_suspected: return "TruncationSuspected";
    case ErrorCode::invalid_page_size: return "InvalidPageSize";
    case ErrorCode::http_timeout: return "HttpTimeout";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::unknown_function: return "UnknownFunction";
    case ErrorCode::unbound_rule_ref: return "UnboundRuleRef";
    case ErrorCode::arity_mismatch: return "ArityMismatch";
    case ErrorCode::invalid_expression: return "InvalidExpression";
    case ErrorCode::duplicate_function: return "DuplicateFunction";
    case ErrorCode::evaluation_error: return "EvaluationError";
    case ErrorCode::orphan_metric: return "OrphanMetric";
    case ErrorCode::duplicate_iri: return "DuplicateIri";
    case ErrorCode::empty_dimension: return "EmptyDimension";
    case ErrorCode::empty_category: return "EmptyCategory";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::unknown_builtin: return "UnknownBuiltin";
    case ErrorCode::lqml_error: return "LqmlError";
    case ErrorCode::not_finalized: return "NotFinalized";
    case ErrorCode::lifecycle_violation: return "LifecycleViolation";
    case ErrorCode::probe_timeout: return "ProbeTimeout";
    case ErrorCode::empty_graph: return "EmptyGraph";
    case ErrorCode::malformed_metadata: return "MalformedMetadata";
    case ErrorCode::unknown_dataset: return "UnknownDataset";
    case ErrorCode::missing_observation: return "MissingObservation";
    case ErrorCode::invalid_weight_target: return "InvalidWeightTarget";
    case ErrorCode::invalid_weight: return "InvalidWeight";
  }
  return "Unknown";
}

}  // namespace ldq
