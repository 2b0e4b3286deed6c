#include "ldq/metric.hpp"

#include <charconv>
#include <cmath>

#include "ldq/error.hpp"
#include "ldq/stream.hpp"

namespace ldq {

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::real: return "real";
    case ValueKind::boolean: return "boolean";
    case ValueKind::count: return "count";
  }
  return "real";
}

ValueKind parse_value_kind(std::string_view text) {
  if (text == "real") return ValueKind::real;
  if (text == "boolean") return ValueKind::boolean;
  if (text == "count") return ValueKind::count;
  throw Error(ErrorCode::invalid_config, "unknown value kind '" + std::string(text) + "'");
}

double MetricValue::as_double() const noexcept {
  return std::visit([](auto v) { return static_cast<double>(v); }, value_);
}

MetricValue MetricValue::coerce(ValueKind target) const {
  if (target == kind()) return *this;
  switch (target) {
    case ValueKind::real: return real(as_double());
    case ValueKind::boolean: return boolean(as_double() != 0.0);
    case ValueKind::count: return count(static_cast<std::int64_t>(std::llround(as_double())));
  }
  return *this;
}

std::string format_value(const MetricValue& value) {
  return std::visit(
      [](auto v) -> std::string {
        using T = decltype(v);
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          char buf[64];
          auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
          std::string out(buf, ptr);
          if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
          return out;
        }
      },
      value.variant());
}

ProblemItem ProblemItem::resource(RdfTerm term, std::string note) {
  return ProblemItem{ResourceList{std::move(term)}, std::move(note)};
}

ProblemItem ProblemItem::statement(Triple triple, std::string note) {
  return ProblemItem{ReifiedStatements{std::move(triple)}, std::move(note)};
}

void MetricInstance::accept(const Triple& triple) {
  if (state_ == State::finalized) {
    throw Error(ErrorCode::lifecycle_violation, "accept after finalize on " + metric_iri_);
  }
  state_ = State::accepting;
  on_accept(triple);
  ++accepted_;
}

void MetricInstance::finalize(const AssessmentRun& run) {
  if (state_ == State::finalized) {
    throw Error(ErrorCode::lifecycle_violation, "finalize called twice on " + metric_iri_);
  }
  value_ = on_finalize(run).coerce(kind_);
  state_ = State::finalized;
}

const MetricValue& MetricInstance::value() const {
  if (state_ != State::finalized) {
    throw Error(ErrorCode::not_finalized, "value read before finalize on " + metric_iri_);
  }
  return value_;
}

MetricValue MetricInstance::ratio_or_degenerate(double numerator, double denominator,
                                                std::string_view what) {
  if (denominator <= 0.0) {
    warn("degenerate input: no " + std::string(what) + "; value set to 0");
    return MetricValue::real(0.0);
  }
  return MetricValue::real(numerator / denominator);
}

CollectedResult collect(const MetricInstance& instance) {
  return CollectedResult{instance.value(), instance.problems()};
}

}  // namespace ldq
