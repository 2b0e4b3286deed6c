#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldq/rdf.hpp"

namespace ldq {

struct AssessmentRun;

enum class ValueKind { real, boolean, count };

std::string_view to_string(ValueKind kind) noexcept;
ValueKind parse_value_kind(std::string_view text);

class MetricValue {
 public:
  MetricValue() : value_(0.0) {}
  static MetricValue real(double v) { return MetricValue(v); }
  static MetricValue boolean(bool v) { return MetricValue(v); }
  static MetricValue count(std::int64_t v) { return MetricValue(v); }

  ValueKind kind() const noexcept { return static_cast<ValueKind>(value_.index()); }

  /// Numeric view used by ranking: booleans coerce to 1.0 / 0.0.
  double as_double() const noexcept;

  /// Converts to the declared kind of a descriptor.
  MetricValue coerce(ValueKind kind) const;

  const std::variant<double, bool, std::int64_t>& variant() const noexcept { return value_; }

  bool operator==(const MetricValue&) const = default;

 private:
  template <class T>
  explicit MetricValue(T v) : value_(v) {}

  std::variant<double, bool, std::int64_t> value_;
};

/// Shortest round-trippable decimal rendering.
std::string format_value(const MetricValue& value);

/// A list of resources or of statements found to violate a metric.
using ResourceList = std::vector<RdfTerm>;
using ReifiedStatements = std::vector<Triple>;
using ProblematicThing = std::variant<ResourceList, ReifiedStatements>;

struct ProblemItem {
  ProblematicThing thing;
  std::string note;  // e.g. "timeout"; empty when the thing speaks for itself
  bool operator==(const ProblemItem&) const = default;

  static ProblemItem resource(RdfTerm term, std::string note = {});
  static ProblemItem statement(Triple triple, std::string note = {});
};

/// Lifecycle: ready -> accepting* -> finalized. Every metric, native or
/// compiled from LQML, is driven through this base so violations are caught
/// in one place. Each instance is confined to a single consumer thread.
class MetricInstance {
 public:
  enum class State { ready, accepting, finalized };

  MetricInstance(std::string metric_iri, ValueKind kind)
      : metric_iri_(std::move(metric_iri)), kind_(kind) {}
  virtual ~MetricInstance() = default;

  MetricInstance(const MetricInstance&) = delete;
  MetricInstance& operator=(const MetricInstance&) = delete;

  void accept(const Triple& triple);
  void finalize(const AssessmentRun& run);

  State state() const noexcept { return state_; }
  std::uint64_t accept_count() const noexcept { return accepted_; }
  const std::string& metric_iri() const noexcept { return metric_iri_; }
  ValueKind kind() const noexcept { return kind_; }

  /// Throws Error(not_finalized) before finalize.
  const MetricValue& value() const;
  const std::vector<ProblemItem>& problems() const noexcept { return problems_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 protected:
  virtual void on_accept(const Triple& triple) = 0;
  virtual MetricValue on_finalize(const AssessmentRun& run) = 0;

  void report(ProblemItem item) { problems_.push_back(std::move(item)); }
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  /// Ratio with the degenerate-denominator rule: 0.0 plus a warning.
  MetricValue ratio_or_degenerate(double numerator, double denominator, std::string_view what);

 private:
  std::string metric_iri_;
  ValueKind kind_;
  State state_ = State::ready;
  std::uint64_t accepted_ = 0;
  MetricValue value_;
  std::vector<ProblemItem> problems_;
  std::vector<std::string> warnings_;
};

struct CollectedResult {
  MetricValue value;
  std::vector<ProblemItem> problems;
};

CollectedResult collect(const MetricInstance& instance);

}  // namespace ldq
