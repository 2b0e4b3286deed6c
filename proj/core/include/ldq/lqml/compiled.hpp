#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "ldq/lqml/ast.hpp"
#include "ldq/lqml/functions.hpp"
#include "ldq/metric.hpp"

namespace ldq::lqml {

/// An LQML definition bound to a function registry and driven through the
/// MetricInstance lifecycle.
///
/// Rule actions are `count(unique(E))` (distinct values of E among matching
/// triples) or `count(E)` (number of matching triples). The finally
/// expression may use ratio, add, action, totaltriples and number literals.
class CompiledMetric : public MetricInstance {
 public:
  CompiledMetric(MetricDef def, std::shared_ptr<const FunctionRegistry> registry,
                 ValueKind kind = ValueKind::real);

  const MetricDef& definition() const noexcept { return def_; }

  /// Current accumulator value of a rule (0 for unknown names).
  std::uint64_t accumulator(const std::string& binding) const;

  /// Function failures recorded during accept; each skipped the rule for
  /// the triple at hand.
  std::uint64_t evaluation_errors() const noexcept { return evaluation_errors_; }

 protected:
  void on_accept(const Triple& triple) override;
  MetricValue on_finalize(const AssessmentRun& run) override;

 private:
  struct RuleState {
    const Rule* rule = nullptr;
    const Expr* counted = nullptr;  // E in count(E) / count(unique(E))
    bool distinct = false;
    std::uint64_t matches = 0;
    std::unordered_set<std::string> seen;

    std::uint64_t value() const { return distinct ? seen.size() : matches; }
  };

  Value eval(const Expr& e, const Triple& t);
  bool truthy(const Expr& e, const Triple& t);
  double eval_final(const Expr& e, const AssessmentRun& run);

  MetricDef def_;
  std::shared_ptr<const FunctionRegistry> registry_;
  std::vector<RuleState> rules_;
  std::map<std::string, Value> memo_;
  std::uint64_t evaluation_errors_ = 0;
};

/// Binds the definition to the registry. Throws unknown_function,
/// arity_mismatch, or invalid_expression for actions and finally
/// expressions outside the supported forms.
std::unique_ptr<CompiledMetric> compile(const MetricDef& def,
                                        std::shared_ptr<const FunctionRegistry> registry,
                                        ValueKind kind = ValueKind::real);

}  // namespace ldq::lqml
