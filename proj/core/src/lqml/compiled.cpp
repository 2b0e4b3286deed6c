#include "ldq/lqml/compiled.hpp"

#include "ldq/error.hpp"
#include "ldq/lqml/parser.hpp"
#include "ldq/stream.hpp"

namespace ldq::lqml {

namespace {

constexpr std::size_t kMaxRecordedWarnings = 50;

[[noreturn]] void invalid(const Expr& e, const std::string& message) {
  throw Error(ErrorCode::invalid_expression,
              std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) + ": " + message);
}

bool is_call(const Expr& e, std::string_view name) {
  return e.kind == Expr::Kind::call && e.text == name;
}

void check_condition(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::rule_ref: invalid(e, "rule reference inside a condition");
    case Expr::Kind::call:
      if (is_accumulator_form(e.text)) invalid(e, e.text + " is not allowed inside a condition");
      break;
    default: break;
  }
  for (const auto& a : e.args) check_condition(a);
}

void check_final(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return;
    case Expr::Kind::call:
      if (e.text == "action") {
        if (e.args[0].kind != Expr::Kind::rule_ref) invalid(e, "action() takes a rule name");
        return;
      }
      if (e.text == "totaltriples") return;
      if (e.text == "ratio" || e.text == "add") {
        for (const auto& a : e.args) check_final(a);
        return;
      }
      invalid(e, "'" + e.text + "' is not allowed in finally");
    default: invalid(e, "finally expects a numeric expression");
  }
}

std::string memo_key(const std::string& fn, std::span<const Value> args) {
  std::string key = fn;
  for (const auto& v : args) {
    key.push_back('\x1f');
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            key += "_";
          } else if constexpr (std::is_same_v<T, bool>) {
            key += x ? "T" : "F";
          } else if constexpr (std::is_same_v<T, double>) {
            key += "N" + std::to_string(x);
          } else if constexpr (std::is_same_v<T, std::string>) {
            key += "S" + x;
          } else {
            key += to_ntriples(x);
          }
        },
        v);
  }
  return key;
}

}  // namespace

CompiledMetric::CompiledMetric(MetricDef def, std::shared_ptr<const FunctionRegistry> registry,
                               ValueKind kind)
    : MetricInstance(def.metric_iri, kind), def_(std::move(def)), registry_(std::move(registry)) {
  validate_calls(def_, *registry_);
  for (const auto& rule : def_.rules) {
    check_condition(rule.condition);
    RuleState st;
    st.rule = &rule;
    const Expr& a = rule.action;
    if (!is_call(a, "count")) invalid(a, "action must be count(E) or count(unique(E))");
    const Expr& inner = a.args[0];
    if (is_call(inner, "unique")) {
      st.distinct = true;
      st.counted = &inner.args[0];
    } else {
      st.counted = &inner;
    }
    check_condition(*st.counted);
    rules_.push_back(std::move(st));
  }
  check_final(def_.final_expr);
}

std::uint64_t CompiledMetric::accumulator(const std::string& binding) const {
  for (const auto& r : rules_) {
    if (r.rule->binding == binding) return r.value();
  }
  return 0;
}

Value CompiledMetric::eval(const Expr& e, const Triple& t) {
  switch (e.kind) {
    case Expr::Kind::var:
      switch (e.text[0]) {
        case 's': return t.subject;
        case 'p': return t.predicate;
        default: return t.object;
      }
    case Expr::Kind::number: return e.number;
    case Expr::Kind::string: return e.text;
    case Expr::Kind::and_: return truthy(e.args[0], t) && truthy(e.args[1], t);
    case Expr::Kind::or_: return truthy(e.args[0], t) || truthy(e.args[1], t);
    case Expr::Kind::not_: return !truthy(e.args[0], t);
    case Expr::Kind::rule_ref: return std::monostate{};
    case Expr::Kind::call: break;
  }
  const FunctionEntry* fn = registry_->find(e.text);
  std::vector<Value> args;
  args.reserve(e.args.size());
  for (const auto& a : e.args) args.push_back(eval(a, t));
  if (fn->purity == Purity::pure) return fn->evaluator(args);
  auto key = memo_key(fn->name, args);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Value result = fn->evaluator(args);
  memo_.emplace(std::move(key), result);
  return result;
}

bool CompiledMetric::truthy(const Expr& e, const Triple& t) {
  const Value v = eval(e, t);
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw Error(ErrorCode::evaluation_error, "condition '" + to_source(e) + "' is not boolean");
}

void CompiledMetric::on_accept(const Triple& triple) {
  for (auto& st : rules_) {
    try {
      if (!truthy(st.rule->condition, triple)) continue;
      if (st.distinct) {
        st.seen.insert(memo_key("", std::vector<Value>{eval(*st.counted, triple)}));
      } else {
        ++st.matches;
      }
    } catch (const std::exception& ex) {
      ++evaluation_errors_;
      if (warnings().size() < kMaxRecordedWarnings) {
        warn("rule " + st.rule->binding + ": " + ex.what() + " (triple " + to_ntriples(triple) + ")");
      }
    }
  }
}

double CompiledMetric::eval_final(const Expr& e, const AssessmentRun& run) {
  if (e.kind == Expr::Kind::number) return e.number;
  if (e.text == "action") return static_cast<double>(accumulator(e.args[0].text));
  if (e.text == "totaltriples") return static_cast<double>(run.total_triples);
  const double a = eval_final(e.args[0], run);
  const double b = eval_final(e.args[1], run);
  if (e.text == "add") return a + b;
  return ratio_or_degenerate(a, b, "non-zero denominator in " + to_source(e)).as_double();
}

MetricValue CompiledMetric::on_finalize(const AssessmentRun& run) {
  if (evaluation_errors_ > kMaxRecordedWarnings) {
    warn(std::to_string(evaluation_errors_) + " evaluation errors in total");
  }
  return MetricValue::real(eval_final(def_.final_expr, run));
}

std::unique_ptr<CompiledMetric> compile(const MetricDef& def,
                                        std::shared_ptr<const FunctionRegistry> registry,
                                        ValueKind kind) {
  return std::make_unique<CompiledMetric>(def, std::move(registry), kind);
}

}  // namespace ldq::lqml
