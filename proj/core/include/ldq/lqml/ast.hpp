#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ldq::lqml {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Expression node. `text` holds the variable letter (s, p, o), the rule
/// name, the function name or the string value depending on `kind`.
struct Expr {
  enum class Kind { var, rule_ref, call, and_, or_, not_, number, string };

  Kind kind = Kind::number;
  std::string text;
  double number = 0.0;
  std::vector<Expr> args;
  SourcePos pos;

  static Expr var(char which, SourcePos pos = {});
  static Expr rule_ref(std::string name, SourcePos pos = {});
  static Expr call(std::string name, std::vector<Expr> args, SourcePos pos = {});
  static Expr conjunction(Expr lhs, Expr rhs, SourcePos pos = {});
  static Expr disjunction(Expr lhs, Expr rhs, SourcePos pos = {});
  static Expr negation(Expr operand, SourcePos pos = {});
  static Expr number_lit(double value, SourcePos pos = {});
  static Expr string_lit(std::string value, SourcePos pos = {});

  /// Structural equality; source positions are ignored.
  bool operator==(const Expr& other) const;
};

struct Rule {
  std::string binding;
  Expr condition;
  Expr action;
  bool operator==(const Rule&) const = default;
};

struct MetricDef {
  std::string name;
  std::string metric_iri;
  std::string label;
  std::string description;
  std::vector<Rule> rules;
  Expr final_expr;
  bool operator==(const MetricDef&) const = default;
};

/// Canonical LQML source; parse(to_source(d)) == d.
std::string to_source(const Expr& expr);
std::string to_source(const MetricDef& def);

/// AST as a JSON document (used by `ldq lqml check`).
std::string to_json(const MetricDef& def, int indent = 2);

}  // namespace ldq::lqml
