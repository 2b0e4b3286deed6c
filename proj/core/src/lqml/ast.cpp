#include "ldq/lqml/ast.hpp"

#include <charconv>
#include <nlohmann/json.hpp>

namespace ldq::lqml {

Expr Expr::var(char which, SourcePos pos) {
  Expr e;
  e.kind = Kind::var;
  e.text = std::string(1, which);
  e.pos = pos;
  return e;
}

Expr Expr::rule_ref(std::string name, SourcePos pos) {
  Expr e;
  e.kind = Kind::rule_ref;
  e.text = std::move(name);
  e.pos = pos;
  return e;
}

Expr Expr::call(std::string name, std::vector<Expr> args, SourcePos pos) {
  Expr e;
  e.kind = Kind::call;
  e.text = std::move(name);
  e.args = std::move(args);
  e.pos = pos;
  return e;
}

Expr Expr::conjunction(Expr lhs, Expr rhs, SourcePos pos) {
  Expr e;
  e.kind = Kind::and_;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  e.pos = pos;
  return e;
}

Expr Expr::disjunction(Expr lhs, Expr rhs, SourcePos pos) {
  Expr e = conjunction(std::move(lhs), std::move(rhs), pos);
  e.kind = Kind::or_;
  return e;
}

Expr Expr::negation(Expr operand, SourcePos pos) {
  Expr e;
  e.kind = Kind::not_;
  e.args.push_back(std::move(operand));
  e.pos = pos;
  return e;
}

Expr Expr::number_lit(double value, SourcePos pos) {
  Expr e;
  e.kind = Kind::number;
  e.number = value;
  e.pos = pos;
  return e;
}

Expr Expr::string_lit(std::string value, SourcePos pos) {
  Expr e;
  e.kind = Kind::string;
  e.text = std::move(value);
  e.pos = pos;
  return e;
}

bool Expr::operator==(const Expr& other) const {
  return kind == other.kind && text == other.text && number == other.number && args == other.args;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string number_text(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

const char* kind_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::var: return "var";
    case Expr::Kind::rule_ref: return "rule_ref";
    case Expr::Kind::call: return "call";
    case Expr::Kind::and_: return "and";
    case Expr::Kind::or_: return "or";
    case Expr::Kind::not_: return "not";
    case Expr::Kind::number: return "number";
    case Expr::Kind::string: return "string";
  }
  return "?";
}

nlohmann::json expr_json(const Expr& e) {
  nlohmann::json j{{"kind", kind_name(e.kind)}};
  switch (e.kind) {
    case Expr::Kind::var: j["name"] = "?" + e.text; break;
    case Expr::Kind::rule_ref: j["rule"] = e.text; break;
    case Expr::Kind::call: j["function"] = e.text; break;
    case Expr::Kind::number: j["value"] = e.number; break;
    case Expr::Kind::string: j["value"] = e.text; break;
    default: break;
  }
  if (!e.args.empty()) {
    auto& args = j["args"] = nlohmann::json::array();
    for (const auto& a : e.args) args.push_back(expr_json(a));
  }
  return j;
}

}  // namespace

std::string to_source(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::var: return "?" + e.text;
    case Expr::Kind::rule_ref: return e.text;
    case Expr::Kind::number: return number_text(e.number);
    case Expr::Kind::string: return quote(e.text);
    case Expr::Kind::not_: return "!" + to_source(e.args[0]);
    case Expr::Kind::and_: return "(" + to_source(e.args[0]) + " && " + to_source(e.args[1]) + ")";
    case Expr::Kind::or_: return "(" + to_source(e.args[0]) + " || " + to_source(e.args[1]) + ")";
    case Expr::Kind::call: {
      std::string out = e.text + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += to_source(e.args[i]);
      }
      return out + ")";
    }
  }
  return {};
}

std::string to_source(const MetricDef& def) {
  std::string out = "def{" + def.name + "}:\n";
  out += "  metric{<" + def.metric_iri + ">}";
  if (!def.label.empty()) out += ";\n  label{" + quote(def.label) + "}";
  if (!def.description.empty()) out += ";\n  description{" + quote(def.description) + "}";
  for (const auto& r : def.rules) {
    out += ";\n  " + r.binding + " = match{" + to_source(r.condition) + "}\n    => action{" +
           to_source(r.action) + "}";
  }
  out += ";\n  finally{" + to_source(def.final_expr) + "}.\n";
  return out;
}

std::string to_json(const MetricDef& def, int indent) {
  nlohmann::json j{{"name", def.name},
                   {"metric", def.metric_iri},
                   {"label", def.label},
                   {"description", def.description}};
  auto& rules = j["rules"] = nlohmann::json::array();
  for (const auto& r : def.rules) {
    rules.push_back({{"binding", r.binding},
                     {"match", expr_json(r.condition)},
                     {"action", expr_json(r.action)}});
  }
  j["finally"] = expr_json(def.final_expr);
  return j.dump(indent);
}

}  // namespace ldq::lqml
