#pragma once

#include <string>
#include <string_view>

#include "ldq/error.hpp"
#include "ldq/lqml/ast.hpp"

namespace ldq::lqml {

class FunctionRegistry;

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string token, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

/// Syntax plus structural checks (variables, metric clause, single finally,
/// rule references). Function names are not checked here.
MetricDef parse_lqml(std::string_view source);

/// As above, then checks every call against the registry.
MetricDef parse_lqml(std::string_view source, const FunctionRegistry& registry);

/// Throws unknown_function / arity_mismatch for calls the registry cannot serve.
void validate_calls(const MetricDef& def, const FunctionRegistry& registry);

MetricDef parse_lqml_file(const std::string& path);

}  // namespace ldq::lqml
