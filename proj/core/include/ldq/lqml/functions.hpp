#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldq/rdf.hpp"

namespace ldq {
class ResourceProber;
}

namespace ldq::lqml {

using Value = std::variant<std::monostate, bool, double, std::string, RdfTerm>;

enum class Purity { pure, effectful };

using Evaluator = std::function<Value(std::span<const Value>)>;

struct FunctionEntry {
  std::string name;
  std::size_t arity = 0;
  Purity purity = Purity::pure;
  Evaluator evaluator;
};

/// Name -> function table. Built up front, then shared read-only by every
/// compiled metric.
class FunctionRegistry {
 public:
  /// Throws Error(duplicate_function) if the name is taken.
  void add(FunctionEntry entry);
  const FunctionEntry* find(std::string_view name) const;
  std::vector<std::string> names() const;

  /// isURI/1, isDereferenceable/1, count/1, unique/1, ratio/2, add/2,
  /// action/1, totaltriples/1. Without a prober, isDereferenceable answers
  /// only for hash IRIs and raises an evaluation error otherwise.
  static FunctionRegistry with_builtins(std::shared_ptr<ResourceProber> prober = {});

 private:
  std::map<std::string, FunctionEntry, std::less<>> entries_;
};

/// count, unique, action and totaltriples are interpreted by the compiler
/// rather than called through their evaluator.
bool is_accumulator_form(std::string_view name) noexcept;

}  // namespace ldq::lqml
