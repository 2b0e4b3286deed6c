#include "ldq/lqml/functions.hpp"

#include "ldq/error.hpp"
#include "ldq/probe.hpp"

namespace ldq::lqml {

void FunctionRegistry::add(FunctionEntry entry) {
  if (entries_.count(entry.name)) {
    throw Error(ErrorCode::duplicate_function, "function already registered: " + entry.name);
  }
  auto name = entry.name;
  entries_.emplace(std::move(name), std::move(entry));
}

const FunctionEntry* FunctionRegistry::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

bool is_accumulator_form(std::string_view name) noexcept {
  return name == "count" || name == "unique" || name == "action" || name == "totaltriples";
}

namespace {

double number_arg(const Value& v, const char* fn) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw Error(ErrorCode::evaluation_error, std::string(fn) + ": numeric argument expected");
}

Value not_callable(std::span<const Value>) {
  throw Error(ErrorCode::evaluation_error, "accumulator form evaluated outside its context");
}

}  // namespace

FunctionRegistry FunctionRegistry::with_builtins(std::shared_ptr<ResourceProber> prober) {
  FunctionRegistry r;
  r.add({"isURI", 1, Purity::pure, [](std::span<const Value> args) -> Value {
           const auto* term = std::get_if<RdfTerm>(&args[0]);
           return term != nullptr && term->is_iri();
         }});
  r.add({"isDereferenceable", 1, Purity::effectful,
         [prober](std::span<const Value> args) -> Value {
           const auto* term = std::get_if<RdfTerm>(&args[0]);
           if (term == nullptr || !term->is_iri()) return false;
           const auto& iri = term->value();
           if (iri.find('#') != std::string::npos) return true;
           if (!prober) {
             throw Error(ErrorCode::evaluation_error, "isDereferenceable: no HTTP client configured");
           }
           return prober->dereferenceability(iri).dereferenceable;
         }});
  r.add({"ratio", 2, Purity::pure, [](std::span<const Value> args) -> Value {
           const double num = number_arg(args[0], "ratio");
           const double den = number_arg(args[1], "ratio");
           return den > 0 ? num / den : 0.0;
         }});
  r.add({"add", 2, Purity::pure, [](std::span<const Value> args) -> Value {
           return number_arg(args[0], "add") + number_arg(args[1], "add");
         }});
  for (const char* name : {"count", "unique", "action", "totaltriples"}) {
    r.add({name, 1, Purity::pure, not_callable});
  }
  return r;
}

}  // namespace ldq::lqml
