#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ldq/rdf.hpp"

namespace ldq {

/// Locally loaded vocabularies. A term counts as defined when some loaded
/// vocabulary uses it as a subject. Read-only after loading.
class VocabularyStore {
 public:
  VocabularyStore() = default;

  /// Loads every `*.nt` file in `directory` (non-recursive, sorted by name).
  static VocabularyStore load_directory(const std::filesystem::path& directory);

  void add(const Triple& triple);
  void add_ntriples(std::string_view text);

  bool defines(std::string_view iri) const;
  std::size_t term_count() const noexcept { return defined_.size(); }

  /// The class plus all of its superclasses under rdfs:subClassOf.
  std::set<std::string> superclass_closure(const std::string& class_iri) const;

  bool declared_disjoint(const std::string& a, const std::string& b) const;
  bool has_disjointness_axioms() const noexcept { return !disjoint_.empty(); }

 private:
  std::unordered_set<std::string> defined_;
  std::unordered_map<std::string, std::vector<std::string>> superclasses_;
  std::set<std::pair<std::string, std::string>> disjoint_;
};

}  // namespace ldq
