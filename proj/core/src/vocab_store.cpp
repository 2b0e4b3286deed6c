#include "ldq/vocab_store.hpp"

#include <algorithm>
#include <fstream>

#include "ldq/error.hpp"
#include "ldq/ntriples.hpp"

namespace ldq {

namespace {
const std::string& subclass_of() {
  static const std::string iri = vocab::term(vocab::rdfs, "subClassOf");
  return iri;
}
const std::string& disjoint_with() {
  static const std::string iri = vocab::term(vocab::owl, "disjointWith");
  return iri;
}
}  // namespace

VocabularyStore VocabularyStore::load_directory(const std::filesystem::path& directory) {
  VocabularyStore store;
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    throw Error(ErrorCode::invalid_config, "vocabulary directory not found: " + directory.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".nt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    NTriplesReader reader(in);
    while (auto item = reader.next()) {
      if (const auto* t = std::get_if<Triple>(&*item)) store.add(*t);
    }
  }
  return store;
}

void VocabularyStore::add(const Triple& triple) {
  if (!triple.subject.is_iri()) return;
  const auto& s = triple.subject.value();
  defined_.insert(s);
  if (!triple.object.is_iri()) return;
  const auto& p = triple.predicate.value();
  const auto& o = triple.object.value();
  if (p == subclass_of()) {
    superclasses_[s].push_back(o);
  } else if (p == disjoint_with()) {
    disjoint_.emplace(s, o);
    disjoint_.emplace(o, s);
  }
}

void VocabularyStore::add_ntriples(std::string_view text) {
  for (const auto& t : parse_ntriples(text).triples) add(t);
}

bool VocabularyStore::defines(std::string_view iri) const {
  return defined_.find(std::string(iri)) != defined_.end();
}

std::set<std::string> VocabularyStore::superclass_closure(const std::string& class_iri) const {
  std::set<std::string> closure{class_iri};
  std::vector<std::string> frontier{class_iri};
  while (!frontier.empty()) {
    const auto current = std::move(frontier.back());
    frontier.pop_back();
    auto it = superclasses_.find(current);
    if (it == superclasses_.end()) continue;
    for (const auto& parent : it->second) {
      if (closure.insert(parent).second) frontier.push_back(parent);
    }
  }
  return closure;
}

bool VocabularyStore::declared_disjoint(const std::string& a, const std::string& b) const {
  return disjoint_.count({a, b}) > 0;
}

}  // namespace ldq
