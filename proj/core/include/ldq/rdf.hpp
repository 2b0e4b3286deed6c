#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace ldq {

struct Iri {
  std::string value;
  auto operator<=>(const Iri&) const = default;
};

struct BlankNode {
  std::string label;
  auto operator<=>(const BlankNode&) const = default;
};

// A literal carries at most one of datatype/language. Plain literals are
// stored without a datatype; xsd:string is folded into that form.
struct Literal {
  std::string lexical;
  std::optional<std::string> datatype;
  std::optional<std::string> language;
  auto operator<=>(const Literal&) const = default;
};

class RdfTerm {
 public:
  RdfTerm() = default;
  RdfTerm(Iri iri) : term_(std::move(iri)) {}
  RdfTerm(BlankNode node) : term_(std::move(node)) {}
  RdfTerm(Literal literal) : term_(std::move(literal)) {}

  static RdfTerm iri(std::string value) { return Iri{std::move(value)}; }
  static RdfTerm blank(std::string label) { return BlankNode{std::move(label)}; }
  static RdfTerm literal(std::string lexical) {
    return Literal{std::move(lexical), std::nullopt, std::nullopt};
  }
  static RdfTerm lang_literal(std::string lexical, std::string language);
  static RdfTerm typed_literal(std::string lexical, std::string datatype);

  bool is_iri() const noexcept { return std::holds_alternative<Iri>(term_); }
  bool is_blank() const noexcept { return std::holds_alternative<BlankNode>(term_); }
  bool is_literal() const noexcept { return std::holds_alternative<Literal>(term_); }

  const Iri& as_iri() const { return std::get<Iri>(term_); }
  const BlankNode& as_blank() const { return std::get<BlankNode>(term_); }
  const Literal& as_literal() const { return std::get<Literal>(term_); }

  /// IRI text, blank-node label or literal lexical form.
  const std::string& value() const noexcept;

  /// The effective datatype of a literal (rdf:langString / xsd:string when
  /// implicit). Empty for non-literals.
  std::string datatype() const;

  const std::variant<Iri, BlankNode, Literal>& variant() const noexcept { return term_; }

  auto operator<=>(const RdfTerm&) const = default;
  bool operator==(const RdfTerm&) const = default;

 private:
  std::variant<Iri, BlankNode, Literal> term_;
};

struct Triple {
  RdfTerm subject;
  RdfTerm predicate;
  RdfTerm object;
  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

/// Serialises a single term in N-Triples syntax.
std::string to_ntriples(const RdfTerm& term);
/// One N-Triples statement line, without the trailing newline.
std::string to_ntriples(const Triple& triple);

/// Maps an arbitrary label onto `[A-Za-z0-9_]+`. Conforming labels are
/// returned unchanged; others get their offending characters replaced and a
/// short digest of the original appended so distinct labels stay distinct.
std::string sanitize_blank_label(std::string_view label);

bool is_valid_blank_label(std::string_view label) noexcept;
bool is_valid_iri_text(std::string_view text) noexcept;

/// FNV-1a followed by a murmur finaliser; stable across platforms and runs.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed = 0) noexcept;

namespace vocab {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view dc = "http://purl.org/dc/elements/1.1/";
inline constexpr std::string_view dcterms = "http://purl.org/dc/terms/";
inline constexpr std::string_view void_ = "http://rdfs.org/ns/void#";
inline constexpr std::string_view dcat = "http://www.w3.org/ns/dcat#";
inline constexpr std::string_view prov = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view cc = "http://creativecommons.org/ns#";
inline constexpr std::string_view daq = "http://purl.org/eis/vocab/daq#";
inline constexpr std::string_view qpro = "http://purl.org/eis/vocab/qpro#";
inline constexpr std::string_view dqm = "http://purl.org/eis/vocab/dqm#";

std::string term(std::string_view ns, std::string_view local);

inline const std::string rdf_type = term(rdf, "type");
inline const std::string xsd_string = term(xsd, "string");
inline const std::string rdf_lang_string = term(rdf, "langString");
}  // namespace vocab

}  // namespace ldq

template <>
struct std::hash<ldq::RdfTerm> {
  std::size_t operator()(const ldq::RdfTerm& term) const noexcept;
};

template <>
struct std::hash<ldq::Triple> {
  std::size_t operator()(const ldq::Triple& triple) const noexcept;
};
