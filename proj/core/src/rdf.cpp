#include "ldq/rdf.hpp"

#include <cstdio>

namespace ldq {

namespace {

void append_iri(std::string& out, std::string_view iri) {
  out.push_back('<');
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' ||
        c == '|' || c == '^' || c == '`' || c == '\\') {
      char buf[11];
      std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
      out += buf;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  out.push_back('>');
}

void append_literal_text(std::string& out, std::string_view text) {
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

bool is_label_char(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

RdfTerm RdfTerm::lang_literal(std::string lexical, std::string language) {
  for (auto& c : language) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return Literal{std::move(lexical), std::nullopt, std::move(language)};
}

RdfTerm RdfTerm::typed_literal(std::string lexical, std::string datatype) {
  if (datatype == vocab::xsd_string) return literal(std::move(lexical));
  return Literal{std::move(lexical), std::move(datatype), std::nullopt};
}

const std::string& RdfTerm::value() const noexcept {
  return std::visit(
      [](const auto& t) -> const std::string& {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Iri>) return t.value;
        else if constexpr (std::is_same_v<T, BlankNode>) return t.label;
        else return t.lexical;
      },
      term_);
}

std::string RdfTerm::datatype() const {
  if (!is_literal()) return {};
  const auto& lit = as_literal();
  if (lit.datatype) return *lit.datatype;
  if (lit.language) return vocab::rdf_lang_string;
  return vocab::xsd_string;
}

std::string to_ntriples(const RdfTerm& term) {
  std::string out;
  std::visit(
      [&out](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Iri>) {
          append_iri(out, t.value);
        } else if constexpr (std::is_same_v<T, BlankNode>) {
          out += "_:";
          out += t.label;
        } else {
          append_literal_text(out, t.lexical);
          if (t.language) {
            out.push_back('@');
            out += *t.language;
          } else if (t.datatype) {
            out += "^^";
            append_iri(out, *t.datatype);
          }
        }
      },
      term.variant());
  return out;
}

std::string to_ntriples(const Triple& triple) {
  std::string out = to_ntriples(triple.subject);
  out.push_back(' ');
  out += to_ntriples(triple.predicate);
  out.push_back(' ');
  out += to_ntriples(triple.object);
  out += " .";
  return out;
}

bool is_valid_blank_label(std::string_view label) noexcept {
  if (label.empty()) return false;
  for (char c : label) {
    if (!is_label_char(c)) return false;
  }
  return true;
}

bool is_valid_iri_text(std::string_view text) noexcept {
  if (text.empty()) return false;
  for (unsigned char c : text) {
    if (c <= 0x20 || c == '<' || c == '>') return false;
  }
  return true;
}

std::string sanitize_blank_label(std::string_view label) {
  if (is_valid_blank_label(label)) return std::string(label);
  std::string out;
  out.reserve(label.size() + 9);
  for (char c : label) out.push_back(is_label_char(c) ? c : '_');
  char digest[10];
  std::snprintf(digest, sizeof digest, "_%08x",
                static_cast<unsigned>(stable_hash(label) & 0xffffffffU));
  out += digest;
  return out;
}

std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

namespace vocab {
std::string term(std::string_view ns, std::string_view local) {
  std::string out(ns);
  out += local;
  return out;
}
}  // namespace vocab

}  // namespace ldq

std::size_t std::hash<ldq::RdfTerm>::operator()(const ldq::RdfTerm& term) const noexcept {
  auto h = ldq::stable_hash(term.value(), term.variant().index());
  if (term.is_literal()) {
    const auto& lit = term.as_literal();
    if (lit.datatype) h ^= ldq::stable_hash(*lit.datatype, 17);
    if (lit.language) h ^= ldq::stable_hash(*lit.language, 31);
  }
  return static_cast<std::size_t>(h);
}

std::size_t std::hash<ldq::Triple>::operator()(const ldq::Triple& triple) const noexcept {
  std::hash<ldq::RdfTerm> term_hash;
  std::size_t h = term_hash(triple.subject);
  h = h * 0x9e3779b97f4a7c15ULL + term_hash(triple.predicate);
  h = h * 0x9e3779b97f4a7c15ULL + term_hash(triple.object);
  return h;
}
