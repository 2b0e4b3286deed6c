#include "ldq/ntriples.hpp"

#include <algorithm>
#include <sstream>

namespace ldq {

namespace {

class SyntaxError {
 public:
  explicit SyntaxError(std::string message) : message(std::move(message)) {}
  std::string message;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_alpha(char c) noexcept { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

class LineParser {
 public:
  explicit LineParser(std::string_view line) : text_(line) {}

  bool at_end() const noexcept { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  char peek() const noexcept { return at_end() ? '\0' : text_[pos_]; }

  Triple statement() {
    Triple t;
    t.subject = subject();
    skip_ws();
    if (peek() != '<') fail("predicate must be an IRI");
    t.predicate = RdfTerm::iri(iri_ref());
    skip_ws();
    t.object = object();
    skip_ws();
    if (peek() != '.') fail("expected '.' at end of statement");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected trailing content");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what + " at column " + std::to_string(pos_ + 1));
  }

  RdfTerm subject() {
    if (peek() == '<') return RdfTerm::iri(iri_ref());
    if (peek() == '_') return RdfTerm::blank(blank_label());
    if (at_end()) fail("missing subject");
    fail("subject must be an IRI or blank node");
  }

  RdfTerm object() {
    switch (peek()) {
      case '<': return RdfTerm::iri(iri_ref());
      case '_': return RdfTerm::blank(blank_label());
      case '"': return literal();
      case '.':
      case '\0': fail("missing object");
      default: fail("object must be an IRI, blank node or literal");
    }
  }

  std::uint32_t uchar() {
    // Positioned on the 'u' or 'U' after a backslash.
    const std::size_t digits = text_[pos_] == 'u' ? 4 : 8;
    ++pos_;
    if (pos_ + digits > text_.size()) fail("truncated \\u escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const int v = hex_value(text_[pos_ + i]);
      if (v < 0) fail("invalid hex digit in escape");
      cp = (cp << 4) | static_cast<std::uint32_t>(v);
    }
    pos_ += digits;
    if (cp > 0x10FFFF) fail("code point out of range");
    return cp;
  }

  std::string iri_ref() {
    ++pos_;  // '<'
    std::string out;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        if (peek() != 'u' && peek() != 'U') fail("only \\u escapes allowed in IRIs");
        append_utf8(out, uchar());
        continue;
      }
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`') {
        fail("illegal character in IRI");
      }
      out.push_back(static_cast<char>(c));
      ++pos_;
    }
    if (!is_valid_iri_text(out)) fail("empty or malformed IRI");
    return out;
  }

  std::string blank_label() {
    ++pos_;
    if (peek() != ':') fail("expected ':' after '_'");
    ++pos_;
    const std::size_t start = pos_;
    while (!at_end()) {
      const char c = text_[pos_];
      if (is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '.' ||
          static_cast<unsigned char>(c) >= 0x80) {
        ++pos_;
      } else {
        break;
      }
    }
    // A label may not end with '.', which instead terminates the statement.
    while (pos_ > start && text_[pos_ - 1] == '.') --pos_;
    if (pos_ == start) fail("empty blank node label");
    return sanitize_blank_label(text_.substr(start, pos_ - start));
  }

  RdfTerm literal() {
    ++pos_;  // '"'
    std::string lexical;
    while (true) {
      if (at_end()) fail("unterminated literal");
      const char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        switch (peek()) {
          case 't': lexical.push_back('\t'); ++pos_; break;
          case 'b': lexical.push_back('\b'); ++pos_; break;
          case 'n': lexical.push_back('\n'); ++pos_; break;
          case 'r': lexical.push_back('\r'); ++pos_; break;
          case 'f': lexical.push_back('\f'); ++pos_; break;
          case '"': lexical.push_back('"'); ++pos_; break;
          case '\'': lexical.push_back('\''); ++pos_; break;
          case '\\': lexical.push_back('\\'); ++pos_; break;
          case 'u':
          case 'U': append_utf8(lexical, uchar()); break;
          default: fail("invalid escape sequence in literal");
        }
        continue;
      }
      lexical.push_back(c);
      ++pos_;
    }
    if (peek() == '@') {
      ++pos_;
      const std::size_t start = pos_;
      while (is_alpha(peek())) ++pos_;
      if (pos_ == start) fail("empty language tag");
      while (peek() == '-') {
        ++pos_;
        const std::size_t sub = pos_;
        while (is_alpha(peek()) || is_digit(peek())) ++pos_;
        if (pos_ == sub) fail("malformed language tag");
      }
      return RdfTerm::lang_literal(std::move(lexical),
                                   std::string(text_.substr(start, pos_ - start)));
    }
    if (peek() == '^') {
      ++pos_;
      if (peek() != '^') fail("expected '^^' before datatype");
      ++pos_;
      if (peek() != '<') fail("datatype must be an IRI");
      return RdfTerm::typed_literal(std::move(lexical), iri_ref());
    }
    return RdfTerm::literal(std::move(lexical));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<ParsedLine> parse_ntriples_line(std::string_view line, std::size_t line_number) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  LineParser parser(line);
  parser.skip_ws();
  if (parser.at_end() || parser.peek() == '#') return std::nullopt;
  try {
    return ParsedLine{parser.statement()};
  } catch (const SyntaxError& e) {
    return ParsedLine{LineError{line_number, e.message}};
  }
}

std::optional<ParsedLine> NTriplesReader::next() {
  while (std::getline(input_, buffer_)) {
    ++line_number_;
    if (auto parsed = parse_ntriples_line(buffer_, line_number_)) return parsed;
  }
  return std::nullopt;
}

ParsedDocument parse_ntriples(std::string_view text) {
  ParsedDocument doc;
  std::size_t line_number = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = text.substr(0, eol);
    ++line_number;
    if (auto parsed = parse_ntriples_line(line, line_number)) {
      if (auto* t = std::get_if<Triple>(&*parsed)) {
        doc.triples.push_back(std::move(*t));
      } else {
        doc.errors.push_back(std::get<LineError>(std::move(*parsed)));
      }
    }
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return doc;
}

std::string to_canonical_ntriples(const std::vector<Triple>& triples) {
  std::vector<std::string> lines;
  lines.reserve(triples.size());
  for (const auto& t : triples) lines.push_back(to_ntriples(t));
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out.push_back('\n');
  }
  return out;
}

}  // namespace ldq
