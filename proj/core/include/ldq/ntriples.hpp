#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ldq/rdf.hpp"

namespace ldq {

/// A malformed input line. Line numbers are 1-based.
struct LineError {
  std::size_t line = 0;
  std::string message;
  bool operator==(const LineError&) const = default;
};

using ParsedLine = std::variant<Triple, LineError>;

/// Parses one N-Triples statement. Returns nullopt for blank and comment-only
/// lines.
std::optional<ParsedLine> parse_ntriples_line(std::string_view line, std::size_t line_number);

/// Pull-style reader over a byte stream. Malformed lines come back in-band as
/// LineError items; the reader never throws on bad input.
class NTriplesReader {
 public:
  explicit NTriplesReader(std::istream& input) : input_(input) {}

  std::optional<ParsedLine> next();

  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::istream& input_;
  std::string buffer_;
  std::size_t line_number_ = 0;
};

/// Convenience for small inputs: every triple and error in document order.
struct ParsedDocument {
  std::vector<Triple> triples;
  std::vector<LineError> errors;
};

ParsedDocument parse_ntriples(std::string_view text);

/// Sorted, de-duplicated N-Triples serialisation; one statement per line.
std::string to_canonical_ntriples(const std::vector<Triple>& triples);

}  // namespace ldq
