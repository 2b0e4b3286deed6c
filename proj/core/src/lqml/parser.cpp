#include "ldq/lqml/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "ldq/lqml/functions.hpp"
#include "ldq/rdf.hpp"

namespace ldq::lqml {

namespace {

std::string where(std::size_t line, std::size_t column, const std::string& token,
                  const std::string& message) {
  std::ostringstream out;
  out << line << ':' << column << ": " << message;
  if (!token.empty()) out << " near '" << token << "'";
  return out.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string token,
                       const std::string& message)
    : Error(ErrorCode::parse_error, where(line, column, token, message)),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

namespace {

enum class Tok {
  ident,
  var,
  number,
  string,
  iri,
  lbrace,
  rbrace,
  lparen,
  rparen,
  semicolon,
  colon,
  dot,
  comma,
  equals,
  arrow,
  and_,
  or_,
  bang,
  end
};

struct Token {
  Tok type;
  std::string text;  // raw spelling, or decoded value for strings / IRIs
  double number = 0.0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.pos = {line_, col_};
    if (i_ >= src_.size()) {
      t.type = Tok::end;
      return t;
    }
    const char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = i_;
      while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
        advance();
      }
      t.type = Tok::ident;
      t.text = std::string(src_.substr(start, i_ - start));
      return t;
    }
    if (c == '?') {
      advance();
      const auto start = i_;
      while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
        advance();
      }
      t.type = Tok::var;
      t.text = "?" + std::string(src_.substr(start, i_ - start));
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (c == '"') return lex_string(t);
    if (c == '<') return lex_iri(t);

    auto two = src_.substr(i_, 2);
    auto punct = [&](Tok type, std::size_t len) {
      t.type = type;
      t.text = std::string(src_.substr(i_, len));
      for (std::size_t k = 0; k < len; ++k) advance();
      return t;
    };
    if (two == "=>") return punct(Tok::arrow, 2);
    if (two == "&&") return punct(Tok::and_, 2);
    if (two == "||") return punct(Tok::or_, 2);
    switch (c) {
      case '{': return punct(Tok::lbrace, 1);
      case '}': return punct(Tok::rbrace, 1);
      case '(': return punct(Tok::lparen, 1);
      case ')': return punct(Tok::rparen, 1);
      case ';': return punct(Tok::semicolon, 1);
      case ':': return punct(Tok::colon, 1);
      case '.': return punct(Tok::dot, 1);
      case ',': return punct(Tok::comma, 1);
      case '=': return punct(Tok::equals, 1);
      case '!': return punct(Tok::bang, 1);
      default: break;
    }
    throw ParseError(t.pos.line, t.pos.column, std::string(1, c), "unexpected character");
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[i_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < src_.size()) {
      const char c = src_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token& lex_number(Token& t) {
    const auto start = i_;
    auto digits = [&] {
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) advance();
    };
    digits();
    if (i_ + 1 < src_.size() && src_[i_] == '.' && std::isdigit(static_cast<unsigned char>(src_[i_ + 1]))) {
      advance();
      digits();
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      auto j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
        while (i_ < j) advance();
        digits();
      }
    }
    t.type = Tok::number;
    t.text = std::string(src_.substr(start, i_ - start));
    std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    return t;
  }

  Token& lex_string(Token& t) {
    advance();
    std::string value;
    while (true) {
      if (i_ >= src_.size()) throw ParseError(t.pos.line, t.pos.column, "\"", "unterminated string");
      char c = src_[i_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (i_ >= src_.size()) continue;
        c = src_[i_];
        switch (c) {
          case 'n': value.push_back('\n'); break;
          case 't': value.push_back('\t'); break;
          case '"': value.push_back('"'); break;
          case '\\': value.push_back('\\'); break;
          default:
            throw ParseError(line_, col_, std::string("\\") + c, "unknown escape");
        }
        advance();
        continue;
      }
      value.push_back(c);
      advance();
    }
    t.type = Tok::string;
    t.text = std::move(value);
    return t;
  }

  Token& lex_iri(Token& t) {
    advance();
    const auto start = i_;
    while (i_ < src_.size() && src_[i_] != '>' && src_[i_] != '\n') advance();
    if (i_ >= src_.size() || src_[i_] != '>') {
      throw ParseError(t.pos.line, t.pos.column, "<", "unterminated IRI");
    }
    t.type = Tok::iri;
    t.text = std::string(src_.substr(start, i_ - start));
    advance();
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  MetricDef program() {
    MetricDef def;
    expect_keyword("def");
    expect(Tok::lbrace, "'{'");
    def.name = expect(Tok::ident, "metric name").text;
    expect(Tok::rbrace, "'}'");
    expect(Tok::colon, "':'");

    bool have_metric = false;
    bool have_finally = false;
    std::set<std::string> bindings;
    do {
      const Token head = expect(Tok::ident, "clause");
      if (head.text == "metric") {
        if (have_metric) fail(head, "duplicate metric clause");
        have_metric = true;
        expect(Tok::lbrace, "'{'");
        const Token iri = expect(Tok::iri, "IRI");
        if (iri.text.empty() || !is_valid_iri_text(iri.text)) fail(iri, "malformed metric IRI");
        def.metric_iri = iri.text;
        expect(Tok::rbrace, "'}'");
      } else if (head.text == "label" || head.text == "description") {
        auto& slot = head.text == "label" ? def.label : def.description;
        expect(Tok::lbrace, "'{'");
        slot = expect(Tok::string, "string").text;
        expect(Tok::rbrace, "'}'");
      } else if (head.text == "finally") {
        if (have_finally) fail(head, "more than one finally clause");
        have_finally = true;
        expect(Tok::lbrace, "'{'");
        def.final_expr = expr();
        expect(Tok::rbrace, "'}'");
      } else if (cur_.type == Tok::equals) {
        if (is_reserved(head.text)) fail(head, "reserved word used as rule name");
        if (!bindings.insert(head.text).second) fail(head, "rule name bound twice");
        advance();
        Rule rule;
        rule.binding = head.text;
        expect_keyword("match");
        expect(Tok::lbrace, "'{'");
        rule.condition = expr();
        expect(Tok::rbrace, "'}'");
        expect(Tok::arrow, "'=>'");
        expect_keyword("action");
        expect(Tok::lbrace, "'{'");
        rule.action = expr();
        expect(Tok::rbrace, "'}'");
        def.rules.push_back(std::move(rule));
      } else {
        fail(head, "unknown clause");
      }
    } while (accept(Tok::semicolon));
    expect(Tok::dot, "'.'");
    if (cur_.type != Tok::end) fail(cur_, "trailing input after '.'");

    if (!have_metric) throw ParseError(1, 1, "", "missing metric{<iri>} clause");
    if (!have_finally) throw ParseError(1, 1, "", "missing finally clause");
    for (const auto& r : def.rules) check_refs(r.condition, bindings);
    for (const auto& r : def.rules) check_refs(r.action, bindings);
    check_refs(def.final_expr, bindings);
    return def;
  }

 private:
  static bool is_reserved(const std::string& word) {
    return word == "def" || word == "metric" || word == "label" || word == "description" ||
           word == "match" || word == "action" || word == "finally";
  }

  static void check_refs(const Expr& e, const std::set<std::string>& bindings) {
    if (e.kind == Expr::Kind::rule_ref && !bindings.count(e.text)) {
      throw Error(ErrorCode::unbound_rule_ref,
                  std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) +
                      ": reference to undefined rule '" + e.text + "'");
    }
    for (const auto& a : e.args) check_refs(a, bindings);
  }

  Expr expr() { return disjunction(); }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (cur_.type == Tok::or_) {
      const auto pos = cur_.pos;
      advance();
      lhs = Expr::disjunction(std::move(lhs), conjunction(), pos);
    }
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = unary();
    while (cur_.type == Tok::and_) {
      const auto pos = cur_.pos;
      advance();
      lhs = Expr::conjunction(std::move(lhs), unary(), pos);
    }
    return lhs;
  }

  Expr unary() {
    if (cur_.type == Tok::bang) {
      const auto pos = cur_.pos;
      advance();
      return Expr::negation(unary(), pos);
    }
    return primary();
  }

  Expr primary() {
    const Token t = cur_;
    switch (t.type) {
      case Tok::lparen: {
        advance();
        Expr inner = expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::var:
        if (t.text != "?s" && t.text != "?p" && t.text != "?o") {
          fail(t, "unknown variable (only ?s, ?p, ?o are bound)");
        }
        advance();
        return Expr::var(t.text[1], t.pos);
      case Tok::number:
        advance();
        return Expr::number_lit(t.number, t.pos);
      case Tok::string:
        advance();
        return Expr::string_lit(t.text, t.pos);
      case Tok::ident: {
        advance();
        if (!accept(Tok::lparen)) return Expr::rule_ref(t.text, t.pos);
        std::vector<Expr> args;
        if (cur_.type != Tok::rparen) {
          do {
            args.push_back(expr());
          } while (accept(Tok::comma));
        }
        expect(Tok::rparen, "')'");
        return Expr::call(t.text, std::move(args), t.pos);
      }
      default:
        fail(t, "expected an expression");
    }
  }

  void advance() { cur_ = lex_.next(); }

  bool accept(Tok type) {
    if (cur_.type != type) return false;
    advance();
    return true;
  }

  Token expect(Tok type, const char* what) {
    if (cur_.type != type) fail(cur_, std::string("expected ") + what);
    Token t = std::move(cur_);
    advance();
    return t;
  }

  void expect_keyword(const char* word) {
    if (cur_.type != Tok::ident || cur_.text != word) fail(cur_, std::string("expected '") + word + "'");
    advance();
  }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    std::string spelling = t.type == Tok::end ? "<end of input>" : t.text;
    if (t.type == Tok::string) spelling = "\"" + t.text + "\"";
    if (t.type == Tok::iri) spelling = "<" + t.text + ">";
    throw ParseError(t.pos.line, t.pos.column, spelling, message);
  }

  Lexer lex_;
  Token cur_;
};

void validate_expr(const Expr& e, const FunctionRegistry& registry) {
  if (e.kind == Expr::Kind::call) {
    const auto* entry = registry.find(e.text);
    const std::string at = std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) + ": ";
    if (!entry) throw Error(ErrorCode::unknown_function, at + "unknown function '" + e.text + "'");
    if (entry->arity != e.args.size()) {
      throw Error(ErrorCode::arity_mismatch,
                  at + "'" + e.text + "' takes " + std::to_string(entry->arity) + " argument(s), got " +
                      std::to_string(e.args.size()));
    }
  }
  for (const auto& a : e.args) validate_expr(a, registry);
}

}  // namespace

MetricDef parse_lqml(std::string_view source) { return Parser(source).program(); }

MetricDef parse_lqml(std::string_view source, const FunctionRegistry& registry) {
  auto def = parse_lqml(source);
  validate_calls(def, registry);
  return def;
}

void validate_calls(const MetricDef& def, const FunctionRegistry& registry) {
  for (const auto& r : def.rules) {
    validate_expr(r.condition, registry);
    validate_expr(r.action, registry);
  }
  validate_expr(def.final_expr, registry);
}

MetricDef parse_lqml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::source_unreadable, "cannot read LQML file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lqml(buf.str());
}

}  // namespace ldq::lqml
