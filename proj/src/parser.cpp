#include "modalkit/parser.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace modalkit {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : Error("at " + std::to_string(span.start) + ".." + std::to_string(span.end) + ": " + message),
      span_(span),
      detail_(message) {}

namespace {

enum class Tok {
  Ident,
  Forall,
  Exists,
  Not,
  Box,
  Dia,
  And,
  Or,
  Imp,
  Strict,
  Iff,
  Eq,
  LParen,
  RParen,
  Comma,
  Dot,
  End,
};

struct Token {
  Tok kind;
  SourceSpan span;
  std::string text;
};

struct Spelling {
  std::string_view text;
  Tok kind;
};

// Longest spellings first where prefixes overlap.
constexpr Spelling kSymbols[] = {
    {"<=>", Tok::Iff}, {"<>", Tok::Dia},  {"[]", Tok::Box},      {"=>", Tok::Imp},  {"|>", Tok::Strict},
    {"~", Tok::Not},   {"&", Tok::And},   {"|", Tok::Or},        {"=", Tok::Eq},    {"(", Tok::LParen},
    {")", Tok::RParen}, {",", Tok::Comma}, {".", Tok::Dot},      {"□", Tok::Box},   {"◇", Tok::Dia},
    {"¬", Tok::Not},   {"∧", Tok::And},   {"∨", Tok::Or},        {"⊃", Tok::Imp},   {"→", Tok::Imp},
    {"⥽", Tok::Strict}, {"↔", Tok::Iff},  {"∀", Tok::Forall},    {"∃", Tok::Exists},
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }

std::size_t utf8_length(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t len = 1;
  if (lead >= 0xF0 && lead < 0xF8) {
    len = 4;
  } else if (lead >= 0xE0) {
    len = lead < 0xF0 ? 3 : 1;
  } else if (lead >= 0xC0) {
    len = 2;
  }
  if (pos + len > text.size()) return 1;
  for (std::size_t i = 1; i < len; ++i) {
    if ((static_cast<unsigned char>(text[pos + i]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "forall") kind = Tok::Forall;
      if (word == "exists") kind = Tok::Exists;
      out.push_back({kind, {i, j}, std::move(word)});
      i = j;
      continue;
    }
    bool matched = false;
    for (const Spelling& s : kSymbols) {
      if (text.substr(i, s.text.size()) == s.text) {
        out.push_back({s.kind, {i, i + s.text.size()}, std::string(s.text)});
        i += s.text.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      const std::size_t len = utf8_length(text, i);
      throw ParseError({i, i + len}, "unknown token '" + std::string(text.substr(i, len)) + "'");
    }
  }
  out.push_back({Tok::End, {text.size(), text.size()}, ""});
  return out;
}

constexpr int kMaxNesting = 500;

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Formula run() {
    Formula f = formula();
    if (peek().kind == Tok::RParen) throw ParseError(peek().span, "unbalanced ')'");
    if (peek().kind != Tok::End) throw ParseError(peek().span, "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      if (peek().kind == Tok::End) throw ParseError(peek().span, std::string("expected ") + what + ", found end of input");
      throw ParseError(peek().span, std::string("expected ") + what + ", found '" + peek().text + "'");
    }
    return advance();
  }

  struct Nest {
    explicit Nest(Parser& p) : p_(p) {
      if (++p_.nesting_ > kMaxNesting) throw ParseError(p_.peek().span, "formula nested too deeply");
    }
    ~Nest() { --p_.nesting_; }
    Parser& p_;
  };

  Formula formula() {
    Nest guard(*this);
    Formula lhs = implication();
    if (peek().kind == Tok::Iff) {
      advance();
      return Formula::iff(std::move(lhs), formula());
    }
    return lhs;
  }

  // `=>` and `|>` share a level and associate to the right; a chain may not mix them.
  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind != Tok::Imp && peek().kind != Tok::Strict) return lhs;
    const Tok kind = peek().kind;
    std::vector<Formula> operands{std::move(lhs)};
    while (peek().kind == Tok::Imp || peek().kind == Tok::Strict) {
      if (peek().kind != kind) {
        throw ParseError(peek().span, "'=>' and '|>' may not be mixed without parentheses");
      }
      advance();
      operands.push_back(disjunction());
    }
    Formula acc = operands.back();
    for (std::size_t i = operands.size() - 1; i-- > 0;) {
      acc = kind == Tok::Imp ? Formula::imp(operands[i], acc) : Formula::strict_imp(operands[i], acc);
    }
    return acc;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (peek().kind == Tok::Or) {
      advance();
      acc = Formula::lor(std::move(acc), conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    while (peek().kind == Tok::And) {
      advance();
      acc = Formula::land(std::move(acc), unary());
    }
    return acc;
  }

  Formula unary() {
    Nest guard(*this);
    switch (peek().kind) {
      case Tok::Not: advance(); return Formula::lnot(unary());
      case Tok::Box: advance(); return Formula::box(unary());
      case Tok::Dia: advance(); return Formula::dia(unary());
      case Tok::Forall:
      case Tok::Exists: return quantifier();
      default: return primary();
    }
  }

  Formula quantifier() {
    const bool universal = advance().kind == Tok::Forall;
    const Token& var = expect(Tok::Ident, "a variable name");
    std::string name = var.text;
    expect(Tok::Dot, "'.' after the quantified variable");
    bound_.push_back(name);
    Formula body = formula();
    bound_.pop_back();
    return universal ? Formula::forall(std::move(name), std::move(body))
                     : Formula::exists(std::move(name), std::move(body));
  }

  Term term(const Token& tok) {
    for (const auto& b : bound_)
      if (b == tok.text) return Term::var(tok.text);
    if (is_variable_name(tok.text)) return Term::var(tok.text);
    return Term::constant(tok.text);
  }

  void note_uppercase(const Token& tok, bool with_args) {
    if (tok.text.empty() || !(tok.text[0] >= 'A' && tok.text[0] <= 'Z')) return;
    auto [it, fresh] = uppercase_use_.emplace(tok.text, with_args);
    if (!fresh && it->second != with_args) {
      throw ParseError(tok.span, "'" + tok.text + "' is used both as a scheme variable and with arguments");
    }
  }

  Formula primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::LParen: {
        const SourceSpan open = advance().span;
        Formula inner = formula();
        if (peek().kind != Tok::RParen) {
          if (peek().kind == Tok::End) throw ParseError(open, "unbalanced '(': missing ')'");
          throw ParseError(peek().span, "expected ')', found '" + peek().text + "'");
        }
        advance();
        return inner;
      }
      case Tok::Ident: {
        const Token name = advance();
        if (peek().kind == Tok::LParen) {
          note_uppercase(name, true);
          advance();
          std::vector<Term> args;
          args.push_back(term(expect(Tok::Ident, "a term")));
          while (peek().kind == Tok::Comma) {
            advance();
            args.push_back(term(expect(Tok::Ident, "a term")));
          }
          expect(Tok::RParen, "')' closing the argument list");
          return Formula::pred(name.text, std::move(args));
        }
        if (peek().kind == Tok::Eq) {
          advance();
          Term lhs = term(name);
          Term rhs = term(expect(Tok::Ident, "a term after '='"));
          return Formula::eq(std::move(lhs), std::move(rhs));
        }
        note_uppercase(name, false);
        if (name.text[0] >= 'A' && name.text[0] <= 'Z') return Formula::scheme(name.text);
        return Formula::prop(name.text);
      }
      case Tok::RParen: throw ParseError(tok.span, "unbalanced ')'");
      case Tok::End: throw ParseError(tok.span, "unexpected end of input");
      default: throw ParseError(tok.span, "unexpected '" + tok.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
  std::vector<std::string> bound_;
  std::map<std::string, bool> uppercase_use_;
};

}  // namespace

Formula parse(std::string_view text) {
  Parser p(tokenize(text));
  try {
    return p.run();
  } catch (const FormulaError& e) {
    throw ParseError({0, text.size()}, e.what());
  }
}

}  // namespace modalkit
