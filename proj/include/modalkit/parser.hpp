#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "modalkit/formula.hpp"

namespace modalkit {

/// Half-open byte range [start, end) into the parsed text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message);

  const SourceSpan& span() const { return span_; }
  /// The message without the "at a..b" prefix.
  const std::string& detail() const { return detail_; }

 private:
  SourceSpan span_;
  std::string detail_;
};

/// Parses one formula. ASCII and Unicode operator spellings may be mixed.
///
/// Grammar, loosest binding first:
///
///     formula := imp ( ("<=>" | "↔") formula )?
///     imp     := or ( ("=>" | "⊃" | "→" | "|>" | "⥽") imp )?     -- no mixing
///     or      := and ( ("|" | "∨") and )*
///     and     := unary ( ("&" | "∧") unary )*
///     unary   := ("~" | "¬" | "[]" | "□" | "<>" | "◇") unary
///              | ("forall" | "∀" | "exists" | "∃") ident "." formula
///              | "(" formula ")" | ident "(" term ("," term)* ")"
///              | term "=" term | ident
///
/// A term is a bound variable when an enclosing quantifier binds it or its
/// name starts with `u`..`z`; otherwise it is a rigid constant.
///
/// Throws ParseError; never anything else for any input.
Formula parse(std::string_view text);

}  // namespace modalkit
