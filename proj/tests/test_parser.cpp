#include <random>

#include "doctest.h"
#include "modalkit/parser.hpp"
#include "oracle.hpp"

using namespace modalkit;

namespace {
Formula p = Formula::prop("p");
Formula g = Formula::prop("g");
Formula q = Formula::prop("q");

SourceSpan error_span(std::string_view text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.span();
  }
  FAIL("expected a parse error for " << text);
  return {};
}
}  // namespace

TEST_CASE("grammar examples") {
  CHECK(parse("□p => p") == Formula::imp(Formula::box(p), p));
  CHECK(parse("<>g & ~[]q") == Formula::land(Formula::dia(g), Formula::lnot(Formula::box(q))));
  const Term x = Term::var("x");
  CHECK(parse("forall x. P(x) => <>Q(x)") ==
        Formula::forall("x", Formula::imp(Formula::pred("P", {x}), Formula::dia(Formula::pred("Q", {x})))));
}

TEST_CASE("precedence and associativity") {
  const Formula r = Formula::prop("r");
  CHECK(parse("p & q | r") == Formula::lor(Formula::land(p, q), r));
  CHECK(parse("p | q | r") == Formula::lor(Formula::lor(p, q), r));
  CHECK(parse("p => q => r") == Formula::imp(p, Formula::imp(q, r)));
  CHECK(parse("p |> q |> r") == Formula::strict_imp(p, Formula::strict_imp(q, r)));
  CHECK(parse("p => q <=> r") == Formula::iff(Formula::imp(p, q), r));
  CHECK(parse("~[]<>p") == Formula::lnot(Formula::box(Formula::dia(p))));
  CHECK(parse("exists y. p & q") == Formula::exists("y", Formula::land(p, q)));
}

TEST_CASE("ascii and unicode spellings agree") {
  CHECK(parse("[]p => <>q") == parse("□p ⊃ ◇q"));
  CHECK(parse("[]p => <>q") == parse("□p → ◇q"));
  CHECK(parse("~p & q | r") == parse("¬p ∧ q ∨ r"));
  CHECK(parse("p <=> q") == parse("p ↔ q"));
  CHECK(parse("p |> q") == parse("p ⥽ q"));
  CHECK(parse("forall x. exists y. S(x, y)") == parse("∀x. ∃y. S(x, y)"));
}

TEST_CASE("terms: bound names and u..z are variables, the rest constants") {
  const Formula f = parse("forall a. R(a, b, x)");
  const auto& t = f.operand().terms();
  CHECK(t[0] == Term::var("a"));
  CHECK(t[1] == Term::constant("b"));
  CHECK(t[2] == Term::var("x"));
  CHECK(parse("x = c") == Formula::eq(Term::var("x"), Term::constant("c")));
}

TEST_CASE("errors carry spans") {
  CHECK(error_span("p & $") == SourceSpan{4, 5});
  CHECK(error_span("p & ☃") == SourceSpan{4, 7});
  CHECK(error_span("(p & q") .start == 0);
  CHECK(error_span("p & q)") == SourceSpan{5, 6});
  CHECK_THROWS_AS(parse("p => q |> r"), ParseError);
  CHECK_NOTHROW(parse("(p => q) |> r"));
  CHECK_THROWS_AS(parse("P & P(x)"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("forall. p"), ParseError);
}

TEST_CASE("deep nesting is rejected, not a crash") {
  std::string deep(5000, '~');
  deep += "p";
  CHECK_THROWS_AS(parse(deep), ParseError);
  std::string parens(5000, '(');
  CHECK_THROWS_AS(parse(parens), ParseError);
}

TEST_CASE("round trip through ascii and unicode") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const Formula f = oracle::random_any(rng, 6);
    const std::string ascii = render(f, Format::Ascii);
    const std::string uni = render(f, Format::Unicode);
    INFO(ascii);
    CHECK(parse(ascii) == f);
    CHECK(parse(uni) == f);
  }
}

TEST_CASE("parse is total on arbitrary input") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> pieces = {"p", "P", "x", "c", "(", ")", "~", "[]", "<>", "&", "|", "=>", "|>",
                                           "<=>", "forall", "exists", ".", ",", "=", " ", "□", "◇", "∀", "\xe2",
                                           "\xff", "R(", "1", "_"};
  std::uniform_int_distribution<std::size_t> piece(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int i = 0; i < 20000; ++i) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += pieces[piece(rng)];
    try {
      parse(text);
    } catch (const ParseError& e) {
      CHECK(e.span().start <= e.span().end);
      CHECK(e.span().end <= text.size());
    }
  }
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 20000; ++i) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += static_cast<char>(byte(rng));
    try {
      parse(text);
    } catch (const ParseError&) {
    }
  }
}
