#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace modalkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a formula node is built from an ill-formed name.
class FormulaError : public Error {
 public:
  using Error::Error;
};

/// A first-order term: a bound (or free) individual variable, or a rigid constant.
struct Term {
  enum class Kind { Var, Const };

  Kind kind = Kind::Var;
  std::string name;

  static Term var(std::string name);
  static Term constant(std::string name);

  bool is_var() const { return kind == Kind::Var; }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class Op {
  PropAtom,
  SchemeVar,
  Pred,
  Eq,
  Not,
  And,
  Or,
  Imp,
  Iff,
  Box,
  Dia,
  StrictImp,
  Forall,
  Exists,
};

struct FormulaNode;

/// Immutable deep-embedded modal formula.
///
/// A Formula is a cheap handle onto a shared, immutable node, so copies are
/// O(1) and a formula can be read from any number of threads. Construction goes
/// through the static factories, which enforce the naming conventions:
///   - proposition letters start lowercase (`g`, `p1`),
///   - schematic metavariables start uppercase (`P`, `Q`),
///   - rigid constants may not start with one of `u`..`z`, which are reserved
///     for individual variables so that free variables survive printing.
class Formula {
 public:
  static Formula prop(std::string name);
  static Formula scheme(std::string name);
  static Formula pred(std::string name, std::vector<Term> args);
  static Formula eq(Term lhs, Term rhs);
  static Formula lnot(Formula f);
  static Formula land(Formula a, Formula b);
  static Formula lor(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula box(Formula f);
  static Formula dia(Formula f);
  static Formula strict_imp(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);

  Op op() const;
  /// Atom, predicate, or bound-variable name, depending on the node.
  const std::string& name() const;
  /// Predicate arguments, or the two sides of an equality.
  const std::vector<Term>& terms() const;
  /// Sole operand of a unary node, or the body of a quantifier.
  const Formula& operand() const;
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool is_atomic() const;
  bool is_unary() const;
  bool is_binary() const;
  bool is_quantifier() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Op op;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> children;
};

bool is_identifier(std::string_view s);
bool is_keyword(std::string_view s);
/// True when `name` has the shape of an individual variable (first letter `u`..`z`).
bool is_variable_name(std::string_view name);

std::set<std::string> prop_atoms(const Formula& f);
std::set<std::string> scheme_vars(const Formula& f);
std::set<std::string> free_vars(const Formula& f);
/// Predicate symbols with the arities they are used at (a symbol may appear twice).
std::set<std::pair<std::string, std::size_t>> predicates(const Formula& f);
std::set<std::string> constants(const Formula& f);

/// No predicate atoms, equalities, or quantifiers.
bool is_propositional(const Formula& f);
bool is_closed(const Formula& f);
std::size_t depth(const Formula& f);

enum class Format { Ascii, Unicode, Latex };

/// Prints `f` with the fewest parentheses the grammar allows.
std::string render(const Formula& f, Format format = Format::Ascii);

}  // namespace modalkit
