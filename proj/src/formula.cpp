#include "modalkit/formula.hpp"

#include <cctype>

namespace modalkit {

namespace {

bool upper_initial(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }
bool lower_initial(std::string_view s) { return !s.empty() && std::islower(static_cast<unsigned char>(s[0])); }

void require_identifier(std::string_view name, std::string_view what) {
  if (!is_identifier(name)) {
    throw FormulaError(std::string(what) + " name '" + std::string(name) + "' is not an identifier");
  }
  if (is_keyword(name)) {
    throw FormulaError(std::string(what) + " name '" + std::string(name) + "' is a reserved word");
  }
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

bool is_keyword(std::string_view s) { return s == "forall" || s == "exists"; }

bool is_variable_name(std::string_view name) { return !name.empty() && name[0] >= 'u' && name[0] <= 'z'; }

Term Term::var(std::string name) {
  require_identifier(name, "variable");
  return Term{Kind::Var, std::move(name)};
}

Term Term::constant(std::string name) {
  require_identifier(name, "constant");
  if (is_variable_name(name)) {
    throw FormulaError("constant name '" + name + "' starts with a variable letter (u-z)");
  }
  return Term{Kind::Const, std::move(name)};
}

Formula Formula::prop(std::string name) {
  require_identifier(name, "proposition");
  if (!lower_initial(name)) throw FormulaError("proposition '" + name + "' must start lowercase");
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::PropAtom, std::move(name), {}, {}}));
}

Formula Formula::scheme(std::string name) {
  require_identifier(name, "scheme variable");
  if (!upper_initial(name)) throw FormulaError("scheme variable '" + name + "' must start uppercase");
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::SchemeVar, std::move(name), {}, {}}));
}

Formula Formula::pred(std::string name, std::vector<Term> args) {
  require_identifier(name, "predicate");
  if (args.empty()) throw FormulaError("predicate '" + name + "' needs at least one argument");
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Pred, std::move(name), std::move(args), {}}));
}

Formula Formula::eq(Term lhs, Term rhs) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Eq, "=", {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::lnot(Formula f) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Not, {}, {}, {std::move(f)}}));
}
Formula Formula::box(Formula f) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Box, {}, {}, {std::move(f)}}));
}
Formula Formula::dia(Formula f) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Dia, {}, {}, {std::move(f)}}));
}
Formula Formula::land(Formula a, Formula b) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::And, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::lor(Formula a, Formula b) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Or, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::imp(Formula a, Formula b) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Imp, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::iff(Formula a, Formula b) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Iff, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::strict_imp(Formula a, Formula b) {
  return Formula(
      std::make_shared<const FormulaNode>(FormulaNode{Op::StrictImp, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::forall(std::string var, Formula body) {
  require_identifier(var, "variable");
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Forall, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::exists(std::string var, Formula body) {
  require_identifier(var, "variable");
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Op::Exists, std::move(var), {}, {std::move(body)}}));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const Formula& Formula::operand() const { return node_->children.at(0); }
const Formula& Formula::lhs() const { return node_->children.at(0); }
const Formula& Formula::rhs() const { return node_->children.at(1); }

bool Formula::is_atomic() const {
  return op() == Op::PropAtom || op() == Op::SchemeVar || op() == Op::Pred || op() == Op::Eq;
}
bool Formula::is_unary() const { return op() == Op::Not || op() == Op::Box || op() == Op::Dia; }
bool Formula::is_binary() const {
  return op() == Op::And || op() == Op::Or || op() == Op::Imp || op() == Op::Iff || op() == Op::StrictImp;
}
bool Formula::is_quantifier() const { return op() == Op::Forall || op() == Op::Exists; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const FormulaNode& x = *a.node_;
  const FormulaNode& y = *b.node_;
  return x.op == y.op && x.name == y.name && x.terms == y.terms && x.children == y.children;
}

namespace {

template <typename Visit>
void walk(const Formula& f, Visit&& visit) {
  visit(f);
  if (f.is_unary() || f.is_quantifier()) {
    walk(f.operand(), visit);
  } else if (f.is_binary()) {
    walk(f.lhs(), visit);
    walk(f.rhs(), visit);
  }
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto is_bound = [&](const std::string& n) {
    for (const auto& b : bound)
      if (b == n) return true;
    return false;
  };
  switch (f.op()) {
    case Op::Pred:
    case Op::Eq:
      for (const Term& t : f.terms())
        if (t.is_var() && !is_bound(t.name)) out.insert(t.name);
      return;
    case Op::Forall:
    case Op::Exists:
      bound.push_back(f.name());
      collect_free(f.operand(), bound, out);
      bound.pop_back();
      return;
    default:
      if (f.is_unary()) {
        collect_free(f.operand(), bound, out);
      } else if (f.is_binary()) {
        collect_free(f.lhs(), bound, out);
        collect_free(f.rhs(), bound, out);
      }
  }
}

}  // namespace

std::set<std::string> prop_atoms(const Formula& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (g.op() == Op::PropAtom) out.insert(g.name());
  });
  return out;
}

std::set<std::string> scheme_vars(const Formula& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (g.op() == Op::SchemeVar) out.insert(g.name());
  });
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

std::set<std::pair<std::string, std::size_t>> predicates(const Formula& f) {
  std::set<std::pair<std::string, std::size_t>> out;
  walk(f, [&](const Formula& g) {
    if (g.op() == Op::Pred) out.emplace(g.name(), g.terms().size());
  });
  return out;
}

std::set<std::string> constants(const Formula& f) {
  std::set<std::string> out;
  walk(f, [&](const Formula& g) {
    if (g.op() == Op::Pred || g.op() == Op::Eq)
      for (const Term& t : g.terms())
        if (!t.is_var()) out.insert(t.name);
  });
  return out;
}

bool is_propositional(const Formula& f) {
  bool ok = true;
  walk(f, [&](const Formula& g) {
    if (g.op() == Op::Pred || g.op() == Op::Eq || g.is_quantifier()) ok = false;
  });
  return ok;
}

bool is_closed(const Formula& f) { return free_vars(f).empty(); }

std::size_t depth(const Formula& f) {
  if (f.is_atomic()) return 0;
  if (f.is_binary()) return 1 + std::max(depth(f.lhs()), depth(f.rhs()));
  return 1 + depth(f.operand());
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

struct OpTable {
  const char* neg;
  const char* box;
  const char* dia;
  const char* conj;
  const char* disj;
  const char* imp;
  const char* strict;
  const char* iff;
  const char* forall;
  const char* exists;
  const char* unary_gap;
};

constexpr OpTable kAscii{"~", "[]", "<>", " & ", " | ", " => ", " |> ", " <=> ", "forall ", "exists ", ""};
constexpr OpTable kUnicode{"¬", "□", "◇", " ∧ ", " ∨ ", " => ", " ⥽ ", " ↔ ",
                           "∀",  "∃", ""};
constexpr OpTable kLatex{"\\neg",    "\\Box",     "\\Diamond", " \\wedge ", " \\vee ",   " \\supset ",
                         " \\strictif ", " \\leftrightarrow ", "\\forall ", "\\exists ", " "};

const OpTable& table(Format fmt) {
  switch (fmt) {
    case Format::Unicode: return kUnicode;
    case Format::Latex: return kLatex;
    case Format::Ascii: break;
  }
  return kAscii;
}

// Binding strength; larger binds tighter.
int precedence(Op op) {
  switch (op) {
    case Op::Forall:
    case Op::Exists: return 0;
    case Op::Iff: return 1;
    case Op::Imp:
    case Op::StrictImp: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not:
    case Op::Box:
    case Op::Dia: return 5;
    default: return 6;
  }
}

class Renderer {
 public:
  explicit Renderer(Format fmt) : t_(table(fmt)) {}

  // `rightmost`: nothing follows this subformula before the enclosing
  // parenthesis or end of input, so an open-ended quantifier may appear bare.
  void emit(const Formula& f, int min_prec, bool rightmost) {
    const bool paren = f.is_quantifier() ? !rightmost : precedence(f.op()) < min_prec;
    if (paren) {
      out_ += '(';
      emit_bare(f, true);
      out_ += ')';
    } else {
      emit_bare(f, rightmost);
    }
  }

  std::string take() { return std::move(out_); }

 private:
  void emit_terms(const Formula& f) {
    out_ += f.name();
    out_ += '(';
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
      if (i) out_ += ", ";
      out_ += f.terms()[i].name;
    }
    out_ += ')';
  }

  void emit_unary(const char* sym, const Formula& f, bool rightmost) {
    out_ += sym;
    out_ += t_.unary_gap;
    emit(f.operand(), 5, rightmost);
  }

  void emit_binary(const char* sym, const Formula& f, int left_min, int right_min, bool rightmost) {
    emit(f.lhs(), left_min, false);
    out_ += sym;
    emit(f.rhs(), right_min, rightmost);
  }

  void emit_bare(const Formula& f, bool rightmost) {
    switch (f.op()) {
      case Op::PropAtom:
      case Op::SchemeVar: out_ += f.name(); return;
      case Op::Pred: emit_terms(f); return;
      case Op::Eq:
        out_ += f.terms()[0].name;
        out_ += " = ";
        out_ += f.terms()[1].name;
        return;
      case Op::Not: emit_unary(t_.neg, f, rightmost); return;
      case Op::Box: emit_unary(t_.box, f, rightmost); return;
      case Op::Dia: emit_unary(t_.dia, f, rightmost); return;
      case Op::And: emit_binary(t_.conj, f, 4, 5, rightmost); return;
      case Op::Or: emit_binary(t_.disj, f, 3, 4, rightmost); return;
      // Right-associative; a different operator at the same level needs parentheses.
      case Op::Imp: emit_binary(t_.imp, f, 3, f.rhs().op() == Op::Imp ? 2 : 3, rightmost); return;
      case Op::StrictImp: emit_binary(t_.strict, f, 3, f.rhs().op() == Op::StrictImp ? 2 : 3, rightmost); return;
      case Op::Iff: emit_binary(t_.iff, f, 2, 1, rightmost); return;
      case Op::Forall:
      case Op::Exists:
        out_ += f.op() == Op::Forall ? t_.forall : t_.exists;
        out_ += f.name();
        out_ += ". ";
        emit(f.operand(), 0, true);
        return;
    }
  }

  const OpTable& t_;
  std::string out_;
};

}  // namespace

std::string render(const Formula& f, Format format) {
  Renderer r(format);
  r.emit(f, 0, true);
  return r.take();
}

}  // namespace modalkit
