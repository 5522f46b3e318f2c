#include "modalkit/semantics.hpp"

#include <algorithm>

#include "evaluator.hpp"

namespace modalkit {

std::string_view to_string(EvalErrorKind k) {
  switch (k) {
    case EvalErrorKind::UnboundScheme: return "UnboundScheme";
    case EvalErrorKind::UnboundVar: return "UnboundVar";
    case EvalErrorKind::UnknownSymbol: return "UnknownSymbol";
    case EvalErrorKind::ArityMismatch: return "ArityMismatch";
    case EvalErrorKind::NotPropositional: return "NotPropositional";
    case EvalErrorKind::BadWorld: return "BadWorld";
    case EvalErrorKind::BadEnv: return "BadEnv";
  }
  return "?";
}

FlexiblePred HoleInterpretation::as_predicate() const {
  FlexiblePred p;
  p.arity = 1;
  for (std::size_t d = 0; d < extension.size(); ++d) {
    if (extension[d]) p.extension[{d}] = extension[d];
  }
  return p;
}

namespace detail {

Evaluator::Evaluator(const PropModel& m) : frame_(&m.frame()), valuation_(&m.valuation()) {}

Evaluator::Evaluator(const Frame& fr) : frame_(&fr) {}

Evaluator::Evaluator(const FoModel& m) : frame_(&m.frame()), valuation_(&m.valuation()), fo_(&m) {
  const std::size_t dn = m.dframe().domain().size();
  range_.assign(dn, 0);
  for (std::size_t w = 0; w < frame_->size(); ++w) {
    const DomainSet here = m.quantifier_range(w);
    for (std::size_t d = 0; d < dn; ++d)
      if ((here >> d) & 1U) range_[d] |= bit(w);
  }
}

std::vector<Binding> Evaluator::bind(const Env& env) const {
  std::vector<Binding> out;
  for (const auto& [var, individual] : env) {
    if (!fo_) throw EvalError(EvalErrorKind::BadEnv, "an environment needs a first-order model");
    auto idx = fo_->dframe().index_of(individual);
    if (!idx) throw EvalError(EvalErrorKind::BadEnv, "'" + individual + "' is not in the domain");
    out.emplace_back(var, *idx);
  }
  return out;
}

std::size_t Evaluator::resolve(const Term& t, const std::vector<Binding>& env) const {
  if (t.is_var()) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == t.name) return it->second;
    throw EvalError(EvalErrorKind::UnboundVar, "variable '" + t.name + "' is unbound");
  }
  auto it = fo_->constants().find(t.name);
  if (it == fo_->constants().end()) throw EvalError(EvalErrorKind::UnknownSymbol, "unknown constant '" + t.name + "'");
  return it->second;
}

WorldSet Evaluator::extension(const Formula& f, std::vector<Binding>& env) const {
  const WorldSet all = frame_->all();
  const std::size_t n = frame_->size();
  switch (f.op()) {
    case Op::PropAtom: {
      if (atoms_override_) {
        for (const Slot& s : atoms_)
          if (s.name == f.name()) return s.set;
      }
      if (!valuation_) throw EvalError(EvalErrorKind::UnknownSymbol, "no valuation for '" + f.name() + "'");
      auto it = valuation_->find(f.name());
      return it == valuation_->end() ? 0 : it->second;
    }
    case Op::SchemeVar:
      for (const Slot& s : schemes_)
        if (s.name == f.name()) return s.set;
      throw EvalError(EvalErrorKind::UnboundScheme, "scheme variable '" + f.name() + "' has no instantiation");
    case Op::Pred: {
      if (!fo_) throw EvalError(EvalErrorKind::NotPropositional, "predicate '" + f.name() + "' in a propositional model");
      const auto& args = f.terms();
      if (hole_ext_ && f.name() == hole_) {
        if (args.size() != 1) {
          throw EvalError(EvalErrorKind::ArityMismatch, "'" + f.name() + "' is unary, used with " +
                                                            std::to_string(args.size()) + " arguments");
        }
        return hole_ext_[resolve(args[0], env)];
      }
      Tuple tuple;
      tuple.reserve(args.size());
      for (const Term& t : args) tuple.push_back(resolve(t, env));
      auto arity_error = [&](std::size_t arity) {
        return EvalError(EvalErrorKind::ArityMismatch, "'" + f.name() + "' has arity " + std::to_string(arity) +
                                                           ", used with " + std::to_string(args.size()) + " arguments");
      };
      if (auto it = fo_->flexible().find(f.name()); it != fo_->flexible().end()) {
        if (it->second.arity != args.size()) throw arity_error(it->second.arity);
        auto hit = it->second.extension.find(tuple);
        return hit == it->second.extension.end() ? 0 : hit->second;
      }
      if (auto it = fo_->rigid().find(f.name()); it != fo_->rigid().end()) {
        if (it->second.arity != args.size()) throw arity_error(it->second.arity);
        return it->second.extension.count(tuple) ? all : 0;
      }
      throw EvalError(EvalErrorKind::UnknownSymbol, "unknown predicate '" + f.name() + "'");
    }
    case Op::Eq:
      if (!fo_) throw EvalError(EvalErrorKind::NotPropositional, "equality in a propositional model");
      return resolve(f.terms()[0], env) == resolve(f.terms()[1], env) ? all : 0;
    case Op::Not: return all & ~extension(f.operand(), env);
    case Op::And: return extension(f.lhs(), env) & extension(f.rhs(), env);
    case Op::Or: return extension(f.lhs(), env) | extension(f.rhs(), env);
    case Op::Imp: return all & (~extension(f.lhs(), env) | extension(f.rhs(), env));
    case Op::Iff: return all & ~(extension(f.lhs(), env) ^ extension(f.rhs(), env));
    case Op::Box: {
      const WorldSet inner = extension(f.operand(), env);
      WorldSet out = 0;
      for (std::size_t w = 0; w < n; ++w)
        if ((frame_->successors(w) & ~inner) == 0) out |= bit(w);
      return out;
    }
    case Op::Dia: {
      const WorldSet inner = extension(f.operand(), env);
      WorldSet out = 0;
      for (std::size_t w = 0; w < n; ++w)
        if (frame_->successors(w) & inner) out |= bit(w);
      return out;
    }
    case Op::StrictImp: {
      // No accessible world has the antecedent without the consequent.
      const WorldSet bad = extension(f.lhs(), env) & ~extension(f.rhs(), env);
      WorldSet out = 0;
      for (std::size_t w = 0; w < n; ++w)
        if ((frame_->successors(w) & bad) == 0) out |= bit(w);
      return out;
    }
    case Op::Forall:
    case Op::Exists: {
      if (!fo_) throw EvalError(EvalErrorKind::NotPropositional, "quantifier in a propositional model");
      const bool universal = f.op() == Op::Forall;
      WorldSet out = universal ? all : 0;
      for (std::size_t d = 0; d < range_.size(); ++d) {
        env.emplace_back(f.name(), d);
        const WorldSet body = extension(f.operand(), env);
        env.pop_back();
        if (universal) {
          out &= ~range_[d] | body;
        } else {
          out |= range_[d] & body;
        }
      }
      return out & all;
    }
  }
  return 0;
}

std::vector<std::string> sorted_names(const std::vector<std::set<std::string>>& groups) {
  std::set<std::string> merged;
  for (const auto& g : groups) merged.insert(g.begin(), g.end());
  return {merged.begin(), merged.end()};
}

Instantiation to_instantiation(std::span<const Slot> slots) {
  Instantiation out;
  for (const Slot& s : slots) out.emplace(std::string(s.name), s.set);
  return out;
}

Verdict scheme_valid_counted(const Evaluator& base, const Formula& scheme, const Budget& budget,
                             std::uint64_t& calls) {
  Evaluator ev = base;
  const auto names = sorted_names({scheme_vars(scheme)});
  return least_refutation(ev.frame().size(), names, budget, calls, [&](std::span<const Slot> slots) {
    ev.set_schemes(slots);
    return ev.extension(scheme);
  });
}

Verdict meta_implies_counted(const Evaluator& base, const std::vector<Formula>& premises, const Formula& conclusion,
                             const Budget& budget, std::uint64_t& calls) {
  Evaluator ev = base;
  std::vector<std::set<std::string>> groups{scheme_vars(conclusion)};
  for (const Formula& p : premises) groups.push_back(scheme_vars(p));
  const auto names = sorted_names(groups);
  const std::size_t n = ev.frame().size();
  const std::size_t k = names.size();
  if (n * k > budget.max_scheme_bits || n * k >= 63) {
    throw ResourceLimit("meta check needs 2^" + std::to_string(n * k) + " instantiations; budget is 2^" +
                        std::to_string(budget.max_scheme_bits));
  }
  const WorldSet all = ev.all();
  std::vector<Slot> slots(k);
  for (std::size_t j = 0; j < k; ++j) slots[j].name = names[j];
  ev.set_schemes(slots);
  const std::uint64_t count = std::uint64_t{1} << (n * k);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    for (std::size_t j = 0; j < k; ++j) slots[j].set = (idx >> ((k - 1 - j) * n)) & all;
    ++calls;
    const bool premises_valid = std::all_of(premises.begin(), premises.end(),
                                            [&](const Formula& p) { return ev.extension(p) == all; });
    if (!premises_valid) continue;
    const WorldSet failing = all & ~ev.extension(conclusion);
    if (failing) {
      Witness w;
      w.world = static_cast<std::size_t>(__builtin_ctzll(failing));
      w.instantiation = to_instantiation(slots);
      return Verdict::fail(std::move(w));
    }
  }
  return Verdict::pass();
}

Verdict fo_scheme_valid_counted(const FoModel& skeleton, const Formula& scheme, const std::string& hole,
                                const Budget& budget, std::uint64_t& calls) {
  const std::size_t n = skeleton.frame().size();
  const std::size_t dn = skeleton.dframe().domain().size();
  if (n * dn > budget.max_hole_bits || n * dn >= 63) {
    throw ResourceLimit("interpreting '" + hole + "' over " + std::to_string(dn) + " individuals and " +
                        std::to_string(n) + " worlds needs 2^" + std::to_string(n * dn) +
                        " interpretations; budget is 2^" + std::to_string(budget.max_hole_bits));
  }
  Evaluator ev(skeleton);
  std::vector<WorldSet> ext(dn, 0);
  ev.set_hole(hole, ext.data());
  const WorldSet all = ev.all();
  const std::uint64_t count = std::uint64_t{1} << (n * dn);

  std::size_t best_world = n;
  std::uint64_t best_index = 0;
  WorldSet seen = 0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    for (std::size_t d = 0; d < dn; ++d) ext[d] = (idx >> (d * n)) & all;
    ++calls;
    const WorldSet fresh = all & ~ev.extension(scheme) & ~seen;
    if (fresh) {
      seen |= fresh;
      const auto w = static_cast<std::size_t>(__builtin_ctzll(fresh));
      if (w < best_world) {
        best_world = w;
        best_index = idx;
      }
      if (best_world == 0) break;
    }
  }
  if (best_world == n) return Verdict::pass();
  Witness w;
  w.world = best_world;
  HoleInterpretation interp{hole, std::vector<WorldSet>(dn)};
  for (std::size_t d = 0; d < dn; ++d) interp.extension[d] = (best_index >> (d * n)) & all;
  w.hole = std::move(interp);
  return Verdict::fail(std::move(w));
}

}  // namespace detail

namespace {

void check_world(const Frame& fr, std::size_t world) {
  if (world >= fr.size()) {
    throw EvalError(EvalErrorKind::BadWorld, "world index " + std::to_string(world) + " is outside the frame");
  }
}

Verdict validity(const detail::Evaluator& ev, const Formula& f) {
  const WorldSet failing = ev.all() & ~ev.extension(f);
  if (!failing) return Verdict::pass();
  Witness w;
  w.world = static_cast<std::size_t>(__builtin_ctzll(failing));
  return Verdict::fail(std::move(w));
}

}  // namespace

bool eval(const PropModel& m, const Formula& f, std::size_t world) {
  check_world(m.frame(), world);
  return (detail::Evaluator(m).extension(f) >> world) & 1U;
}

bool eval(const FoModel& m, const Formula& f, std::size_t world, const Env& env) {
  check_world(m.frame(), world);
  detail::Evaluator ev(m);
  auto bindings = ev.bind(env);
  return (ev.extension(f, bindings) >> world) & 1U;
}

WorldSet extension(const PropModel& m, const Formula& f, const Instantiation& schemes) {
  detail::Evaluator ev(m);
  std::vector<detail::Slot> slots;
  for (const auto& [name, set] : schemes) slots.push_back({name, set});
  ev.set_schemes(slots);
  return ev.extension(f);
}

WorldSet extension(const FoModel& m, const Formula& f, const Env& env, const Instantiation& schemes) {
  detail::Evaluator ev(m);
  std::vector<detail::Slot> slots;
  for (const auto& [name, set] : schemes) slots.push_back({name, set});
  ev.set_schemes(slots);
  auto bindings = ev.bind(env);
  return ev.extension(f, bindings);
}

Verdict valid(const PropModel& m, const Formula& f) { return validity(detail::Evaluator(m), f); }

Verdict valid(const FoModel& m, const Formula& f) { return validity(detail::Evaluator(m), f); }

Verdict scheme_valid(const PropModel& m, const Formula& scheme, const Budget& budget) {
  std::uint64_t calls = 0;
  return detail::scheme_valid_counted(detail::Evaluator(m), scheme, budget, calls);
}

Verdict scheme_valid(const FoModel& m, const Formula& scheme, const Budget& budget) {
  std::uint64_t calls = 0;
  return detail::scheme_valid_counted(detail::Evaluator(m), scheme, budget, calls);
}

Verdict frame_valid(const Frame& fr, const Formula& scheme, const Budget& budget) {
  if (!is_propositional(scheme)) {
    throw EvalError(EvalErrorKind::NotPropositional, "frame validity takes a propositional scheme");
  }
  detail::Evaluator ev(fr);
  const auto names = detail::sorted_names({scheme_vars(scheme), prop_atoms(scheme)});
  std::uint64_t calls = 0;
  return detail::least_refutation(fr.size(), names, budget, calls, [&](std::span<const detail::Slot> slots) {
    // Upper-initial names are scheme variables, lower-initial are letters.
    ev.set_schemes(slots);
    ev.set_atoms(slots);
    return ev.extension(scheme);
  });
}

Verdict meta_implies(const PropModel& m, const std::vector<Formula>& premises, const Formula& conclusion,
                     const Budget& budget) {
  std::uint64_t calls = 0;
  return detail::meta_implies_counted(detail::Evaluator(m), premises, conclusion, budget, calls);
}

Verdict meta_implies(const FoModel& m, const std::vector<Formula>& premises, const Formula& conclusion,
                     const Budget& budget) {
  std::uint64_t calls = 0;
  return detail::meta_implies_counted(detail::Evaluator(m), premises, conclusion, budget, calls);
}

Verdict fo_scheme_valid(const FoModel& skeleton, const Formula& scheme, const std::string& hole, const Budget& budget) {
  std::uint64_t calls = 0;
  return detail::fo_scheme_valid_counted(skeleton, scheme, hole, budget, calls);
}

ReadingReport compare_readings(const FoModel& skeleton, const Formula& lhs, const Formula& rhs, const std::string& hole,
                               const Budget& budget) {
  const std::size_t n = skeleton.frame().size();
  const std::size_t dn = skeleton.dframe().domain().size();
  if (n * dn > budget.max_hole_bits || n * dn >= 63) {
    throw ResourceLimit("comparing readings needs 2^" + std::to_string(n * dn) + " interpretations; budget is 2^" +
                        std::to_string(budget.max_hole_bits));
  }
  detail::Evaluator ev(skeleton);
  std::vector<WorldSet> ext(dn, 0);
  ev.set_hole(hole, ext.data());
  const WorldSet all = ev.all();
  ReadingReport r;
  const std::uint64_t count = std::uint64_t{1} << (n * dn);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    for (std::size_t d = 0; d < dn; ++d) ext[d] = (idx >> (d * n)) & all;
    const WorldSet l = ev.extension(lhs);
    const WorldSet rr = ev.extension(rhs);
    const bool lv = l == all;
    const bool rv = rr == all;
    r.equal = r.equal && l == rr;
    r.iff = r.iff && lv == rv;
    r.meta = r.meta && (!lv || rv);
    r.object = r.object && ((~l | rr) & all) == all;
  }
  return r;
}

}  // namespace modalkit
