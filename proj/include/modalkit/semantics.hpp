#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modalkit/formula.hpp"
#include "modalkit/model.hpp"

namespace modalkit {

/// Bound variable -> individual name.
using Env = std::map<std::string, std::string>;

/// Scheme variable (or enumerated atom) -> worlds where it is true.
using Instantiation = std::map<std::string, WorldSet>;

enum class EvalErrorKind {
  UnboundScheme,
  UnboundVar,
  UnknownSymbol,
  ArityMismatch,
  NotPropositional,
  BadWorld,
  BadEnv,
};

std::string_view to_string(EvalErrorKind k);

class EvalError : public Error {
 public:
  EvalError(EvalErrorKind kind, const std::string& message) : Error(message), kind_(kind) {}
  EvalErrorKind kind() const { return kind_; }

 private:
  EvalErrorKind kind_;
};

/// Enumeration would exceed the configured budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Enumeration limits, in bits of the enumerated search space.
struct Budget {
  /// worlds x enumerated metavariables; 2^bits instantiations are tried.
  std::size_t max_scheme_bits = 24;
  /// individuals x worlds for a unary predicate hole.
  std::size_t max_hole_bits = 20;
};

/// Interpretation of a unary flexible predicate: for each individual, the worlds where it holds.
struct HoleInterpretation {
  std::string predicate;
  std::vector<WorldSet> extension;

  FlexiblePred as_predicate() const;
  friend bool operator==(const HoleInterpretation&, const HoleInterpretation&) = default;
};

struct Witness {
  std::size_t world = 0;
  Env env;
  Instantiation instantiation;
  std::optional<HoleInterpretation> hole;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Outcome of a check; `witness` is present exactly when the check fails.
struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;

  static Verdict pass() { return {}; }
  static Verdict fail(Witness w) { return Verdict{false, std::move(w)}; }
};

/// Truth of `f` at `world` (a world index). `f` may not contain scheme variables.
bool eval(const PropModel& m, const Formula& f, std::size_t world);
bool eval(const FoModel& m, const Formula& f, std::size_t world, const Env& env = {});

/// Worlds where `f` holds, optionally with scheme variables instantiated.
WorldSet extension(const PropModel& m, const Formula& f, const Instantiation& schemes = {});
WorldSet extension(const FoModel& m, const Formula& f, const Env& env = {}, const Instantiation& schemes = {});

/// True at every world; the witness is the least failing world.
Verdict valid(const PropModel& m, const Formula& f);
Verdict valid(const FoModel& m, const Formula& f);

/// Valid under every instantiation of the scheme variables by sets of worlds.
/// Proposition letters keep their valuation from `m`.
///
/// The witness is the least failing world; among instantiations refuting at
/// that world, the lexicographically least one (first scheme variable in name
/// order is most significant, bit i of a set is world i).
Verdict scheme_valid(const PropModel& m, const Formula& scheme, const Budget& budget = {});
Verdict scheme_valid(const FoModel& m, const Formula& scheme, const Budget& budget = {});

/// Valid under every valuation: proposition letters and scheme variables are both enumerated.
Verdict frame_valid(const Frame& fr, const Formula& scheme, const Budget& budget = {});

/// Meta-level consequence: for every instantiation of the scheme variables
/// shared by premises and conclusion, if every premise is valid then the
/// conclusion is valid. The witness carries the least instantiation for which
/// this fails, and the least world refuting the conclusion under it.
Verdict meta_implies(const PropModel& m, const std::vector<Formula>& premises, const Formula& conclusion,
                     const Budget& budget = {});
Verdict meta_implies(const FoModel& m, const std::vector<Formula>& premises, const Formula& conclusion,
                     const Budget& budget = {});

/// Validity of a first-order scheme for every interpretation of the unary
/// flexible predicate `hole` over the full domain at every world.
/// The skeleton's own interpretation of `hole`, if any, is ignored.
Verdict fo_scheme_valid(const FoModel& skeleton, const Formula& scheme, const std::string& hole,
                        const Budget& budget = {});

/// The ways of asserting `lhs` and `rhs` agree, each quantified over every
/// interpretation of `hole`:
///   equal  - the two formulas hold at exactly the same worlds,
///   iff    - one is valid exactly when the other is,
///   meta   - validity of lhs implies validity of rhs,
///   object - lhs => rhs is valid.
struct ReadingReport {
  bool equal = true;
  bool iff = true;
  bool meta = true;
  bool object = true;

  friend bool operator==(const ReadingReport&, const ReadingReport&) = default;
};

ReadingReport compare_readings(const FoModel& skeleton, const Formula& lhs, const Formula& rhs, const std::string& hole,
                               const Budget& budget = {});

}  // namespace modalkit
