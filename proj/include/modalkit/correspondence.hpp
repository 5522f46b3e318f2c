#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modalkit/formula.hpp"
#include "modalkit/model.hpp"
#include "modalkit/semantics.hpp"

namespace modalkit {

enum class AxiomId { K, T, Four, B, D, Five, N, BF, CBF };

/// "K", "T", "4", "B", "D", "5", "N", "BF", "CBF".
std::string_view to_string(AxiomId id);
std::optional<AxiomId> axiom_from_string(std::string_view s);

/// Canonical ASCII text of the axiom. N is a rule rather than a formula; its
/// text is the conclusion `[]P`, drawn from the premise `P`.
std::string_view axiom_text(AxiomId id);
const Formula& axiom_scheme(AxiomId id);

/// Frame property the axiom corresponds to; none for K and N, which hold on every frame.
std::optional<FrameProperty> corresponding_property(AxiomId id);

/// The propositional axioms checked per frame, in report order.
inline constexpr AxiomId kFrameAxioms[] = {AxiomId::K, AxiomId::T, AxiomId::Four, AxiomId::B,
                                           AxiomId::D, AxiomId::Five, AxiomId::N};

struct AxiomCheck {
  AxiomId id;
  Verdict verdict;
  /// Truth of the corresponding frame property; absent for K and N.
  std::optional<bool> property;
  /// verdict.holds agrees with the property (K and N: the axiom holds).
  bool consistent = true;
};

struct AxiomReport {
  std::vector<AxiomCheck> axioms;
  std::map<FrameProperty, bool> properties;

  bool consistent() const;
  const AxiomCheck& at(AxiomId id) const;
};

/// Checks K, T, 4, B, D, 5 by frame validity and N as a meta property on the
/// first `n_samples` subsets of worlds plus the full set.
AxiomReport axiom_report(const Frame& fr, const Budget& budget = {}, std::size_t n_samples = 64);

struct BarcanReport {
  Verdict bf;
  Verdict cbf;
  DomainMonotonicity monotonicity;
  bool symmetric = false;
  bool bf_consistent = true;         // BF holds iff domains are nonincreasing
  bool cbf_consistent = true;        // CBF holds iff domains are nondecreasing
  bool symmetric_consistent = true;  // on a symmetric frame BF holds iff CBF holds
  ReadingReport bf_readings;
  ReadingReport cbf_readings;

  bool consistent() const { return bf_consistent && cbf_consistent && symmetric_consistent; }
};

/// BF and CBF under varying-domain quantification, with the unary predicate
/// `P` ranging over every interpretation.
BarcanReport barcan_report(const DomainFrame& df, const Budget& budget = {});

/// The two sides of BF (`forall x. []P(x)` and `[] forall x. P(x)`) or CBF.
std::pair<Formula, Formula> barcan_sides(AxiomId id);

struct Refutation {
  Instantiation valuation;
  std::size_t world = 0;
};

/// Least valuation and world refuting `scheme` on `fr`, if it is not frame-valid.
std::optional<Refutation> refute_on_frame(const Frame& fr, const Formula& scheme, const Budget& budget = {});

/// `var` true everywhere except at `world`: the valuation that refutes T at a
/// world which does not see itself.
Instantiation all_but(const Frame& fr, std::size_t world, const std::string& var);

/// Whether `scheme` is false at `world` under `valuation` (letters and scheme variables alike).
bool refutes_at(const Frame& fr, const Formula& scheme, const Instantiation& valuation, std::size_t world);

}  // namespace modalkit
