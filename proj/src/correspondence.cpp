#include "modalkit/correspondence.hpp"

#include <algorithm>
#include <array>

#include "evaluator.hpp"
#include "modalkit/parser.hpp"

namespace modalkit {

namespace {

struct AxiomInfo {
  AxiomId id;
  std::string_view name;
  std::string_view text;
  std::optional<FrameProperty> property;
};

constexpr std::array<AxiomInfo, 9> kAxioms{{
    {AxiomId::K, "K", "[](P => Q) => ([]P => []Q)", std::nullopt},
    {AxiomId::T, "T", "[]P => P", FrameProperty::Reflexive},
    {AxiomId::Four, "4", "[]P => [][]P", FrameProperty::Transitive},
    {AxiomId::B, "B", "P => []<>P", FrameProperty::Symmetric},
    {AxiomId::D, "D", "[]P => <>P", FrameProperty::Serial},
    {AxiomId::Five, "5", "<>P => []<>P", FrameProperty::Euclidean},
    {AxiomId::N, "N", "[]P", std::nullopt},
    {AxiomId::BF, "BF", "(forall x. []P(x)) => [] forall x. P(x)", std::nullopt},
    {AxiomId::CBF, "CBF", "[](forall x. P(x)) => forall x. []P(x)", std::nullopt},
}};

const AxiomInfo& info(AxiomId id) { return kAxioms[static_cast<std::size_t>(id)]; }

}  // namespace

std::string_view to_string(AxiomId id) { return info(id).name; }

std::optional<AxiomId> axiom_from_string(std::string_view s) {
  for (const auto& a : kAxioms)
    if (a.name == s) return a.id;
  if (s == "Four") return AxiomId::Four;
  if (s == "Five") return AxiomId::Five;
  return std::nullopt;
}

std::string_view axiom_text(AxiomId id) { return info(id).text; }

const Formula& axiom_scheme(AxiomId id) {
  static const std::array<Formula, 9> parsed = [] {
    return std::array<Formula, 9>{parse(kAxioms[0].text), parse(kAxioms[1].text), parse(kAxioms[2].text),
                                  parse(kAxioms[3].text), parse(kAxioms[4].text), parse(kAxioms[5].text),
                                  parse(kAxioms[6].text), parse(kAxioms[7].text), parse(kAxioms[8].text)};
  }();
  return parsed[static_cast<std::size_t>(id)];
}

std::optional<FrameProperty> corresponding_property(AxiomId id) { return info(id).property; }

bool AxiomReport::consistent() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomCheck& c) { return c.consistent; });
}

const AxiomCheck& AxiomReport::at(AxiomId id) const {
  for (const auto& c : axioms)
    if (c.id == id) return c;
  throw Error("axiom " + std::string(to_string(id)) + " is not in the report");
}

namespace {

// N spot check: valid(P) implies valid([]P) for sampled P.
Verdict sample_necessitation(const Frame& fr, std::size_t n_samples) {
  const PropModel m(fr, {});
  detail::Evaluator ev(m);
  const Formula p = Formula::scheme("P");
  const Formula boxed = Formula::box(p);
  std::vector<detail::Slot> slot{{"P", 0}};
  ev.set_schemes(slot);
  std::vector<WorldSet> samples;
  const std::uint64_t total = fr.size() >= 63 ? ~std::uint64_t{0} : std::uint64_t{1} << fr.size();
  for (std::uint64_t i = 0; i < std::min<std::uint64_t>(total, n_samples); ++i) samples.push_back(i);
  samples.push_back(fr.all());
  for (WorldSet s : samples) {
    slot[0].set = s;
    if (ev.extension(p) != fr.all()) continue;
    const WorldSet failing = fr.all() & ~ev.extension(boxed);
    if (failing) {
      Witness w;
      w.world = static_cast<std::size_t>(__builtin_ctzll(failing));
      w.instantiation = {{"P", s}};
      return Verdict::fail(std::move(w));
    }
  }
  return Verdict::pass();
}

}  // namespace

AxiomReport axiom_report(const Frame& fr, const Budget& budget, std::size_t n_samples) {
  AxiomReport report;
  for (auto p : {FrameProperty::Reflexive, FrameProperty::Transitive, FrameProperty::Symmetric, FrameProperty::Serial,
                 FrameProperty::Euclidean, FrameProperty::Equivalence}) {
    report.properties[p] = frame_property(fr, p);
  }
  for (AxiomId id : kFrameAxioms) {
    AxiomCheck check{id, {}, std::nullopt, true};
    check.verdict = id == AxiomId::N ? sample_necessitation(fr, n_samples) : frame_valid(fr, axiom_scheme(id), budget);
    if (auto prop = corresponding_property(id)) {
      check.property = report.properties.at(*prop);
      check.consistent = check.verdict.holds == *check.property;
    } else {
      check.consistent = check.verdict.holds;
    }
    report.axioms.push_back(std::move(check));
  }
  return report;
}

std::pair<Formula, Formula> barcan_sides(AxiomId id) {
  if (id != AxiomId::BF && id != AxiomId::CBF) throw Error("barcan_sides takes BF or CBF");
  const Formula& f = axiom_scheme(id);
  return {f.lhs(), f.rhs()};
}

BarcanReport barcan_report(const DomainFrame& df, const Budget& budget) {
  const FoModel skeleton(df, DomainMode::Varying);
  BarcanReport r;
  r.bf = fo_scheme_valid(skeleton, axiom_scheme(AxiomId::BF), "P", budget);
  r.cbf = fo_scheme_valid(skeleton, axiom_scheme(AxiomId::CBF), "P", budget);
  r.monotonicity = domain_monotonicity(df);
  r.symmetric = frame_property(df.frame(), FrameProperty::Symmetric);
  r.bf_consistent = r.bf.holds == r.monotonicity.nonincreasing;
  r.cbf_consistent = r.cbf.holds == r.monotonicity.nondecreasing;
  r.symmetric_consistent = !r.symmetric || r.bf.holds == r.cbf.holds;
  auto [bl, br] = barcan_sides(AxiomId::BF);
  auto [cl, cr] = barcan_sides(AxiomId::CBF);
  r.bf_readings = compare_readings(skeleton, bl, br, "P", budget);
  r.cbf_readings = compare_readings(skeleton, cl, cr, "P", budget);
  return r;
}

std::optional<Refutation> refute_on_frame(const Frame& fr, const Formula& scheme, const Budget& budget) {
  Verdict v = frame_valid(fr, scheme, budget);
  if (v.holds) return std::nullopt;
  return Refutation{std::move(v.witness->instantiation), v.witness->world};
}

Instantiation all_but(const Frame& fr, std::size_t world, const std::string& var) {
  return {{var, fr.all() & ~bit(world)}};
}

bool refutes_at(const Frame& fr, const Formula& scheme, const Instantiation& valuation, std::size_t world) {
  detail::Evaluator ev(fr);
  std::vector<detail::Slot> slots;
  for (const auto& [name, set] : valuation) slots.push_back({name, set});
  ev.set_schemes(slots);
  ev.set_atoms(slots);
  return !((ev.extension(scheme) >> world) & 1U);
}

}  // namespace modalkit
