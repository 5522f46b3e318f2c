// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "modalkit/correspondence.hpp"
#include "modalkit/io.hpp"
#include "modalkit/parser.hpp"
#include "modalkit/search.hpp"
#include "modalkit/semantics.hpp"
#include "oracle.hpp"

using namespace modalkit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string certificate;  // JSON text; compared across job counts
};

struct Timed {
  Outcome outcome;
  double seconds = 0;
};

Timed timed(const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what(), {}};
  }
  const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
  return {o, d.count()};
}

std::vector<Frame> frames_up_to(std::size_t n) {
  std::vector<Frame> out;
  for (std::size_t k = 1; k <= n; ++k)
    for (auto& fr : enumerate_frames(k)) out.push_back(std::move(fr));
  return out;
}

SearchOptions with_jobs(std::size_t jobs) {
  SearchOptions o = options_from_environment();
  o.jobs = jobs;
  return o;
}

std::string certificate_text(const std::optional<Countermodel>& cm) {
  return cm ? to_json(*cm).dump() : std::string("null");
}

// --- 1 ---------------------------------------------------------------------------

Outcome correspondence_suite() {
  const auto frames = frames_up_to(3);
  std::size_t exceptions = 0;
  for (const Frame& fr : frames)
    for (AxiomId id : {AxiomId::T, AxiomId::Four, AxiomId::B, AxiomId::D, AxiomId::Five})
      if (frame_valid(fr, axiom_scheme(id)).holds != frame_property(fr, *corresponding_property(id))) ++exceptions;
  return {frames.size() == 530 && exceptions == 0,
          std::to_string(frames.size()) + " frames, " + std::to_string(exceptions) + " exceptions", {}};
}

// --- 2 ---------------------------------------------------------------------------

Outcome k_and_n() {
  const auto frames = frames_up_to(3);
  std::size_t exceptions = 0;
  for (const Frame& fr : frames)
    if (!frame_valid(fr, axiom_scheme(AxiomId::K)).holds) ++exceptions;

  // Every PropModel with <= 3 worlds over atoms p, q; N checked for every
  // subset instantiation of P and for a fixed family of formulas over p, q.
  const std::vector<Formula> family = {parse("p"),         parse("p | ~p"),       parse("p => q"),
                                       parse("[]p => p"),  parse("<>q | []~q"),   parse("p & q => p"),
                                       parse("[](p => q)"), parse("<>p => <>(p | q)")};
  std::size_t models = 0;
  for (const Frame& fr : frames) {
    const std::uint64_t subsets = std::uint64_t{1} << fr.size();
    for (std::uint64_t p = 0; p < subsets; ++p)
      for (std::uint64_t q = 0; q < subsets; ++q) {
        const PropModel m(fr, {{"p", p}, {"q", q}});
        ++models;
        if (!meta_implies(m, {parse("P")}, parse("[]P")).holds) ++exceptions;
        for (const Formula& f : family)
          if (valid(m, f).holds && !valid(m, Formula::box(f)).holds) ++exceptions;
      }
  }
  return {exceptions == 0, "530 frames, " + std::to_string(models) + " models, " + std::to_string(exceptions) +
                               " exceptions",
          {}};
}

// --- 3 ---------------------------------------------------------------------------

Outcome relation_lemmas() {
  std::size_t exceptions = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << 16); ++bits) {
    const Frame fr = Frame::from_bits(4, bits);
    auto has = [&](FrameProperty p) { return frame_property(fr, p); };
    const bool sym = has(FrameProperty::Symmetric), euc = has(FrameProperty::Euclidean);
    const bool refl = has(FrameProperty::Reflexive);
    if (sym && euc && !has(FrameProperty::Transitive)) ++exceptions;
    if (refl && euc && !has(FrameProperty::Equivalence)) ++exceptions;
    if (has(FrameProperty::Equivalence) && !euc) ++exceptions;
  }
  return {exceptions == 0, "65536 relations, " + std::to_string(exceptions) + " exceptions", {}};
}

// --- 4 ---------------------------------------------------------------------------

Outcome duality() {
  std::mt19937_64 rng(20240601);
  std::size_t exceptions = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    const Frame fr = Frame::from_bits(n, std::uniform_int_distribution<std::uint64_t>(0, (1ULL << (n * n)) - 1)(rng));
    std::uniform_int_distribution<std::uint64_t> subset(0, (1ULL << n) - 1);
    const PropModel m(fr, {{"p", subset(rng)}, {"q", subset(rng)}, {"r", subset(rng)}});
    const Formula f = oracle::random_prop(rng, 6, false);
    const Formula g = oracle::random_prop(rng, 6, false);
    for (std::size_t w = 0; w < n; ++w) {
      if (eval(m, Formula::strict_imp(f, g), w) != eval(m, Formula::box(Formula::imp(f, g)), w)) ++exceptions;
      if (eval(m, Formula::dia(f), w) != eval(m, Formula::lnot(Formula::box(Formula::lnot(f))), w)) ++exceptions;
    }
  }
  return {exceptions == 0, "1000 models, " + std::to_string(exceptions) + " exceptions", {}};
}

// --- 5 ---------------------------------------------------------------------------

Outcome modus_tollens(std::size_t jobs) {
  std::size_t exceptions = 0;
  const Formula premise = parse("P => Q");
  const Formula conclusion = parse("[]~Q => []~P");
  for (const Frame& fr : frames_up_to(3))
    if (!meta_implies(PropModel(fr, {}), {premise}, conclusion).holds) ++exceptions;

  SearchSpec tollens;
  tollens.max_worlds = 3;
  tollens.premise_formulas = {premise};
  tollens.conclusion = conclusion;
  tollens.reading = Reading::Meta;
  const auto none = find_countermodel(tollens, with_jobs(jobs));

  SearchSpec bad;
  bad.max_worlds = 3;
  bad.conclusion = parse("(P => Q) => ([]~Q => []~P)");
  const auto found = find_countermodel(bad, with_jobs(jobs));
  const bool ok = exceptions == 0 && !none && found && found->frame().size() <= 3 && verify_countermodel(bad, *found);
  std::string detail = "tollens: " + std::to_string(exceptions) + " exceptions on 530 frames; tollens_bad: ";
  detail += found ? "countermodel at " + std::to_string(found->frame().size()) + " worlds" : "none";
  return {ok, detail, certificate_text(none) + certificate_text(found)};
}

// --- 6 ---------------------------------------------------------------------------

Outcome nondeduction(std::size_t jobs) {
  SearchSpec spec;
  spec.max_worlds = 2;
  spec.conclusion = parse("P => []P");
  const auto cm = find_countermodel(spec, with_jobs(jobs));
  if (!cm) return {false, "no countermodel", "null"};
  const auto& m = std::get<PropModel>(cm->model);
  const WorldSet p = cm->certificate.instantiation.at("P");
  const PropModel concrete(m.frame(), {{"p", p}, {"q", extension(m, parse("[]P"), {{"P", p}})}});
  const bool meta = !valid(concrete, parse("p")).holds || valid(concrete, parse("q")).holds;
  const bool object = valid(concrete, parse("p => q")).holds;
  const bool every = meta_implies(m, {parse("P")}, parse("[]P")).holds;
  const bool ok = m.frame().size() <= 2 && meta && !object && every && verify_countermodel(spec, *cm);
  return {ok,
          std::to_string(m.frame().size()) + "-world model: valid(P) => valid([]P) holds, valid(P => []P) fails",
          certificate_text(cm)};
}

// --- 7 ---------------------------------------------------------------------------

Outcome barcan_suite(std::size_t jobs) {
  std::atomic<std::size_t> checked{0};
  auto violates = [&](const DomainFrame& df) {
    if (df.domain().size() != 2) return false;
    ++checked;
    const Frame& fr = df.frame();
    bool nonincreasing = true, nondecreasing = true;
    for (auto [w, v] : fr.edges()) {
      nonincreasing = nonincreasing && (df.exists_in(v) & ~df.exists_in(w)) == 0;
      nondecreasing = nondecreasing && (df.exists_in(w) & ~df.exists_in(v)) == 0;
    }
    const BarcanReport r = barcan_report(df);
    const bool sym = frame_property(fr, FrameProperty::Symmetric);
    return r.bf.holds != nonincreasing || r.cbf.holds != nondecreasing || (sym && r.bf.holds != r.cbf.holds) ||
           !r.consistent();
  };
  const auto bad = find_domain_frame(3, 2, DomainMode::Varying, violates, with_jobs(jobs));
  const std::size_t expected = 2 * 4 + 16 * 16 + 512 * 64;
  json cert{{"counterexample", bad ? to_json(*bad) : json(nullptr)}};
  const bool ok = !bad && checked.load() == expected;
  return {ok, std::to_string(checked.load()) + " domain frames, " + (bad ? "counterexample found" : "0 exceptions"),
          cert.dump()};
}

// --- 8 ---------------------------------------------------------------------------

Outcome barcan_readings(std::size_t jobs) {
  const auto [lhs, rhs] = barcan_sides(AxiomId::BF);
  auto disagree = [&](const DomainFrame& df) {
    const ReadingReport r = compare_readings(FoModel(df, DomainMode::Constant), lhs, rhs, "P");
    return r.meta != r.object;
  };
  const auto constant = find_domain_frame(3, 2, DomainMode::Constant, disagree, with_jobs(jobs));
  const auto divergence = find_reading_divergence(AxiomId::BF, 3, 2, DomainMode::Varying, with_jobs(jobs));
  bool confirmed = false;
  if (divergence) {
    const ReadingReport r = compare_readings(FoModel(*divergence, DomainMode::Varying), lhs, rhs, "P");
    confirmed = r.meta && !r.object;
  }
  json cert{{"constant_disagreement", constant ? to_json(*constant) : json(nullptr)},
            {"varying_divergence", divergence ? to_json(*divergence) : json(nullptr)}};
  std::string detail = constant ? "constant domains disagree" : "constant domains agree";
  if (divergence) {
    detail += "; varying divergence at " + std::to_string(divergence->frame().size()) + " worlds, domain " +
              std::to_string(divergence->domain().size());
  } else {
    detail += "; no varying divergence";
  }
  return {!constant && divergence && confirmed, detail, cert.dump()};
}

// --- 9 ---------------------------------------------------------------------------

Outcome example_argument(std::size_t jobs) {
  SearchSpec hc;
  hc.max_worlds = 3;
  hc.premise_formulas = {parse("<>g")};
  hc.premise_schemes = {parse("P => []P")};
  hc.frame_constraints = {FrameProperty::Symmetric};
  hc.conclusion = parse("g");
  const auto none = find_countermodel(hc, with_jobs(jobs));
  SearchSpec weaker = hc;
  weaker.premise_formulas.clear();
  const auto found = find_countermodel(weaker, with_jobs(jobs));
  const bool ok = !none && found && found->frame().size() <= 2 && verify_countermodel(weaker, *found);
  std::string detail = none ? "HC refuted" : "HC: no countermodel up to 3 worlds";
  detail += found ? "; without <>g: countermodel at " + std::to_string(found->frame().size()) + " world(s)"
                  : "; without <>g: none";
  return {ok, detail, certificate_text(none) + certificate_text(found)};
}

// --- 10 --------------------------------------------------------------------------

Outcome refl_t() {
  const Formula t = axiom_scheme(AxiomId::T);
  std::size_t cases = 0, exceptions = 0;
  for (const Frame& fr : frames_up_to(3))
    for (std::size_t w = 0; w < fr.size(); ++w) {
      if (fr.access(w, w)) continue;
      ++cases;
      const Instantiation val = all_but(fr, w, "P");
      auto k = oracle::from_model(fr);
      for (std::size_t v = 0; v < fr.size(); ++v)
        if (v != w) k.val["P"].insert(v);
      if (!refutes_at(fr, t, val, w) || oracle::holds(k, t, w)) ++exceptions;
    }
  return {exceptions == 0, std::to_string(cases) + " non-reflexive points, " + std::to_string(exceptions) + " exceptions",
          {}};
}

// --- 11 --------------------------------------------------------------------------

Outcome round_trip() {
  std::mt19937_64 rng(31337);
  std::size_t exceptions = 0;
  for (int i = 0; i < 10000; ++i) {
    const Formula f = oracle::random_any(rng, 6);
    try {
      if (!(parse(render(f, Format::Ascii)) == f)) ++exceptions;
      if (!(parse(render(f, Format::Unicode)) == f)) ++exceptions;
    } catch (const ParseError&) {
      ++exceptions;
    }
  }
  return {exceptions == 0, "10000 ASTs, " + std::to_string(exceptions) + " exceptions", {}};
}

void report(int number, const char* name, const Timed& t, double limit_seconds = 0) {
  const bool in_time = limit_seconds <= 0 || t.seconds < limit_seconds;
  const bool pass = t.outcome.pass && in_time;
  std::printf("%s %2d  %-34s %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", number, name, t.outcome.detail.c_str(),
              t.seconds, in_time ? "" : ", over time limit");
  std::fflush(stdout);
}

}  // namespace

int main() {
  std::vector<Timed> results;
  auto record = [&](int number, const char* name, const std::function<Outcome()>& fn, double limit) {
    results.push_back(timed(fn));
    report(number, name, results.back(), limit);
    return results.back();
  };
  bool ok = true;
  auto track = [&](const Timed& t, double limit) { ok = ok && t.outcome.pass && (limit <= 0 || t.seconds < limit); };

  track(record(1, "correspondence exhaustive suite", correspondence_suite, 60), 60);
  track(record(2, "K and N", k_and_n, 0), 0);
  track(record(3, "relation lemmas", relation_lemmas, 10), 10);
  track(record(4, "strict_material and dia duality", duality, 0), 0);

  const std::size_t jobs = 4;
  const Timed c5 = record(5, "modus tollens pair", [&] { return modus_tollens(jobs); }, 30);
  track(c5, 30);
  const Timed c6 = record(6, "deduction theorem failure", [&] { return nondeduction(jobs); }, 0);
  track(c6, 0);
  const Timed c7 = record(7, "Barcan suite", [&] { return barcan_suite(jobs); }, 300);
  track(c7, 300);
  const Timed c8 = record(8, "Barcan readings", [&] { return barcan_readings(jobs); }, 0);
  track(c8, 0);
  const Timed c9 = record(9, "example argument", [&] { return example_argument(jobs); }, 60);
  track(c9, 60);

  track(record(10, "refl_T construction", refl_t, 0), 0);
  track(record(11, "parser round trip", round_trip, 0), 0);

  track(record(
            12, "determinism across job counts",
            [&] {
              const std::vector<std::function<Outcome(std::size_t)>> runs = {modus_tollens, nondeduction, barcan_suite,
                                                                             barcan_readings, example_argument};
              std::size_t mismatches = 0;
              for (const auto& run : runs) {
                const Outcome one = run(1);
                const Outcome eight = run(8);
                if (one.certificate != eight.certificate || one.certificate.empty()) ++mismatches;
              }
              return Outcome{mismatches == 0,
                             "criteria 5-9 at --jobs 1 vs 8: " + std::to_string(mismatches) + " mismatches",
                             {}};
            },
            0),
        0);
  return ok ? 0 : 1;
}
