#include <random>

#include "doctest.h"
#include "modalkit/correspondence.hpp"
#include "modalkit/parser.hpp"
#include "modalkit/semantics.hpp"
#include "oracle.hpp"

using namespace modalkit;

namespace {

Frame edges(std::vector<std::string> worlds, std::vector<std::pair<std::string, std::string>> access) {
  return Frame(std::move(worlds), access);
}

oracle::Kripke to_oracle(const PropModel& m, const Instantiation& inst = {}) {
  auto k = oracle::from_model(m.frame());
  for (const auto& src : {m.valuation(), inst})
    for (const auto& [name, set] : src)
      for (std::size_t w = 0; w < k.n; ++w)
        if ((set >> w) & 1U) k.val[name].insert(w);
  return k;
}

PropModel random_model(std::mt19937_64& rng, std::size_t max_worlds) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_worlds)(rng);
  const Frame fr = Frame::from_bits(n, std::uniform_int_distribution<std::uint64_t>(0, (1ULL << (n * n)) - 1)(rng));
  std::uniform_int_distribution<std::uint64_t> subset(0, (1ULL << n) - 1);
  return PropModel(fr, {{"p", subset(rng)}, {"q", subset(rng)}, {"r", subset(rng)}});
}

Instantiation random_inst(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::uint64_t> subset(0, (1ULL << n) - 1);
  return {{"P", subset(rng)}, {"Q", subset(rng)}};
}

// The least failing world, then the least instantiation index (first name most significant).
std::optional<std::pair<std::size_t, Instantiation>> oracle_scheme_witness(const PropModel& m, const Formula& f) {
  const std::size_t n = m.frame().size();
  const auto vars = scheme_vars(f);
  const std::vector<std::string> names(vars.begin(), vars.end());
  const std::size_t k = names.size();
  for (std::size_t w = 0; w < n; ++w)
    for (std::uint64_t idx = 0; idx < (1ULL << (n * k)); ++idx) {
      Instantiation inst;
      for (std::size_t j = 0; j < k; ++j) inst[names[j]] = (idx >> ((k - 1 - j) * n)) & all_of(n);
      if (!oracle::holds(to_oracle(m, inst), f, w)) return std::pair{w, inst};
    }
  return std::nullopt;
}

}  // namespace

TEST_CASE("eval examples") {
  const PropModel lonely(edges({"w"}, {}), {{"g", 0b1}});
  CHECK(eval(lonely, parse("[]g"), 0));
  CHECK_FALSE(eval(lonely, parse("<>g"), 0));
  CHECK_FALSE(frame_valid(lonely.frame(), parse("[]P => <>P")).holds);

  const Frame nonrefl = edges({"a", "b"}, {{"a", "b"}, {"b", "b"}});
  const PropModel refl_t(nonrefl, {{"p", 0b10}});
  CHECK(eval(refl_t, parse("[]p"), 0));
  CHECK_FALSE(eval(refl_t, parse("p"), 0));

  const PropModel chain(edges({"w0", "w1"}, {{"w0", "w1"}}), {{"p", 0b10}});
  CHECK(eval(chain, parse("<>p"), 0));
  CHECK_FALSE(eval(chain, parse("<>p"), 1));
}

TEST_CASE("valid examples") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) CHECK(valid(random_model(rng, 4), parse("p | ~p")).holds);
  const PropModel h1(Frame::total({"w0", "w1", "w2"}), {{"g", 0b100}});
  CHECK(valid(h1, parse("<>g")).holds);
  const PropModel m1(edges({"w0", "w1"}, {{"w0", "w1"}, {"w1", "w1"}}), {{"g", 0b10}});
  const Verdict v = valid(m1, parse("g"));
  REQUIRE_FALSE(v.holds);
  CHECK(v.witness->world == 0);
  CHECK_FALSE(v.witness->instantiation.size());
}

TEST_CASE("eval agrees with the recursive oracle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const PropModel m = random_model(rng, 5);
    const Instantiation inst = random_inst(rng, m.frame().size());
    const Formula f = oracle::random_prop(rng, 6);
    const auto k = to_oracle(m, inst);
    const WorldSet ext = extension(m, f, inst);
    for (std::size_t w = 0; w < m.frame().size(); ++w) CHECK(((ext >> w) & 1U) == oracle::holds(k, f, w));
  }
}

TEST_CASE("dia duality and strict_material") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const PropModel m = random_model(rng, 5);
    const Formula f = oracle::random_prop(rng, 5, false);
    const Formula g = oracle::random_prop(rng, 5, false);
    for (std::size_t w = 0; w < m.frame().size(); ++w) {
      CHECK(eval(m, Formula::dia(f), w) == eval(m, Formula::lnot(Formula::box(Formula::lnot(f))), w));
      CHECK(eval(m, Formula::strict_imp(f, g), w) == eval(m, Formula::box(Formula::imp(f, g)), w));
    }
  }
}

TEST_CASE("scheme_valid verdicts and witnesses match the oracle") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 400; ++i) {
    const PropModel m = random_model(rng, 3);
    const Formula f = oracle::random_prop(rng, 4);
    const Verdict v = scheme_valid(m, f);
    const auto expected = oracle_scheme_witness(m, f);
    INFO(render(f));
    REQUIRE(v.holds == !expected.has_value());
    if (expected) {
      CHECK(v.witness->world == expected->first);
      for (const auto& name : scheme_vars(f)) CHECK(v.witness->instantiation.at(name) == expected->second.at(name));
      CHECK_FALSE(oracle::holds(to_oracle(m, v.witness->instantiation), f, v.witness->world));
    }
  }
}

TEST_CASE("scheme_valid examples") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) CHECK(scheme_valid(random_model(rng, 3), axiom_scheme(AxiomId::K)).holds);
  bool tollens_bad_fails = false;
  for (int i = 0; i < 100 && !tollens_bad_fails; ++i)
    tollens_bad_fails = !scheme_valid(random_model(rng, 3), parse("(P => Q) => ([]~Q => []~P)")).holds;
  CHECK(tollens_bad_fails);
  const PropModel sub_identity(edges({"a", "b", "c"}, {{"a", "a"}, {"c", "c"}}), {});
  CHECK(scheme_valid(sub_identity, parse("P => []P")).holds);
  const PropModel edge(edges({"a", "b"}, {{"a", "b"}}), {});
  CHECK_FALSE(scheme_valid(edge, parse("P => []P")).holds);
}

TEST_CASE("scheme_valid budget") {
  const PropModel big(Frame::total({"a", "b", "c", "d", "e"}), {});
  CHECK_THROWS_AS(scheme_valid(big, parse("P & Q & R & S & T => P")), ResourceLimit);
  CHECK_NOTHROW(scheme_valid(big, parse("P & Q & R => P")));
  CHECK_THROWS_AS(scheme_valid(big, parse("P & Q & R => P"), Budget{10, 20}), ResourceLimit);
}

TEST_CASE("frame_valid agrees with the oracle on every frame up to 3 worlds") {
  const std::vector<Formula> schemes = {parse("[]P => P"), parse("[]P => [][]P"), parse("P => []<>P"),
                                        parse("[]P => <>P"), parse("<>P => []<>P"), parse("[]p => p"),
                                        parse("<>(P & q) => []Q")};
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::uint64_t bits = 0; bits < (1ULL << (n * n)); ++bits) {
      const Frame fr = Frame::from_bits(n, bits);
      for (const auto& s : schemes) CHECK(frame_valid(fr, s).holds == oracle::frame_valid(oracle::from_model(fr), s));
    }
}

TEST_CASE("frame_valid: T and the refuting valuation") {
  CHECK(frame_valid(edges({"w"}, {{"w", "w"}}), parse("[]P => P")).holds);
  const Frame fr = edges({"a", "b"}, {{"a", "b"}, {"b", "b"}});
  const Verdict v = frame_valid(fr, parse("[]P => P"));
  REQUIRE_FALSE(v.holds);
  CHECK(v.witness->world == 0);
  CHECK(refutes_at(fr, parse("[]P => P"), all_but(fr, 0, "P"), 0));
}

TEST_CASE("meta_implies examples") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const PropModel m = random_model(rng, 3);
    CHECK(meta_implies(m, {parse("P")}, parse("[]P")).holds);
    CHECK(meta_implies(m, {parse("P => Q")}, parse("[]~Q => []~P")).holds);
  }
  const PropModel two(edges({"w0", "w1"}, {{"w0", "w1"}}), {});
  CHECK(meta_implies(two, {parse("P")}, parse("[]P")).holds);
  const Verdict object = scheme_valid(two, parse("P => []P"));
  CHECK_FALSE(object.holds);
  const Verdict meta = meta_implies(two, {parse("P")}, parse("[]P"));
  CHECK(meta.holds);
}

TEST_CASE("meta_implies witness refutes the conclusion while premises stay valid") {
  const PropModel m(edges({"w0", "w1"}, {{"w0", "w1"}}), {});
  const Verdict v = meta_implies(m, {parse("P => []P")}, parse("P"));
  REQUIRE_FALSE(v.holds);
  const auto& inst = v.witness->instantiation;
  CHECK(oracle::valid(to_oracle(m, inst), parse("P => []P")));
  CHECK_FALSE(oracle::holds(to_oracle(m, inst), parse("P"), v.witness->world));
}

TEST_CASE("eval errors") {
  const PropModel m(edges({"w"}, {}), {});
  CHECK_THROWS_AS(eval(m, parse("P"), 0), EvalError);
  CHECK_THROWS_AS(eval(m, parse("forall x. R(x)"), 0), EvalError);
  CHECK_THROWS_AS(eval(m, parse("p"), 3), EvalError);
  const FoModel fm(DomainFrame::constant(edges({"w"}, {}), {"a"}), DomainMode::Constant, {},
                   {{"R", FlexiblePred{1, {}}}}, {}, {{"c", 0}});
  try {
    eval(fm, parse("R(x)"), 0);
    FAIL("expected UnboundVar");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::UnboundVar);
  }
  try {
    eval(fm, parse("R(d)"), 0);
    FAIL("expected UnknownSymbol");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::UnknownSymbol);
  }
  try {
    eval(fm, parse("forall x. R(x, x)"), 0);
    FAIL("expected ArityMismatch");
  } catch (const EvalError& e) {
    CHECK(e.kind() == EvalErrorKind::ArityMismatch);
  }
  CHECK_THROWS_AS(eval(fm, parse("R(x)"), 0, {{"x", "zz"}}), EvalError);
  CHECK(eval(fm, parse("R(x) | x = c"), 0, {{"x", "a"}}));
}

// --- first order -------------------------------------------------------------------

namespace {

struct RandomFo {
  FoModel model;
  oracle::FoKripke k;
  Instantiation inst;
};

RandomFo random_fo(std::mt19937_64& rng, bool varying) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  const Frame fr = Frame::from_bits(n, std::uniform_int_distribution<std::uint64_t>(0, (1ULL << (n * n)) - 1)(rng));
  std::vector<std::string> domain;
  for (std::size_t i = 0; i < d; ++i) domain.push_back(std::string(1, static_cast<char>('a' + i)) + "0");
  std::uniform_int_distribution<std::uint64_t> dsub(0, (1ULL << d) - 1), wsub(0, (1ULL << n) - 1);
  std::uniform_int_distribution<std::size_t> ind(0, d - 1);
  std::vector<DomainSet> exists(n, all_of(d));
  if (varying)
    for (auto& e : exists) e = dsub(rng);
  FlexiblePred r{1, {}};
  for (std::size_t i = 0; i < d; ++i) r.extension[{i}] = wsub(rng);
  RigidPred s{2, {}};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (std::bernoulli_distribution(0.4)(rng)) s.extension.insert({i, j});
  const std::map<std::string, std::size_t> consts{{"a", ind(rng)}, {"c", ind(rng)}};
  const Valuation val{{"p", wsub(rng)}, {"q1", wsub(rng)}};
  RandomFo out{FoModel(DomainFrame(fr, domain, exists), varying ? DomainMode::Varying : DomainMode::Constant, val,
                       {{"R", r}}, {{"S", s}}, consts),
               {}, {{"P", wsub(rng)}, {"Q", wsub(rng)}}};
  auto& k = out.k;
  k.base = oracle::from_model(fr);
  for (const auto& src : {val, out.inst})
    for (const auto& [name, set] : src)
      for (std::size_t w = 0; w < n; ++w)
        if ((set >> w) & 1U) k.base.val[name].insert(w);
  k.d = d;
  k.varying = varying;
  for (std::size_t w = 0; w < n; ++w) {
    k.exists.emplace_back();
    for (std::size_t i = 0; i < d; ++i)
      if ((exists[w] >> i) & 1U) k.exists.back().insert(i);
    for (std::size_t i = 0; i < d; ++i)
      if ((r.extension[{i}] >> w) & 1U) k.preds["R"].insert({w, {i}});
    for (const auto& t : s.extension) k.preds["S"].insert({w, t});
  }
  k.consts = consts;
  return out;
}

}  // namespace

TEST_CASE("first-order extension agrees with the recursive oracle") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const bool varying = i % 2 == 0;
    const RandomFo fo = random_fo(rng, varying);
    const Formula f = oracle::random_any(rng, 5);
    std::uniform_int_distribution<std::size_t> ind(0, fo.k.d - 1);
    std::map<std::string, std::size_t> env_idx{{"x", ind(rng)}, {"y", ind(rng)}, {"z", ind(rng)}};
    Env env;
    for (const auto& v : free_vars(f)) env[v] = fo.model.dframe().domain()[env_idx[v]];
    INFO(render(f));
    const WorldSet ext = extension(fo.model, f, env, fo.inst);
    for (std::size_t w = 0; w < fo.k.base.n; ++w) CHECK(((ext >> w) & 1U) == oracle::holds(fo.k, f, w, env_idx));
  }
}

TEST_CASE("constant mode equals varying mode with full existence") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    const RandomFo fo = random_fo(rng, false);
    const FoModel as_varying(fo.model.dframe(), DomainMode::Varying, fo.model.valuation(), fo.model.flexible(),
                             fo.model.rigid(), fo.model.constants());
    Formula f = oracle::random_any(rng, 5);
    for (const auto& v : free_vars(f)) f = Formula::forall(v, f);
    CHECK(extension(fo.model, f, {}, fo.inst) == extension(as_varying, f, {}, fo.inst));
  }
}

TEST_CASE("empty existence makes forall vacuous") {
  const DomainFrame df(edges({"w0", "w1"}, {}), {"a"}, {0b0, 0b1});
  const FoModel m(df, DomainMode::Varying, {}, {{"R", FlexiblePred{1, {}}}});
  CHECK(eval(m, parse("forall x. R(x)"), 0));
  CHECK_FALSE(eval(m, parse("forall x. R(x)"), 1));
  CHECK_FALSE(eval(m, parse("exists x. x = x"), 0));
}

TEST_CASE("fo_scheme_valid examples") {
  const auto bf = axiom_scheme(AxiomId::BF);
  const auto cbf = axiom_scheme(AxiomId::CBF);
  const Frame chain = edges({"w0", "w1"}, {{"w0", "w1"}});
  const FoModel constant(DomainFrame::constant(chain, {"a", "b"}), DomainMode::Constant);
  CHECK(fo_scheme_valid(constant, bf, "P").holds);
  CHECK(fo_scheme_valid(constant, cbf, "P").holds);

  const FoModel shrink(DomainFrame(chain, {"a", "b"}, {0b11, 0b01}), DomainMode::Varying);
  CHECK(fo_scheme_valid(shrink, bf, "P").holds);
  const Verdict v = fo_scheme_valid(shrink, cbf, "P");
  REQUIRE_FALSE(v.holds);
  REQUIRE(v.witness->hole);
  CHECK(v.witness->world == 0);
  const FoModel refuted = shrink.with_flexible("P", v.witness->hole->as_predicate());
  CHECK_FALSE(eval(refuted, cbf, 0));

  const FoModel isolated(DomainFrame(edges({"w0", "w1"}, {}), {"a", "b"}, {0b01, 0b10}), DomainMode::Varying);
  CHECK(fo_scheme_valid(isolated, bf, "P").holds);
  CHECK(fo_scheme_valid(isolated, cbf, "P").holds);

  const FoModel big(DomainFrame::constant(Frame::total({"a", "b", "c"}), {"i", "j", "k", "l", "m", "n", "o"}),
                    DomainMode::Constant);
  CHECK_THROWS_AS(fo_scheme_valid(big, bf, "P"), ResourceLimit);
}

TEST_CASE("fo_scheme_valid agrees with the oracle on varying domains") {
  const auto bf = axiom_scheme(AxiomId::BF);
  const auto cbf = axiom_scheme(AxiomId::CBF);
  for (std::size_t n = 1; n <= 2; ++n)
    for (std::uint64_t bits = 0; bits < (1ULL << (n * n)); ++bits)
      for (std::uint64_t e = 0; e < (1ULL << (2 * n)); ++e) {
        const Frame fr = Frame::from_bits(n, bits);
        std::vector<DomainSet> exists(n);
        oracle::FoKripke k;
        k.base = oracle::from_model(fr);
        k.d = 2;
        for (std::size_t w = 0; w < n; ++w) {
          exists[w] = (e >> (2 * w)) & 0b11;
          k.exists.emplace_back();
          for (std::size_t i = 0; i < 2; ++i)
            if ((exists[w] >> i) & 1U) k.exists.back().insert(i);
        }
        const FoModel m(DomainFrame(fr, {"a", "b"}, exists), DomainMode::Varying);
        CHECK(fo_scheme_valid(m, bf, "P").holds == oracle::valid_all_unary(k, bf, "P"));
        CHECK(fo_scheme_valid(m, cbf, "P").holds == oracle::valid_all_unary(k, cbf, "P"));
      }
}

TEST_CASE("readings of BF agree on constant domains") {
  const auto [lhs, rhs] = barcan_sides(AxiomId::BF);
  for (std::size_t n = 1; n <= 2; ++n)
    for (std::uint64_t bits = 0; bits < (1ULL << (n * n)); ++bits) {
      const FoModel m(DomainFrame::constant(Frame::from_bits(n, bits), {"a", "b"}), DomainMode::Constant);
      const ReadingReport r = compare_readings(m, lhs, rhs, "P");
      CHECK(r.meta == r.object);
      CHECK(r.equal);
    }
}

TEST_CASE("eval is pure") {
  std::mt19937_64 rng(30);
  const PropModel m = random_model(rng, 4);
  const Formula f = oracle::random_prop(rng, 6, false);
  const WorldSet first = extension(m, f);
  for (int i = 0; i < 10; ++i) CHECK(extension(m, f) == first);
}
