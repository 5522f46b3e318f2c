#include "doctest.h"
#include "modalkit/io.hpp"
#include "modalkit/parser.hpp"

using namespace modalkit;

namespace {

std::string error_path(const json& j) {
  try {
    model_from_json(j);
  } catch (const ModelError& e) {
    return e.path();
  }
  FAIL("expected a ModelError for " << j.dump());
  return {};
}

std::string fixture(const char* name) { return std::string(MODALKIT_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("loads the documented example") {
  const json j = json::parse(R"({"worlds":["w0","w1"], "access":[["w0","w1"]], "valuation":{"g":["w1"]},
    "domain":["a","b"], "mode":"varying", "exists_in":{"w0":["a"],"w1":["a","b"]},
    "flexible_preds":{"P":{"arity":1,"extension":{"w0":[["a"]],"w1":[]}}},
    "rigid_preds":{"R":{"arity":2,"extension":[["a","b"]]}}, "rigid_consts":{"c":"a"}})");
  const AnyModel m = model_from_json(j);
  REQUIRE(std::holds_alternative<FoModel>(m));
  const auto& fm = std::get<FoModel>(m);
  CHECK(fm.mode() == DomainMode::Varying);
  CHECK(fm.dframe().exists_in(0) == 0b01);
  CHECK(eval(fm, parse("P(c) & ~R(c, c) & <>g & <>exists y. R(c, y)"), 0));
  CHECK(to_json(m) == to_json(model_from_json(to_json(m))));
}

TEST_CASE("propositional round trip") {
  const AnyModel m = model_from_json(read_json_file(fixture("m1.json")));
  REQUIRE(std::holds_alternative<PropModel>(m));
  const json out = to_json(m);
  CHECK(out["worlds"] == json::array({"w0", "w1"}));
  CHECK(out["valuation"]["g"] == json::array({"w1"}));
  CHECK(to_json(model_from_json(out)) == out);
}

TEST_CASE("validation reports the first offending path") {
  CHECK(error_path(json::parse(R"({"access":[]})")) == "$.worlds");
  CHECK(error_path(json::parse(R"({"worlds":[]})")) == "$.worlds");
  CHECK(error_path(json::parse(R"({"worlds":["a","a"]})")) == "$.worlds[1]");
  CHECK(error_path(json::parse(R"({"worlds":["a"], "access":[["a","b"]]})")) == "$.access[0][1]");
  CHECK(error_path(json::parse(R"({"worlds":["a"], "valuation":{"g":["b"]}})")) == "$.valuation.g[0]");
  CHECK(error_path(json::parse(R"({"worlds":["a"], "colour":1})")) == "$.colour");
  CHECK(error_path(json::parse(R"({"worlds":["a"], "domain":["x1"], "exists_in":{"a":["y"]}})")) == "$.exists_in.a[0]");
  CHECK(error_path(json::parse(R"({"worlds":["a"], "domain":["d"], "mode":"constant", "exists_in":{"a":[]}})")) ==
        "$.exists_in.a");
  CHECK(error_path(json::parse(
            R"({"worlds":["a"], "domain":["d"], "rigid_preds":{"R":{"arity":2,"extension":[["d"]]}}})")) ==
        "$.rigid_preds.R.extension[0]");
  CHECK(error_path(json::parse(R"({"worlds":["a"], "domain":["d"], "rigid_consts":{"c":"e"}})")) ==
        "$.rigid_consts.c");
  CHECK_THROWS_AS(read_json_file(fixture("missing.json")), ModelError);
  CHECK_THROWS_AS(model_from_json(read_json_file(fixture("bad.json"))), ModelError);
}

TEST_CASE("report serialization") {
  const Frame fr = frame_from_json(read_json_file(fixture("nonrefl.json")));
  const json r = to_json(axiom_report(fr), fr);
  CHECK(r["T"]["holds"] == false);
  CHECK(r["T"]["property"] == false);
  CHECK(r["T"]["consistent"] == true);
  CHECK(r["T"]["witness"]["world"] == "a");
  CHECK(r["K"]["property"].is_null());
  CHECK(r["consistent"] == true);

  const DomainFrame df = dframe_from_json(read_json_file(fixture("shrink.json")));
  const json b = to_json(barcan_report(df), df);
  CHECK(b["BF"]["holds"] == true);
  CHECK(b["CBF"]["holds"] == false);
  CHECK(b["CBF"]["witness"].contains("interpretation"));
  CHECK(b["consistent"] == true);
}
