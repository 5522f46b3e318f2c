#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "modalkit/cli.hpp"

using namespace modalkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "modalkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(MODALKIT_FIXTURES) + "/" + name; }

bool json_only(const std::string& out) {
  try {
    nlohmann::json::parse(out);
    return true;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

}  // namespace

TEST_CASE("check") {
  auto r = run({"check", "--model", fixture("m1.json"), "--formula", "<>g", "--world", "w0"});
  CHECK(r.code == kHolds);
  CHECK(r.out == "true\n");
  r = run({"check", "--model", fixture("m1.json"), "--formula", "g"});
  CHECK(r.code == kRefuted);
  CHECK(r.out == "invalid at w0\n");
  r = run({"check", "--model", fixture("bad.json"), "--formula", "g"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("$.access[1][1]") != std::string::npos);
  r = run({"check", "--model", fixture("m1.json"), "--formula", "g & $"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("4..5") != std::string::npos);
  r = run({"check", "--model", fixture("m1.json"), "--formula", "P => []P"});
  CHECK(r.code == kRefuted);
  CHECK(r.out == "invalid at w0 with P = {w0}\n");
  r = run({"check", "--model", fixture("m1.json"), "--formula", "<>g", "--world", "w9"});
  CHECK(r.code == kUsageError);
}

TEST_CASE("check with --total and --env") {
  auto r = run({"check", "--model", fixture("m1.json"), "--formula", "<>g", "--total"});
  CHECK(r.code == kHolds);
  r = run({"check", "--model", fixture("fo1.json"), "--formula", "[]P(x) & R(x, c)", "--world", "w0", "--env",
           "x=a"});
  CHECK(r.code == kHolds);
  CHECK(r.out == "true\n");
  r = run({"check", "--model", fixture("fo1.json"), "--formula", "P(x)", "--world", "w0"});
  CHECK(r.code == kUsageError);
  r = run({"check", "--model", fixture("fo1.json"), "--formula", "P(x)", "--world", "w0", "--env", "x"});
  CHECK(r.code == kUsageError);
}

TEST_CASE("frame-valid, correspond, barcan") {
  auto r = run({"correspond", "--frame", fixture("total2.json")});
  CHECK(r.code == kHolds);
  CHECK(r.out.find("equivalence: yes") != std::string::npos);
  r = run({"frame-valid", "--frame", fixture("nonrefl.json"), "--scheme", "[]P => P"});
  CHECK(r.code == kRefuted);
  CHECK(r.out == "refuted at a by P = {b}\n");
  r = run({"frame-valid", "--frame", fixture("nonrefl.json"), "--scheme", "[]P => P", "--total"});
  CHECK(r.code == kHolds);
  r = run({"barcan", "--dframe", fixture("shrink.json")});
  CHECK(r.code == kRefuted);
  CHECK(r.out.find("BF: holds") != std::string::npos);
  CHECK(r.out.find("CBF: fails") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("countermodel") {
  auto r = run({"countermodel", "--conclusion", "(P => Q) => ([]~Q => []~P)", "--max-worlds", "3"});
  CHECK(r.code == kRefuted);
  CHECK(r.out.find("\"certificate\"") != std::string::npos);
  r = run({"countermodel", "--conclusion", "g", "--premise", "<>g", "--scheme-premise", "P => []P", "--require",
           "symmetric", "--max-worlds", "3"});
  CHECK(r.code == kHolds);
  CHECK(r.out == "no countermodel up to 3 worlds\n");
  r = run({"countermodel", "--conclusion", "[](forall x. P(x)) => forall x. []P(x)", "--mode", "varying",
           "--max-worlds", "2", "--max-domain", "2"});
  CHECK(r.code == kRefuted);
  r = run({"countermodel", "--conclusion", "g", "--require", "shiny"});
  CHECK(r.code == kUsageError);
  r = run({"countermodel", "--conclusion", "[]P => P", "--max-worlds", "9"});
  CHECK(r.code == kResourceLimit);
  setenv("MODALKIT_BUDGET", "5", 1);
  r = run({"countermodel", "--conclusion", "g", "--premise", "<>g", "--scheme-premise", "P => []P"});
  unsetenv("MODALKIT_BUDGET");
  CHECK(r.code == kResourceLimit);
}

TEST_CASE("json output is only json and independent of --jobs") {
  const std::vector<std::vector<std::string>> commands = {
      {"--json", "check", "--model", fixture("m1.json"), "--formula", "g"},
      {"check", "--json", "--model", fixture("m1.json"), "--formula", "<>g", "--world", "w0"},
      {"--json", "frame-valid", "--frame", fixture("nonrefl.json"), "--scheme", "[]P => P"},
      {"--json", "correspond", "--frame", fixture("total2.json")},
      {"--json", "barcan", "--dframe", fixture("shrink.json")},
      {"--json", "countermodel", "--conclusion", "(P => Q) => ([]~Q => []~P)"},
      {"--json", "countermodel", "--conclusion", "g", "--premise", "<>g", "--scheme-premise", "P => []P"},
      {"--json", "check", "--model", fixture("bad.json"), "--formula", "g"},
  };
  for (const auto& c : commands) {
    const Run r = run(c);
    INFO(r.out);
    CHECK(json_only(r.out));
  }
  auto base = run({"--json", "countermodel", "--conclusion", "[]P => [][]P", "--max-worlds", "3"});
  auto many = run({"--json", "--jobs", "8", "countermodel", "--conclusion", "[]P => [][]P", "--max-worlds", "3"});
  CHECK(base.out == many.out);
  CHECK(base.code == many.code);
}

TEST_CASE("render") {
  auto r = run({"render", "--formula", "[]P => P", "--format", "latex"});
  CHECK(r.out == "\\Box P \\supset P\n");
  r = run({"render", "--formula", "~<>(P & ~Q)", "--format", "unicode"});
  CHECK(r.out == "¬◇(P ∧ ¬Q)\n");
  r = run({"render", "--formula", "P |> Q", "--format", "latex"});
  CHECK(r.out == "P \\strictif Q\n");
  CHECK(r.code == kHolds);
  CHECK(run({"render", "--formula", "P &"}).code == kUsageError);
  CHECK(run({"render", "--formula", "P", "--format", "braille"}).code == kUsageError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kUsageError);
  CHECK(run({"frobnicate"}).code == kUsageError);
  CHECK(run({"check", "--formula", "g"}).code == kUsageError);
  CHECK(run({"--help"}).code == kHolds);
}
