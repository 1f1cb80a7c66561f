#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reprind/cli/app.hpp"
#include "reprind/cli/spec.hpp"
#include "reprind/error.hpp"

using namespace reprind;

namespace {

const std::string kSource = REPRIND_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = runCli(args, out, err);
  return {code, out.str(), err.str()};
}

Json readJson(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f);
  return Json::parse(f);
}

std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("reprind_test_" + name)).string();
}

std::string writeTemp(const std::string& name, const Json& j) {
  const auto path = tempPath(name);
  std::ofstream(path) << j.dump(1);
  return path;
}

std::string errorOf(const Json& j) {
  try {
    parseSpec(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

// two carriers related by pairs; the structure is a single point
Json pointSpec(const std::vector<std::pair<std::string, std::string>>& related) {
  Json pairs = Json::array();
  for (const auto& [l, r] : related) pairs.push_back(Json::array({l, r}));
  return Json{{"carriers", {{"L", {"a", "b"}}, {"R", {"p", "q"}}}},
              {"desc", "X"},
              {"operations", {{"pt", Json::array()}}},
              {"instances", {{"left", {{"carrier", "L"}, {"value", "a"}}}, {"right", {{"carrier", "R"}, {"value", "p"}}}}},
              {"relation", {{"pairs", pairs}}}};
}

}  // namespace

TEST_CASE("shipped specs round-trip") {
  for (const char* name : {"queues", "multisets", "monoid"}) {
    const auto path = kSource + "/specs/" + name + ".json";
    const SpecFile a = loadSpec(path);
    const Json ja = serializeSpec(a);
    const SpecFile b = parseSpec(ja);
    CHECK_MESSAGE(serializeSpec(b) == ja, name);
    CHECK(a.input.left.value == b.input.left.value);
    CHECK(a.input.right.value == b.input.right.value);
    CHECK(a.input.relation == b.input.relation);
    CHECK(a.input.axioms.size() == b.input.axioms.size());
    CHECK(ja == readJson(path));
  }
}

TEST_CASE("values in the spec format") {
  auto c = makeCarrier("C", {"x", "y"});
  const ConstantTable k{{"B", makeCarrier("B", {"f", "t"})}};
  for (const char* text : {"prod(X,maybe(X))", "maybe(maybe(X))", "fun(X,prod(X,const(B)))", "fun(maybe(X),fun(X,X))"}) {
    auto in = Interp::make(parseDesc(text, k), c);
    for (const auto& v : in->enumerate()) CHECK(valueFromJson(*in, valueToJson(*in, v), "") == v);
  }
  auto mm = Interp::make(parseDesc("maybe(maybe(X))", k), c);
  CHECK(valueToJson(*mm, StructValue::just(StructValue::nothing())) == Json{{"just", nullptr}});
  auto f = Interp::make(parseDesc("fun(maybe(X),X)", k), c);
  CHECK(valueToJson(*f, f->decode(0)) == Json::array({"x", "x", "x"}));
}

TEST_CASE("spec validation names the position") {
  Json q = readJson(kSource + "/specs/queues.json");

  Json shortTable = q;
  // tables are positional; dropping the last entry leaves the last batched queue unmapped
  auto& table = shortTable["instances"]["left"]["value"][1][1];
  table.erase(table.size() - 1);
  const auto missing = errorOf(shortTable);
  CHECK(missing.find("/instances/left/value/1/1") != std::string::npos);
  CHECK(missing.find("function table has no entry for ([b,b,b],[])") != std::string::npos);

  Json badLabel = q;
  badLabel["instances"]["right"]["value"][0] = "[c]";
  CHECK(errorOf(badLabel).find("/instances/right/value/0: '[c]' is not an element of ListQueue") != std::string::npos);

  Json badCarrier = q;
  badCarrier["instances"]["left"]["carrier"] = "Nope";
  CHECK(errorOf(badCarrier).find("/instances/left/carrier: unknown carrier 'Nope'") != std::string::npos);

  Json badAxiom = q;
  badAxiom["axioms"]["dequeue-empty"] = "(= (dequeue empty) (just))";
  CHECK(errorOf(badAxiom).find("/axioms/dequeue-empty") != std::string::npos);

  Json badObserver = q;
  badObserver["observers"]["size"]["left"][3] = "9";
  CHECK(errorOf(badObserver).find("/observers/size/left/3") != std::string::npos);

  Json badDesc = q;
  badDesc["desc"] = "prod(X,";
  CHECK(errorOf(badDesc).find("/desc") != std::string::npos);

  Json extra = q;
  extra["colour"] = "red";
  CHECK(errorOf(extra).find("/colour: unknown field") != std::string::npos);

  Json badPath = q;
  badPath["operations"]["enqueue"] = Json::array({1, 2});
  CHECK(errorOf(badPath).find("/operations/enqueue/1") != std::string::npos);

  std::ofstream(tempPath("broken.json")) << "{\n  \"carriers\": {\n    \"A\": [\"a\",]\n  }\n}\n";
  try {
    loadSpec(tempPath("broken.json"));
    FAIL("no error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("broken.json:3:") != std::string::npos);
  }
}

TEST_CASE("qer-check reports the zigzag quadruple") {
  const auto good = writeTemp("good.json", pointSpec({{"a", "p"}, {"b", "p"}, {"b", "q"}, {"a", "q"}}));
  CHECK(cli({"qer-check", good}).code == kExitPass);

  // the closure pair (a, q) is missing
  const auto bad = writeTemp("zigzag.json", pointSpec({{"a", "p"}, {"b", "p"}, {"b", "q"}}));
  const auto report = tempPath("zigzag-report.json");
  const Run r = cli({"qer-check", bad, "--report", report});
  CHECK(r.code == kExitVerdict);
  CHECK(r.out.find("FAIL  QER") != std::string::npos);
  const Json j = readJson(report);
  CHECK(j["relation"]["qer"]["quadruple"] == Json::array({"a", "p", "b", "q"}));
  CHECK_FALSE(j["passed"].get<bool>());
}

TEST_CASE("exit codes") {
  CHECK(cli({"case-study", "cost"}).code == kExitPass);
  CHECK(cli({"case-study", "cost", "--param", "maxInput=26"}).code == kExitInput);
  CHECK(cli({"case-study", "cost", "--param", "depth=3"}).code == kExitInput);
  CHECK(cli({"case-study", "cost", "--param", "maxInput=x"}).code == kExitInput);
  CHECK(cli({"case-study", "trees"}).code == kExitInput);
  CHECK(cli({"pipeline", tempPath("does-not-exist.json")}).code == kExitInput);
  CHECK(cli({"frobnicate"}).code == kExitInput);
  CHECK(cli({}).code == kExitInput);
  CHECK(cli({"--help"}).code == kExitPass);
  CHECK(cli({"case-study", "matrices", "--emit-spec", tempPath("m.json")}).code == kExitInput);

  // a function table over 7^6 arguments is past the enumeration cap
  Json big{{"carriers", {{"S", {"0", "1", "2", "3", "4", "5", "6"}}}},
           {"desc", "fun(prod(X,prod(X,prod(X,prod(X,prod(X,X))))),X)"},
           {"operations", {{"f", Json::array()}}},
           {"instances", {{"left", {{"carrier", "S"}, {"value", Json::array()}}},
                          {"right", {{"carrier", "S"}, {"value", Json::array()}}}}},
           {"relation", {{"pairs", Json::array()}}}};
  const Run cap = cli({"qer-check", writeTemp("cap.json", big)});
  CHECK(cap.code == kExitCap);

  // not structured: the points are unrelated
  const Run unrelated = cli({"pipeline", writeTemp("unrelated.json", pointSpec({{"a", "q"}, {"b", "p"}}))});
  CHECK(unrelated.code == kExitVerdict);
  CHECK(unrelated.out.find("FAIL  structured relation") != std::string::npos);
}

TEST_CASE("suites from the command line") {
  const Run r = cli({"suite", "suitability", "--desc", "maybe(X)", "--max-size", "2"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(cli({"suite", "positivity", "--desc", "prod(X,const(K))"}).code == kExitPass);
  CHECK(cli({"suite", "positivity", "--desc", "fun(X,X)"}).code == kExitInput);
  CHECK(cli({"suite", "suitability", "--desc", "fun(fun(X,X),X)"}).code == kExitInput);
  CHECK(cli({"suite", "suitability", "--desc", "prod(X,const(B))", "--const", "B=0,1,2"}).code == kExitPass);
}

TEST_CASE("reports are deterministic and pinned") {
  for (const char* name : {"queues", "multisets", "monoid", "cost"}) {
    const Run a = cli({"case-study", name, "--json"});
    const Run b = cli({"case-study", name, "--json"});
    CHECK(a.code == kExitPass);
    CHECK(a.out == b.out);
    CHECK_MESSAGE(Json::parse(a.out) == readJson(kSource + "/tests/golden/" + name + ".json"), name);
  }
}

TEST_CASE("queues spec reproduces the case study") {
  const Json study = Json::parse(cli({"case-study", "queues", "--json"}).out);
  const Run r = cli({"pipeline", kSource + "/specs/queues.json", "--json"});
  CHECK(r.code == kExitPass);
  const Json spec = Json::parse(r.out);
  for (const char* section : {"relation", "quotients", "descent", "equivalence", "axioms", "transfer"})
    CHECK_MESSAGE(spec[section] == study[section], section);
}
