#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "reprind/error.hpp"
#include "reprind/studies/studies.hpp"

using namespace reprind;

namespace {

// "[a,b]" -> "ab"
std::string letters(const std::string& list) {
  std::string out;
  for (char c : list)
    if (c >= 'a' && c <= 'z') out += c;
  return out;
}

// "([a],[b,c])" -> ("a", "bc")
std::pair<std::string, std::string> splitBatched(const std::string& label) {
  const auto mid = label.find("],[");
  return {letters(label.substr(0, mid + 1)), letters(label.substr(mid + 2))};
}

std::uint64_t plainFib(std::uint64_t n) {
  std::uint64_t a = 0, b = 1;
  while (n--) {
    const auto c = a + b;
    a = b;
    b = c;
  }
  return a;
}

}  // namespace

TEST_CASE("queue carriers and appendReverse") {
  const QueueStudy s = buildQueueStudy({});
  CHECK(s.lists->size() == 15);
  // (t + 1) 2^t splits for each total length t
  CHECK(s.batched->size() == 1 + 4 + 12 + 32);
  CHECK(s.sizes->size() == 4);
  for (std::size_t i = 0; i < s.batched->size(); ++i) {
    auto [xs, ys] = splitBatched(s.batched->label(i));
    std::reverse(ys.begin(), ys.end());
    CHECK(letters(s.lists->label(s.appendReverse(i))) == xs + ys);
  }
  CHECK(s.lists->label(s.appendReverse(s.batched->indexOf("([a],[b])"))) == "[a,b]");
  CHECK(s.lists->label(s.appendReverse(s.batched->indexOf("([],[b,a])"))) == "[a,b]");
  CHECK(s.lists->label(s.appendReverse(s.batched->indexOf("([b,a],[a])"))) == "[b,a,a]");
  CHECK(renderWord(s.letters, {1, 0}) == "[b,a]");
  CHECK_THROWS_AS(buildQueueStudy({0, 3}), InputError);
}

TEST_CASE("queue study") {
  Report r("case-study", "queues");
  const auto res = runQueueStudy({}, r);
  CHECK(r.passed());
  REQUIRE(res.pipeline.transfer);
  const auto& t = *res.pipeline.transfer;
  CHECK(t.leftQuotient.carrier->size() == 15);
  CHECK(res.listClassesSingletons);
  CHECK(res.tiltClosureMatches);
  CHECK(res.paperInstanceMatches);
  CHECK(res.paperInstance.values.lhs == "just (([],[b,c]), a)");
  CHECK(res.paperInstance.values.rhs == "just (([c],[b]), a)");
  REQUIRE(res.rawCounterexample);
  CHECK(res.pipeline.transferDirection == "right->left");

  // batched states are identified exactly when appendReverse agrees
  const QueueStudy s = buildQueueStudy({});
  for (std::size_t i = 0; i < s.batched->size(); ++i)
    for (std::size_t j = 0; j < s.batched->size(); ++j)
      CHECK((t.induced.left.map(i) == t.induced.left.map(j)) == (s.appendReverse(i) == s.appendReverse(j)));

  Report big("case-study", "queues");
  CHECK(runQueueStudy({3, 3}, big).paperInstanceMatches);
  CHECK(big.passed());
}

TEST_CASE("multiset carriers and counts") {
  const MultisetStudy s = buildMultisetStudy({});
  CHECK(s.lists->size() == 15);
  CHECK(s.assoc->size() == 1 + 4 + 16);
  for (std::size_t i = 0; i < s.lists->size(); ++i) {
    const auto w = letters(s.lists->label(i));
    for (std::size_t a = 0; a < 2; ++a)
      CHECK(s.listCounts[i][a] == std::count(w.begin(), w.end(), static_cast<char>('a' + a)) % 2);
  }
  CHECK(s.assoc->label(s.assoc->size() - 1) == "[(b,1),(b,1)]");
  CHECK(s.assocCounts[s.assoc->size() - 1] == std::vector<std::uint32_t>{0, 0});
  CHECK_THROWS_AS(buildMultisetStudy({2, 3, 3, 0}), InputError);
  CHECK_THROWS_AS(buildMultisetStudy({2, 2, 3, 1}), InputError);

  const auto o = multisetOracle(s);
  CHECK(o.carrier->size() == 4);
  CHECK(o.carrier->label(o.indexOf({1, 0})) == "{a:1,b:0}");
}

TEST_CASE("multiset study") {
  Report r("case-study", "multisets");
  const auto res = runMultisetStudy({}, r);
  CHECK(r.passed());
  CHECK(res.structuredConditions.size() == 4);
  for (const auto& [name, ok] : res.structuredConditions) CHECK_MESSAGE(ok, name);
  CHECK(res.leftQuotientSize == 4);
  CHECK(res.rightQuotientSize == 4);
  CHECK(res.oracleSize == 4);
  CHECK(res.leftMatchesOracle);
  CHECK(res.rightMatchesOracle);
  CHECK(res.rawCounterexamples.count("union-assoc"));
  CHECK(res.rawCounterexamples.count("insert-comm"));
  CHECK(res.transferMatchesDirect);

  // quotient classes are exactly the count vectors
  const MultisetStudy s = buildMultisetStudy({});
  const auto& q = res.pipeline.transfer->induced.left;
  for (std::size_t i = 0; i < s.lists->size(); ++i)
    for (std::size_t j = 0; j < s.lists->size(); ++j)
      CHECK((q.map(i) == q.map(j)) == (s.listCounts[i] == s.listCounts[j]));

  Report three("case-study", "multisets");
  const auto wider = runMultisetStudy({3, 2, 3, 0}, three);
  CHECK(three.passed());
  CHECK(wider.oracleSize == 8);
}

TEST_CASE("matrix study") {
  const MatrixStudy s = buildMatrixStudy({2, 2, 2});
  CHECK(s.fin->size() == 16);
  CHECK(s.vec->label(0) == "[[0,0],[0,0]]");
  for (std::size_t i = 0; i < s.fin->size(); ++i) CHECK(s.finEntries[i] == s.vecEntries[s.equiv.forward()(i)]);

  Report r("case-study", "matrices");
  const auto res = runMatrixStudy({2, 2, 2}, r);
  CHECK(r.passed());
  CHECK(res.structured.holds);
  CHECK(res.transferredAdditionMatches);
  CHECK(res.goal.equal);
  CHECK(res.goal.left == "[[1,1],[1,1]]");

  Report rect("case-study", "matrices");
  runMatrixStudy({1, 3, 3}, rect);
  CHECK(rect.passed());
}

TEST_CASE("monoid encodings") {
  const MonoidStudy s = buildMonoidStudy(2);
  CHECK(s.binary->labels() == std::vector<std::string>{"[0,0]", "[0,1]", "[1,0]", "[1,1]"});
  CHECK(s.binary->label(s.encode.forward()(3)) == "[1,1]");
  CHECK(s.binary->label(s.encode.forward()((3 + 2) % 4)) == "[1,0]");
  CHECK(s.binary->label(s.encode.forward()(2)) == "[0,1]");
  for (std::size_t w = 1; w <= 3; ++w) {
    Report r("case-study", "monoid");
    const auto res = runMonoidStudy(w, r);
    CHECK(r.passed());
    CHECK(res.homomorphism);
    CHECK(res.agrees);
  }
  CHECK_THROWS_AS(buildMonoidStudy(0), InputError);
}

TEST_CASE("cost monad") {
  CHECK(fib(20) == CostValue{6765, 21890});
  CHECK(fibTail(20) == CostValue{6765, 19});
  for (std::uint64_t n = 0; n <= 20; ++n) {
    CHECK(fib(n).value == plainFib(n));
    CHECK(fibTail(n).value == plainFib(n));
    CHECK(fib(n).cost == 2 * plainFib(n + 1) - 2);
  }
  CHECK(costBind(CostValue{3, 4}, [](auto v) { return CostValue{v + 1, 5}; }) == CostValue{4, 10});
  Report r("case-study", "cost");
  const auto res = runCostStudy(20, r);
  CHECK(r.passed());
  CHECK(res.rawDiffer);
  CHECK(res.quotientAgrees);
  Report over("case-study", "cost");
  CHECK_THROWS_AS(runCostStudy(26, over), InputError);
}

TEST_CASE("report layout") {
  Report r("case-study", "x");
  r.params()["k"] = 1;
  Json& a = r.section("a");
  r.section("b")["v"] = 2;
  a["v"] = 1;
  r.check("one", true);
  r.check("two", false, "why");
  const Json j = r.json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "subject", "params", "a", "b", "verdicts", "passed"});
  CHECK(j["a"]["v"] == 1);
  CHECK(j["verdicts"][1]["detail"] == "why");
  CHECK_FALSE(r.passed());
  CHECK(r.verdict("two").detail == "why");
  CHECK_THROWS_AS(r.verdict("three"), std::out_of_range);
}
