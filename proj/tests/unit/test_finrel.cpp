#include <doctest.h>

#include <optional>

#include "reprind/error.hpp"
#include "reprind/finrel/quotient.hpp"

using namespace reprind;

namespace {

// Brute-force oracles over explicit loops.

std::optional<ZigzagCounterexample> zigzagOracle(const Rel& r) {
  for (std::size_t x = 0; x < r.domSize(); ++x)
    for (std::size_t y = 0; y < r.codSize(); ++y)
      for (std::size_t x2 = 0; x2 < r.domSize(); ++x2)
        for (std::size_t y2 = 0; y2 < r.codSize(); ++y2)
          if (r.holds(x, y) && r.holds(x2, y) && r.holds(x2, y2) && !r.holds(x, y2))
            return ZigzagCounterexample{x, y, x2, y2};
  return std::nullopt;
}

bool symmetricOracle(const Rel& e) {
  for (std::size_t x = 0; x < e.domSize(); ++x)
    for (std::size_t y = 0; y < e.domSize(); ++y)
      if (e.holds(x, y) != e.holds(y, x)) return false;
  return true;
}

bool transitiveOracle(const Rel& e) {
  for (std::size_t x = 0; x < e.domSize(); ++x)
    for (std::size_t y = 0; y < e.domSize(); ++y)
      for (std::size_t z = 0; z < e.domSize(); ++z)
        if (e.holds(x, y) && e.holds(y, z) && !e.holds(x, z)) return false;
  return true;
}

bool reflexiveOracle(const Rel& e) {
  for (std::size_t x = 0; x < e.domSize(); ++x)
    if (!e.holds(x, x)) return false;
  return true;
}

Rel relFromMask(const CarrierPtr& x, const CarrierPtr& y, unsigned mask) {
  return Rel::fromPredicate(x, y, [&](std::size_t i, std::size_t j) { return (mask >> (i * y->size() + j)) & 1U; });
}

std::vector<std::string> lists(std::size_t alphabet, std::size_t maxLen) {
  std::vector<std::string> out{""};
  std::vector<std::string> frontier{""};
  for (std::size_t len = 1; len <= maxLen; ++len) {
    std::vector<std::string> next;
    for (const auto& l : frontier)
      for (std::size_t a = 0; a < alphabet; ++a) next.push_back(l + static_cast<char>('0' + a));
    out.insert(out.end(), next.begin(), next.end());
    frontier = next;
  }
  return out;
}

}  // namespace

TEST_CASE("inverse, composition and identity") {
  auto x = makeCarrier("X", {"x0"});
  auto y = makeCarrier("Y", {"y0", "y1"});
  const std::pair<std::size_t, std::size_t> p[] = {{0, 0}};
  Rel r = Rel::fromPairs(x, y, p);
  Rel inv = inverseRel(r);
  CHECK(inv.domSize() == 2);
  CHECK(inv.holds(0, 0));
  CHECK_FALSE(inv.holds(1, 0));
  CHECK(inverseRel(inv) == r);
  CHECK(composeRel(r, idRel(y)) == r);
  CHECK(composeRel(idRel(x), idRel(x)) == idRel(x));

  auto one = rangeCarrier("One", 1);
  CHECK(idRel(one) == Rel::total(one, one));
  CHECK(isEquivalence(idRel(y)));

  auto z = rangeCarrier("Z", 3);
  FinMap f(y, z, {2, 0});
  FinMap g(z, y, {1, 1, 0});
  CHECK(composeRel(graphRel(f), graphRel(g)) == graphRel(f.then(g)));
  CHECK(graphRel(FinMap::identity(z)) == idRel(z));
}

TEST_CASE("composition algebra over all small relations") {
  auto a = rangeCarrier("A", 2);
  auto b = rangeCarrier("B", 2);
  for (unsigned m1 = 0; m1 < 16; ++m1)
    for (unsigned m2 = 0; m2 < 16; ++m2) {
      Rel r = relFromMask(a, b, m1);
      Rel s = relFromMask(b, a, m2);
      Rel rs = composeRel(r, s);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
          bool oracle = false;
          for (std::size_t j = 0; j < 2; ++j) oracle = oracle || (r.holds(i, j) && s.holds(j, k));
          REQUIRE(rs.holds(i, k) == oracle);
        }
      CHECK(inverseRel(rs) == composeRel(inverseRel(s), inverseRel(r)));
      for (unsigned m3 = 0; m3 < 16; m3 += 5) {
        Rel t = relFromMask(a, b, m3);
        CHECK(composeRel(composeRel(r, s), t) == composeRel(r, composeRel(s, t)));
      }
    }
}

TEST_CASE("composition rejects mismatched carriers") {
  auto a = rangeCarrier("A", 2);
  auto b = rangeCarrier("B", 3);
  CHECK_THROWS_AS(composeRel(idRel(a), idRel(b)), CarrierMismatch);
}

TEST_CASE("graph kernel") {
  auto x = rangeCarrier("X", 4);
  auto two = rangeCarrier("P", 2);
  FinMap parity(x, two, {0, 1, 0, 1});
  Rel g = graphRel(parity);
  Rel ker = composeRel(g, inverseRel(g));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(ker.holds(i, j) == (i % 2 == j % 2));
  Quotient q = quotient(x, ker);
  CHECK(q.carrier->size() == 2);
  CHECK(q.partition.representative(0) == 0);
  CHECK(q.partition.representative(1) == 1);
  CHECK(q.carrier->label(1) == "[1]");
}

TEST_CASE("zigzag completeness matches the quadruple scan") {
  auto x = rangeCarrier("X", 2, "x");
  auto y = rangeCarrier("Y", 2, "y");
  const std::pair<std::size_t, std::size_t> p[] = {{0, 0}, {1, 0}, {1, 1}};
  Rel r = Rel::fromPairs(x, y, p);
  auto cx = findZigzagViolation(r);
  REQUIRE(cx);
  CHECK(*cx == ZigzagCounterexample{0, 0, 1, 1});
  CHECK(isZigzagComplete(Rel::total(x, y)));

  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      auto cn = rangeCarrier("X", n);
      auto cm = rangeCarrier("Y", m);
      for (unsigned mask = 0; mask < (1U << (n * m)); ++mask) {
        Rel rr = relFromMask(cn, cm, mask);
        REQUIRE(findZigzagViolation(rr) == zigzagOracle(rr));
      }
    }
}

TEST_CASE("zigzag completeness and the composite relations") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      auto cn = rangeCarrier("X", n);
      auto cm = rangeCarrier("Y", m);
      for (unsigned mask = 0; mask < (1U << (n * m)); ++mask) {
        Rel r = relFromMask(cn, cm, mask);
        const Rel left = composeRel(r, inverseRel(r));
        const Rel right = composeRel(inverseRel(r), r);
        const Rel rrr = composeRel(left, r);
        bool contained = true;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < m; ++j) contained = contained && (!rrr.holds(i, j) || r.holds(i, j));
        const bool zigzag = !zigzagOracle(r);
        REQUIRE(zigzag == contained);
        if (zigzag) {
          REQUIRE(symmetricOracle(left));
          REQUIRE(transitiveOracle(left));
          REQUIRE(symmetricOracle(right));
          REQUIRE(transitiveOracle(right));
        }
      }
    }
  // both composites are total, hence equivalences, yet x1 ~ y1 is missing
  auto x = rangeCarrier("X", 2, "x");
  auto y = rangeCarrier("Y", 2, "y");
  const std::pair<std::size_t, std::size_t> p[] = {{0, 0}, {0, 1}, {1, 0}};
  Rel r = Rel::fromPairs(x, y, p);
  CHECK(isEquivalence(composeRel(r, inverseRel(r))));
  CHECK(isEquivalence(composeRel(inverseRel(r), r)));
  CHECK_FALSE(isZigzagComplete(r));
  CHECK(std::holds_alternative<QerFailure>(checkQER(r)));
}

TEST_CASE("equivalence checks match the law oracles") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto c = rangeCarrier("X", n);
    for (unsigned mask = 0; mask < (1U << (n * n)); ++mask) {
      Rel e = relFromMask(c, c, mask);
      const bool eq = reflexiveOracle(e) && symmetricOracle(e) && transitiveOracle(e);
      REQUIRE(isEquivalence(e) == eq);
      REQUIRE(isPer(e) == (symmetricOracle(e) && transitiveOracle(e)));
      if (!eq) {
        auto v = checkEquivalence(e);
        REQUIRE(v);
        if (!reflexiveOracle(e)) CHECK(v->law == EquivalenceViolation::Law::Reflexivity);
      }
    }
  }
}

TEST_CASE("quotient is effective") {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto c = rangeCarrier("X", n);
    for (unsigned mask = 0; mask < (1U << (n * n)); ++mask) {
      Rel e = relFromMask(c, c, mask);
      if (!isEquivalence(e)) {
        CHECK_THROWS_AS(quotient(c, e), InputError);
        continue;
      }
      Quotient q = quotient(c, e);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(q.partition.representative(q.map(i)) <= i);
        for (std::size_t j = 0; j < n; ++j) CHECK((q.map(i) == q.map(j)) == e.holds(i, j));
      }
    }
  }
  auto three = rangeCarrier("X", 3);
  CHECK(quotient(three, Rel::total(three, three)).carrier->size() == 1);
  Quotient id = quotient(three, idRel(three));
  CHECK(id.carrier->size() == 3);
  CHECK(id.map.isInjective());
}

TEST_CASE("checkQER obstructions") {
  auto x = rangeCarrier("X", 2, "x");
  auto y = rangeCarrier("Y", 2, "y");
  auto empty = checkQER(Rel(x, y));
  REQUIRE(std::holds_alternative<QerFailure>(empty));
  CHECK(std::get<QerFailure>(empty).kind == QerFailure::Kind::UntotalLeft);
  CHECK(std::get<QerFailure>(empty).element == 0);

  auto total = checkQER(Rel::total(x, y));
  REQUIRE(std::holds_alternative<QerWitness>(total));
  auto ie = inducedEquiv(std::get<QerWitness>(total));
  CHECK(ie.left.carrier->size() == 1);
  CHECK(ie.right.carrier->size() == 1);
}

TEST_CASE("induced equivalence of a bijection graph") {
  auto x = rangeCarrier("X", 3);
  auto y = rangeCarrier("Y", 3);
  FinMap f(x, y, {2, 0, 1});
  auto w = std::get<QerWitness>(checkQER(graphRel(f)));
  auto ie = inducedEquiv(w);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(ie.right.map(f(i)) == ie.equiv.forward()(ie.left.map(i)));
}

TEST_CASE("append-reverse relation on batched queues") {
  // batched pairs (xs, ys) with |xs| + |ys| <= N, related to xs ++ reverse ys
  for (std::size_t cap : {2, 3}) {
    auto ls = lists(2, cap);
    std::vector<std::string> batchedLabels;
    std::vector<std::pair<std::string, std::string>> batched;
    for (const auto& xs : ls)
      for (const auto& ys : ls)
        if (xs.size() + ys.size() <= cap) {
          batched.emplace_back(xs, ys);
          batchedLabels.push_back(xs + "|" + ys);
        }
    auto bq = makeCarrier("Batched", batchedLabels);
    auto lq = makeCarrier("List", ls);
    std::vector<std::uint32_t> table;
    for (const auto& [xs, ys] : batched) table.push_back(static_cast<std::uint32_t>(lq->indexOf(xs + std::string(ys.rbegin(), ys.rend()))));
    FinMap appendReverse(bq, lq, table);
    Rel g = graphRel(appendReverse);
    CHECK(!zigzagOracle(g));
    auto w = std::get<QerWitness>(checkQER(g));
    auto ie = inducedEquiv(w);
    CHECK(ie.left.carrier->size() == ls.size());
    CHECK(ie.right.carrier->size() == ls.size());
    if (cap == 2) CHECK(ls.size() == 7);
    // the transpose relates each list to every batched pair with that image
    Rel inv = inverseRel(g);
    for (std::size_t l = 0; l < lq->size(); ++l)
      for (std::size_t b = 0; b < bq->size(); ++b) {
        const auto& [xs, ys] = batched[b];
        CHECK(inv.holds(l, b) == (xs + std::string(ys.rbegin(), ys.rend()) == ls[l]));
      }
    for (std::size_t b = 0; b < bq->size(); ++b)
      CHECK(ie.equiv.forward()(ie.left.map(b)) == ie.right.map(appendReverse(b)));
  }
  auto ls = lists(2, 2);
  auto lq = makeCarrier("List", ls);
  auto bq = makeCarrier("B", {"0|1", "|10"});
  FinMap ar(bq, lq, {static_cast<std::uint32_t>(lq->indexOf("01")), static_cast<std::uint32_t>(lq->indexOf("01"))});
  CHECK(graphRel(ar).holds(0, lq->indexOf("01")));
  CHECK(graphRel(ar).holds(1, lq->indexOf("01")));
}

TEST_CASE("bijection validation") {
  auto x = rangeCarrier("X", 2);
  FinMap swap(x, x, {1, 0});
  CHECK_NOTHROW(Bijection(swap, swap));
  CHECK_THROWS_AS(Bijection(swap, FinMap::identity(x)), InputError);
  CHECK_THROWS_AS(Bijection::fromForward(FinMap(x, x, {0, 0})), InputError);
  CHECK_THROWS_AS(makeCarrier("D", {"a", "a"}), InputError);
}
