#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "reprind/error.hpp"
#include "reprind/sip/transfer.hpp"
#include "reprind/structure/action.hpp"

using namespace reprind;

namespace {

const CarrierPtr kK = makeCarrier("K", {"k0", "k1"});

// (unit, op) with op given by a table over codes
StructuredInstance magma(const CarrierPtr& x, std::size_t unit, const std::function<std::size_t(std::size_t, std::size_t)>& op) {
  Desc d = Desc::prod(Desc::var(), Desc::fun(Desc::var(), Desc::fun(Desc::var(), Desc::var())));
  auto in = Interp::make(d, x);
  const Interp& f = in->second();
  std::vector<StructValue> rows;
  for (std::size_t i = 0; i < x->size(); ++i) {
    std::vector<StructValue> row;
    for (std::size_t j = 0; j < x->size(); ++j) row.push_back(StructValue::point(static_cast<std::uint32_t>(op(i, j))));
    rows.push_back(f.codomain().makeTable(std::move(row)));
  }
  return {x, d, StructValue::pair(StructValue::point(static_cast<std::uint32_t>(unit)), f.makeTable(std::move(rows)))};
}

Signature magmaSig(const Desc& d) { return Signature(d, {{"e", {0}}, {"op", {1}}}); }

const char* kAssoc = "(forall ((x X) (y X) (z X)) (= (op (op x y) z) (op x (op y z))))";
const char* kComm = "(forall ((x X) (y X)) (= (op x y) (op y x)))";
const char* kUnit = "(forall ((x X)) (= (op e x) x))";

std::vector<std::vector<std::uint32_t>> permutations(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::uint32_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Random well-typed terms over a single operation `s` of type d.
class TermGen {
 public:
  TermGen(Desc d, std::mt19937_64& rng) : d_(std::move(d)), rng_(rng) {}

  std::string gen(const Desc& t, int depth) {
    std::vector<std::function<std::string()>> options;
    if (t.is(Desc::Kind::Var)) {
      options.push_back([] { return std::string("x"); });
      options.push_back([] { return std::string("y"); });
    }
    if (t.is(Desc::Kind::Const)) {
      options.push_back([] { return std::string("k"); });
      options.push_back([] { return std::string("(lit K k1)"); });
    }
    if (depth > 0) {
      Desc cur = d_;
      std::vector<Desc> doms;
      for (;;) {
        if (cur == t) {
          auto ds = doms;
          options.push_back([this, ds, depth] {
            if (ds.empty()) return std::string("s");
            std::string s = "(s";
            for (const auto& dom : ds) s += " " + gen(dom, depth - 1);
            return s + ")";
          });
        }
        if (!cur.is(Desc::Kind::Fun)) break;
        doms.push_back(cur.domain());
        cur = Desc(cur.codomain());
      }
      if (t.is(Desc::Kind::Maybe)) {
        options.push_back([] { return std::string("nothing"); });
        options.push_back([this, t, depth] { return "(just " + gen(t.inner(), depth - 1) + ")"; });
      }
      if (t.is(Desc::Kind::Prod))
        options.push_back([this, t, depth] {
          return "(pair " + gen(t.first(), depth - 1) + " " + gen(t.second(), depth - 1) + ")";
        });
    }
    if (options.empty()) return {};
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    return options[pick(rng_)]();
  }

  std::vector<Desc> types() const {
    std::vector<Desc> out{Desc::var(), Desc::constant(kK)};
    Desc cur = d_;
    for (;;) {
      out.push_back(cur);
      if (!cur.is(Desc::Kind::Fun)) break;
      cur = Desc(cur.codomain());
    }
    return out;
  }

 private:
  Desc d_;
  std::mt19937_64& rng_;
};

}  // namespace

TEST_CASE("formula syntax") {
  auto inst = magma(rangeCarrier("Z4", 4), 0, [](auto a, auto b) { return (a + b) % 4; });
  Signature sig = magmaSig(inst.desc);
  for (const char* text : {kAssoc, kComm, kUnit}) {
    Formula f = parseFormula(text, sig);
    CHECK(f.str() == text);
    CHECK(parseFormula(f.str(), sig).str() == f.str());
  }
  CHECK_THROWS_AS(parseFormula("(forall ((x X)) (= (op x) x))", sig), InputError);
  CHECK_THROWS_AS(parseFormula("(forall ((x X)) (= (op x x x) x))", sig), InputError);
  CHECK_THROWS_AS(parseFormula("(forall ((x X)) (= (op x y) x))", sig), InputError);
  CHECK_THROWS_AS(parseFormula("(forall ((x X) (x X)) (= x x))", sig), InputError);
  CHECK_THROWS_AS(parseFormula("(forall ((op X)) (= op op))", sig), InputError);
  CHECK_THROWS_AS(parseFormula("(= nothing nothing)", sig), InputError);
  CHECK_THROWS_AS(parseFormula("(forall ((x X)) (= x x)", sig), InputError);
  try {
    parseFormula("(forall ((x X)) (= (op x x) qq))", sig);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("offset 28") != std::string::npos);
  }
  CHECK_THROWS_AS(Signature(inst.desc, {{"e", {0, 1}}}), InputError);
}

TEST_CASE("labels are typed by their context") {
  auto a = makeCarrier("A", {"a", "b"});
  auto n = makeCarrier("N", {"0", "1", "a"});
  Desc d = Desc::fun(Desc::var(), Desc::constant(n));
  Signature sig(d, {{"count", {}}}, {{"A", a}, {"N", n}});
  auto f = parseFormula("(forall ((x X)) (= (count x) a))", sig);
  CHECK(f.conclusion.rhs.carrier == n);
  CHECK(parseFormula("(forall ((x X)) (= (count x) 1))", sig).conclusion.rhs.index == 1);
  CHECK_THROWS_AS(parseFormula("(= a a)", sig), InputError);
  CHECK(parseFormula("(= (lit A a) a)", sig).conclusion.rhs.carrier == a);
}

TEST_CASE("evaluation finds the least counterexample") {
  auto x = rangeCarrier("X", 3);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> cell(0, 2);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::size_t> t(9);
    for (auto& c : t) c = cell(rng);
    auto inst = magma(x, 0, [&](auto i, auto j) { return t[i * 3 + j]; });
    Signature sig = magmaSig(inst.desc);
    auto assoc = evalAxiom(parseFormula(kAssoc, sig, "assoc"), sig, inst);
    auto comm = evalAxiom(parseFormula(kComm, sig, "comm"), sig, inst);
    auto guarded = evalAxiom(parseFormula("(forall ((x X) (y X)) (=> ((!= x y) (= (op x x) x)) (= (op x y) y)))",
                                          sig),
                             sig, inst);
    std::optional<std::array<std::size_t, 3>> a, g;
    std::optional<std::array<std::size_t, 2>> c;
    std::size_t guardedSeen = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        if (!c && t[i * 3 + j] != t[j * 3 + i]) c = {i, j};
        if (!g && i != j && t[i * 3 + i] == i) {
          ++guardedSeen;
          if (t[i * 3 + j] != j) g = {i, j, 0};
        }
        for (std::size_t k = 0; k < 3; ++k)
          if (!a && t[t[i * 3 + j] * 3 + k] != t[i * 3 + t[j * 3 + k]]) a = {i, j, k};
      }
    CHECK(assoc.holds == !a.has_value());
    if (a) {
      CHECK(assoc.counterexample->assignment[0].second == x->label((*a)[0]));
      CHECK(assoc.counterexample->assignment[1].second == x->label((*a)[1]));
      CHECK(assoc.counterexample->assignment[2].second == x->label((*a)[2]));
      CHECK(assoc.assignments == (*a)[0] * 9 + (*a)[1] * 3 + (*a)[2] + 1);
    } else {
      CHECK(assoc.assignments == 27);
    }
    CHECK(comm.holds == !c.has_value());
    if (c) CHECK(comm.counterexample->assignment[0].second == x->label((*c)[0]));
    CHECK(guarded.holds == !g.has_value());
    if (!g) CHECK(guarded.guarded == guardedSeen);
  }
}

TEST_CASE("evaluation over a large carrier") {
  const std::size_t n = 1500;
  auto x = rangeCarrier("X", n);
  for (auto [di, dj] : {std::pair<std::size_t, std::size_t>{3, 1400}, {0, 1023}, {1499, 1024}, {2, 5}}) {
    auto t = [&](std::size_t i, std::size_t j) { return i == di && j == dj ? (i + j + 1) % n : (i + j) % n; };
    auto inst = magma(x, 0, t);
    Signature sig = magmaSig(inst.desc);
    const auto comm = evalAxiom(parseFormula(kComm, sig), sig, inst);
    const auto guarded = evalAxiom(
        parseFormula("(forall ((x X) (y X)) (=> ((= (op x y) (op y x))) (= (op x (op x y)) (op (op x y) x))))", sig),
        sig, inst);
    // explicit loops with the same order and stopping rule
    std::uint64_t seen = 0, guards = 0;
    std::optional<std::pair<std::size_t, std::size_t>> c, g;
    for (std::size_t i = 0; i < n && !c; ++i)
      for (std::size_t j = 0; j < n && !c; ++j) {
        ++seen;
        if (t(i, j) != t(j, i)) c = {i, j};
      }
    CHECK(comm.assignments == seen);
    REQUIRE(c);
    CHECK(comm.counterexample->assignment[0].second == x->label(c->first));
    CHECK(comm.counterexample->assignment[1].second == x->label(c->second));
    seen = 0;
    for (std::size_t i = 0; i < n && !g; ++i)
      for (std::size_t j = 0; j < n && !g; ++j) {
        ++seen;
        if (t(i, j) != t(j, i)) continue;
        ++guards;
        if (t(i, t(i, j)) != t(t(i, j), i)) g = {i, j};
      }
    CHECK(guarded.holds == !g);
    CHECK(guarded.assignments == seen);
    CHECK(guarded.guarded == guards);
    if (g) CHECK(guarded.counterexample->assignment[1].second == x->label(g->second));
  }
}

TEST_CASE("residue monoid") {
  auto z4 = rangeCarrier("Z4", 4);
  auto inst = magma(z4, 0, [](auto a, auto b) { return (a + b) % 4; });
  Signature sig = magmaSig(inst.desc);
  for (const char* text : {kAssoc, kComm, kUnit}) CHECK(evalAxiom(parseFormula(text, sig), sig, inst).holds);
  auto at = evalAssignment(parseFormula(kAssoc, sig), sig, inst, {"1", "2", "3"});
  CHECK(at.conclusionHolds);
  CHECK(at.values.lhs == "2");
  CHECK_THROWS_AS(evalAssignment(parseFormula(kAssoc, sig), sig, inst, {"1", "2"}), InputError);
}

TEST_CASE("structured equivalence of magmas is the homomorphism condition") {
  auto x = rangeCarrier("Z4", 4);
  auto y = rangeCarrier("W", 4, "w");
  auto left = magma(x, 0, [](auto a, auto b) { return (a + b) % 4; });
  auto right = magma(y, 0, [](auto a, auto b) { return a ^ b; });
  std::size_t homs = 0;
  for (const auto& p : permutations(4)) {
    auto e = Bijection::fromForward(FinMap(x, y, p));
    bool hom = p[0] == 0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) hom = hom && p[(a + b) % 4] == (p[a] ^ p[b]);
    auto r = checkStructuredEquiv(left.desc, e, left.value, right.value);
    CHECK(r.holds == hom);
    if (!r.holds) CHECK(r.failure.has_value());
    homs += hom ? 1 : 0;
  }
  CHECK(homs == 0);  // Z/4 and the Klein group are not isomorphic

  auto right2 = magma(y, 0, [](auto a, auto b) { return (a + b) % 4; });
  for (const auto& p : permutations(4)) {
    auto e = Bijection::fromForward(FinMap(x, y, p));
    bool hom = p[0] == 0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) hom = hom && p[(a + b) % 4] == (p[a] + p[b]) % 4;
    CHECK(checkStructuredEquiv(left.desc, e, left.value, right2.value).holds == hom);
  }
  auto id = Bijection::identity(x);
  CHECK(checkStructuredEquiv(left.desc, id, left.value, left.value).holds);
  CHECK_THROWS_AS(checkStructuredEquiv(left.desc, id, left.value, StructValue::point(0)), InputError);
}

TEST_CASE("transfer") {
  auto x = rangeCarrier("Z4", 4);
  auto y = rangeCarrier("W", 4, "w");
  auto left = magma(x, 0, [](auto a, auto b) { return (a + b) % 4; });
  Signature sig = magmaSig(left.desc);
  std::vector<Formula> axioms;
  for (const char* text : {kAssoc, kComm, kUnit}) axioms.push_back(parseFormula(text, sig));

  auto same = transferAxioms(axioms, sig, Bijection::identity(x), left, left);
  CHECK(same.passed());
  CHECK(same.axioms.size() == 3);

  auto e = Bijection::fromForward(FinMap(x, y, {2, 0, 3, 1}));
  StructuredInstance right{y, left.desc, EquivAction(left.desc, e).apply(left.value)};
  auto moved = transferAxioms(axioms, sig, e, left, right);
  CHECK(moved.passed());
  for (const auto& a : moved.axioms) CHECK(a.left.assignments == a.right.assignments);

  auto other = magma(y, 0, [](auto a, auto b) { return (a + b) % 4; });
  CHECK_THROWS_AS(transferAxioms(axioms, sig, e, left, other), VerdictFailure);
  auto bad = magma(x, 0, [](auto a, auto b) { return (a + 2 * b) % 4; });
  CHECK_THROWS_AS(transferAxioms(axioms, sig, Bijection::identity(x), bad, bad), VerdictFailure);
  CHECK_THROWS_AS(transferAxioms(axioms, sig, e, left, left), CarrierMismatch);
}

TEST_CASE("observers") {
  auto x = rangeCarrier("Z4", 4);
  auto y = rangeCarrier("W", 4, "w");
  auto par = makeCarrier("P", {"even", "odd"});
  auto left = magma(x, 0, [](auto a, auto b) { return (a + b) % 4; });
  Signature sig(left.desc, {{"e", {0}}, {"op", {1}}}, {}, {{"parity", Desc::var(), par}});
  Observers obs{{"parity", FinMap(x, par, {0, 1, 0, 1})}};
  auto f = parseFormula("(forall ((x X) (y X)) (=> ((= (parity x) even)) (= (parity (op x y)) (parity y))))", sig, "p");
  CHECK(f.usesObservers);
  CHECK(evalAxiom(f, sig, left, obs).holds);
  CHECK_THROWS_AS(evalAxiom(f, sig, left), InputError);

  auto e = Bijection::fromForward(FinMap(x, y, {3, 1, 2, 0}));
  StructuredInstance right{y, left.desc, EquivAction(left.desc, e).apply(left.value)};
  auto moved = transportObservers(sig, obs, e);
  CHECK(moved.at("parity").table() == std::vector<std::uint32_t>{1, 1, 0, 0});
  CHECK(transferAxioms({f}, sig, e, left, right, obs).passed());
  Observers wrong{{"parity", FinMap(y, par, {1, 0, 1, 0})}};
  try {
    transferAxioms({f}, sig, e, left, right, obs, wrong);
    FAIL("expected a failure");
  } catch (const VerdictFailure& err) {
    CHECK(std::string(err.what()).find("does not respect") != std::string::npos);
  }

  auto q = quotient(x, Rel::fromPredicate(x, x, [](auto i, auto j) { return i % 2 == j % 2; }));
  CHECK(quotientObservers(sig, obs, q).at("parity").table() == std::vector<std::uint32_t>{0, 1});
  auto q2 = quotient(x, Rel::fromPredicate(x, x, [](auto i, auto j) { return (i < 2) == (j < 2); }));
  CHECK_THROWS_AS(quotientObservers(sig, obs, q2), VerdictFailure);
}

TEST_CASE("replaceGoal decides equality through a bijection") {
  auto x = rangeCarrier("X", 5);
  auto y = rangeCarrier("Y", 5, "y");
  for (const auto& p : permutations(5)) {
    if (p[0] % 2) continue;
    auto e = Bijection::fromForward(FinMap(x, y, p));
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = 0; b < 5; ++b) {
        auto r = replaceGoal(e, a, b);
        CHECK(r.equal == (a == b));
        CHECK(r.left == y->label(p[a]));
      }
  }
}

TEST_CASE("signature-only axioms are invariant under structured equivalence") {
  std::mt19937_64 rng(11);
  std::size_t formulas = 0;
  for (const auto& d : admissibleDescs(2, {kK})) {
    Signature sig(d, {{"s", {}}}, {{"K", kK}});
    TermGen gen(d, rng);
    auto types = gen.types();
    std::vector<Formula> fs;
    for (int i = 0; i < 12; ++i) {
      const Desc& t = types[rng() % types.size()];
      std::string lhs = gen.gen(t, 2), rhs = gen.gen(t, 2);
      if (lhs.empty() || rhs.empty()) continue;
      std::string body = "(= " + lhs + " " + rhs + ")";
      if (rng() % 2) body = "(=> ((!= x y)) " + body + ")";
      try {
        fs.push_back(parseFormula("(forall ((x X) (y X) (k K)) " + body + ")", sig));
      } catch (const InputError&) {
        // both sides untyped, e.g. nothing = nothing
      }
    }
    formulas += fs.size();
    for (std::size_t n = 1; n <= 3; ++n) {
      auto x = rangeCarrier("X", n, "x");
      auto y = rangeCarrier("Y", n, "y");
      auto in = Interp::make(d, x);
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        auto e = Bijection::fromForward(FinMap(x, y, p));
        auto s = in->random(rng);
        StructuredInstance left{x, d, s};
        StructuredInstance right{y, d, EquivAction(d, e).apply(s)};
        REQUIRE(checkStructuredEquiv(d, e, left.value, right.value).holds);
        for (const auto& f : fs) {
          auto l = evalAxiom(f, sig, left);
          auto r = evalAxiom(f, sig, right);
          CHECK_MESSAGE(l.holds == r.holds, std::string(f.str() + " over " + d.str()));
        }
      }
    }
  }
  CHECK(formulas > 100);
}
