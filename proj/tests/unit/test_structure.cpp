#include <doctest.h>

#include <random>

#include "reprind/error.hpp"
#include "reprind/finrel/quotient.hpp"
#include "reprind/structure/action.hpp"
#include "reprind/structure/lifting.hpp"

using namespace reprind;

namespace {

const CarrierPtr kK = makeCarrier("K", {"k0", "k1"});
const ConstantTable kConsts{{"K", kK}};

Desc parse(std::string_view s) { return parseDesc(s, kConsts); }

Rel relFromMask(const CarrierPtr& x, const CarrierPtr& y, unsigned mask) {
  return Rel::fromPredicate(x, y, [&](std::size_t i, std::size_t j) { return (mask >> (i * y->size() + j)) & 1U; });
}

// Direct recursive readings of the lifting clauses, with function domains
// enumerated in full.
bool liftOracle(const Desc& d, const Rel& r, const StructValue& s, const StructValue& t) {
  switch (d.kind()) {
    case Desc::Kind::Var:
      return r.holds(s.index(), t.index());
    case Desc::Kind::Const:
      return s.index() == t.index();
    case Desc::Kind::Prod:
      return liftOracle(d.first(), r, s.first(), t.first()) && liftOracle(d.second(), r, s.second(), t.second());
    case Desc::Kind::Maybe:
      if (s.is(StructValue::Kind::Nothing) && t.is(StructValue::Kind::Nothing)) return true;
      if (s.is(StructValue::Kind::Nothing) || t.is(StructValue::Kind::Nothing)) return false;
      return liftOracle(d.inner(), r, s.inner(), t.inner());
    case Desc::Kind::Fun: {
      auto l = Interp::make(d, r.dom());
      auto rr = Interp::make(d, r.cod());
      auto ps = l->domain().enumerate();
      auto qs = rr->domain().enumerate();
      for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < qs.size(); ++j)
          if (liftOracle(d.domain(), r, ps[i], qs[j]) &&
              !liftOracle(d.codomain(), r, l->applyCode(s, i), rr->applyCode(t, j)))
            return false;
      return true;
    }
  }
  return false;
}

std::vector<Bijection> allBijections(const CarrierPtr& x, const CarrierPtr& y) {
  std::vector<std::uint32_t> perm(x->size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::vector<Bijection> out;
  do out.push_back(Bijection::fromForward(FinMap(x, y, perm)));
  while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Desc> smallDescs() {
  auto ds = admissibleDescs(2, {kK});
  for (auto s : {"fun(maybe(X),maybe(X))", "prod(fun(X,X),maybe(X))", "fun(prod(X,const(K)),maybe(X))",
                 "maybe(fun(X,X))", "fun(X,fun(X,X))", "fun(maybe(X),prod(X,X))"})
    ds.push_back(parse(s));
  return ds;
}

}  // namespace

TEST_CASE("description syntax") {
  auto ds = admissibleDescs(3, {kK});
  CHECK(ds.size() == 254);
  for (const auto& d : ds) {
    CHECK(d.isAdmissible());
    CHECK(parse(d.str()) == d);
  }
  CHECK(parse(" prod ( X , maybe( const(K) ) ) ") == Desc::prod(Desc::var(), Desc::maybe(Desc::constant(kK))));
  CHECK_THROWS_AS(parse("prod(X"), InputError);
  CHECK_THROWS_AS(parse("const(Q)"), InputError);
  CHECK_THROWS_AS(parse("X X"), InputError);
  CHECK(Desc::var().isPositive());
  CHECK_FALSE(parse("fun(X,X)").isPositive());
  CHECK(parse("prod(const(K),maybe(X))").isPositive());
  CHECK_FALSE(parse("fun(fun(X,X),X)").isAdmissible());
}

TEST_CASE("interpretation sizes and order") {
  auto x = rangeCarrier("X", 3, "x");
  CHECK(Interp::make(Desc::var(), x)->size() == 3);
  auto m = Interp::make(parse("maybe(X)"), x);
  CHECK(m->size() == 4);
  CHECK(m->decode(0).is(StructValue::Kind::Nothing));
  CHECK(m->decode(1) == StructValue::just(StructValue::point(0)));
  auto f = Interp::make(parse("fun(X,X)"), x);
  CHECK(f->size() == 27);
  CHECK(f->decode(1).codes() == std::vector<std::uint32_t>{0, 0, 1});
  auto p = Interp::make(parse("prod(X,const(K))"), x);
  CHECK(p->decode(1) == StructValue::pair(StructValue::point(0), StructValue::constant(1)));
  CHECK(p->render(p->decode(5)) == "(x2, k1)");

  for (const auto& d : smallDescs()) {
    auto in = Interp::make(d, x);
    if (in->size() > 5000) continue;
    auto all = in->enumerate();
    for (std::uint64_t c = 0; c < all.size(); c += 7) {
      CHECK(in->encode(all[c]) == c);
      CHECK(in->wellShaped(all[c]));
    }
  }
  CHECK_THROWS_AS(Interp::make(parse("fun(prod(X,X),prod(X,X))"), x)->enumerate(), CapExceeded);
  CHECK_THROWS_AS(f->validate(StructValue::codedTable({0, 1})), InputError);
}

TEST_CASE("relation lifting agrees with the clause oracle on both routes") {
  for (const auto& d : smallDescs()) {
    for (auto [n, m] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{2, 2}}) {
      auto x = rangeCarrier("X", n, "x");
      auto y = rangeCarrier("Y", m, "y");
      auto lx = Interp::make(d, x);
      auto ly = Interp::make(d, y);
      if (lx->size() * ly->size() > 70000) continue;
      auto ss = lx->enumerate();
      auto ts = ly->enumerate();
      for (unsigned mask = 0; mask < (1U << (n * m)); ++mask) {
        Rel r = relFromMask(x, y, mask);
        RelLift def(d, r, RelLift::Route::Definition);
        Rel table = def.table();
        const bool zz = isZigzagComplete(r);
        std::optional<Rel> blocks;
        if (zz) blocks = RelLift(d, r, RelLift::Route::Blocks).table();
        for (std::size_t i = 0; i < ss.size(); ++i)
          for (std::size_t j = 0; j < ts.size(); ++j) {
            const bool want = liftOracle(d, r, ss[i], ts[j]);
            REQUIRE_MESSAGE(table.holds(i, j) == want, d.str());
            if (zz) REQUIRE_MESSAGE(blocks->holds(i, j) == want, d.str());
            CHECK(def.explainFailure(ss[i], ts[j]).has_value() == !want);
          }
      }
    }
  }
}

TEST_CASE("block route on non-zigzag relations is refused") {
  auto x = rangeCarrier("X", 2);
  const std::pair<std::size_t, std::size_t> p[] = {{0, 0}, {1, 0}, {1, 1}};
  Rel r = Rel::fromPairs(x, x, p);
  CHECK_THROWS_AS(RelLift(Desc::var(), r, RelLift::Route::Blocks), InputError);
  CHECK(RelLift(Desc::var(), r).route() == RelLift::Route::Definition);
}

TEST_CASE("relation lifting examples") {
  auto x = rangeCarrier("X", 2);
  Rel empty(x, x);
  RelLift f(parse("fun(X,X)"), empty);
  CHECK(f.table().count() == 16);
  RelLift v(Desc::var(), empty);
  CHECK(v.table() == empty);
  CHECK_THROWS_AS(RelLift(parse("fun(fun(X,X),X)"), empty), InputError);
  CHECK_THROWS_AS(requireAdmissible(parse("prod(X,fun(fun(X,X),X))")), InputError);
}

TEST_CASE("lifted graph of a bijection equals the structured equivalence") {
  for (std::size_t n : {1, 2, 3}) {
    auto x = rangeCarrier("X", n, "x");
    auto y = rangeCarrier("Y", n, "y");
    for (const auto& d : smallDescs()) {
      if (Interp::make(d, x)->size() > 729) continue;
      for (const auto& e : allBijections(x, y)) {
        REQUIRE_MESSAGE(RelLift(d, equivGraph(e), RelLift::Route::Definition).table() == EquivLift(d, e).table(),
                        d.str());
        CHECK(RelLift(d, equivGraph(e)).table() == EquivLift(d, e).table());
      }
    }
  }
}

TEST_CASE("structured equivalence examples") {
  auto b = makeCarrier("Bool", {"false", "true"});
  FinMap notMap(b, b, {1, 0});
  Bijection notE(notMap, notMap);
  CHECK(EquivLift(Desc::var(), notE).holds(StructValue::point(0), StructValue::point(1)));
  EquivLift m(parse("maybe(X)"), notE);
  CHECK_FALSE(m.holds(StructValue::nothing(), StructValue::just(StructValue::point(1))));
  auto fail = m.explainFailure(StructValue::nothing(), StructValue::just(StructValue::point(1)));
  REQUIRE(fail);
  CHECK(fail->detail.find("maybe mismatch") != std::string::npos);

  auto x = rangeCarrier("X", 3);
  EquivLift pr(parse("prod(X,X)"), Bijection::identity(x));
  auto in = Interp::make(parse("prod(X,X)"), x);
  for (auto s : in->enumerate())
    for (auto t : in->enumerate()) CHECK(pr.holds(s, t) == (s == t));
}

TEST_CASE("equivalence action") {
  auto b = makeCarrier("Bool", {"false", "true"});
  FinMap notMap(b, b, {1, 0});
  Bijection notE(notMap, notMap);
  EquivAction m(parse("maybe(X)"), notE);
  CHECK(m.apply(StructValue::just(StructValue::point(0))) == StructValue::just(StructValue::point(1)));
  CHECK(m.apply(StructValue::nothing()) == StructValue::nothing());
  // not ∘ id ∘ not = id
  EquivAction f(parse("fun(X,X)"), notE);
  auto idTable = StructValue::codedTable({0, 1});
  CHECK(f.apply(idTable) == idTable);
  CHECK(f.apply(StructValue::codedTable({0, 0})) == StructValue::codedTable({1, 1}));

  auto x = rangeCarrier("X", 3);
  auto perms = allBijections(x, x);
  for (const auto& d : smallDescs()) {
    auto in = Interp::make(d, x);
    if (in->size() > 2000) continue;
    auto all = in->enumerate();
    EquivAction id(d, Bijection::identity(x));
    for (const auto& s : all) REQUIRE(id.apply(s) == s);
    for (std::size_t i = 0; i < perms.size(); i += 2)
      for (std::size_t j = 1; j < perms.size(); j += 2) {
        EquivAction ai(d, perms[i]);
        EquivAction aj(d, perms[j]);
        EquivAction composed(d, perms[i].then(perms[j]));
        for (std::size_t c = 0; c < all.size(); c += 3) {
          REQUIRE(composed.apply(all[c]) == aj.apply(ai.apply(all[c])));
          REQUIRE(ai.applyInverse(ai.apply(all[c])) == all[c]);
        }
      }
    // the action's graph is the structured equivalence
    auto bij = EquivAction(d, perms[3]).asBijection();
    CHECK(graphRel(bij.forward()) == EquivLift(d, perms[3]).table());
  }
}

TEST_CASE("covariant action on maps") {
  auto x = rangeCarrier("X", 3);
  auto y = rangeCarrier("Y", 2);
  FinMap f(x, y, {1, 0, 1});
  CHECK(funAction(Desc::var(), f).table() == f.table());
  auto p = parse("prod(X,const(K))");
  auto img = funActionValue(p, f, StructValue::pair(StructValue::point(0), StructValue::constant(1)));
  CHECK(img == StructValue::pair(StructValue::point(1), StructValue::constant(1)));
  for (const auto& d : admissibleDescs(2, {kK})) {
    if (!d.isPositive()) continue;
    auto id = funAction(d, FinMap::identity(x));
    CHECK(id == FinMap::identity(id.dom()));
  }
  CHECK_THROWS_AS(funAction(parse("fun(X,X)"), f), InputError);
}

TEST_CASE("relation map witness") {
  auto x = rangeCarrier("X", 2);
  auto y = rangeCarrier("Y", 2);
  auto m = parse("maybe(X)");
  std::vector<FinMap> maps;
  for (std::uint32_t a = 0; a < 2; ++a)
    for (std::uint32_t c = 0; c < 2; ++c) maps.emplace_back(x, y, std::vector<std::uint32_t>{a, c});
  for (unsigned m0 = 0; m0 < 16; ++m0)
    for (unsigned m1 = 0; m1 < 16; ++m1) {
      Rel r0 = relFromMask(x, x, m0);
      Rel r1 = relFromMask(y, y, m1);
      for (const auto& f : maps)
        for (const auto& g : maps) {
          auto res = relMapWitness(m, f, g, r0, r1);
          bool alpha = true;
          for (auto [a, c] : r0.pairs()) alpha = alpha && r1.holds(f(a), g(c));
          REQUIRE(res.has_value() == !alpha);
          auto v = relMapWitness(Desc::var(), f, g, r0, r1);
          REQUIRE(v.has_value() == !alpha);
        }
    }
  // quotient map case used by descent
  auto four = rangeCarrier("F", 4);
  Rel par = Rel::fromPredicate(four, four, [](auto i, auto j) { return i % 2 == j % 2; });
  auto q = quotient(four, par);
  CHECK_FALSE(relMapWitness(parse("prod(X,maybe(X))"), FinMap::identity(four), q.map, idRel(four), graphRel(q.map)));
}

TEST_CASE("candidate counting and sampling") {
  std::mt19937_64 rng(7);
  auto x = rangeCarrier("X", 2);
  auto y = rangeCarrier("Y", 2);
  for (const auto& d : smallDescs()) {
    auto lx = Interp::make(d, x);
    if (lx->size() > 300) continue;
    auto ss = lx->enumerate();
    auto ts = Interp::make(d, y)->enumerate();
    for (unsigned mask = 0; mask < 16; mask += 3) {
      Rel r = relFromMask(x, y, mask);
      RelLift lift(d, r, RelLift::Route::Definition);
      for (std::size_t i = 0; i < ss.size(); i += 5) {
        std::vector<const StructValue*> cs{&ss[i], &ss[(i * 7 + 3) % ss.size()]};
        std::uint64_t brute = 0;
        for (const auto& t : ts) brute += (lift.holds(*cs[0], t) && lift.holds(*cs[1], t)) ? 1 : 0;
        REQUIRE_MESSAGE(lift.countCandidates(cs) == brute, d.str());
        auto one = lift.sampleRelated(cs, rng);
        CHECK(one.has_value() == (brute > 0));
        if (one) CHECK((lift.holds(*cs[0], *one) && lift.holds(*cs[1], *one)));
      }
      CHECK(lift.countCandidates({}) == ts.size());
    }
  }
}

TEST_CASE("alternative function and maybe equivalences agree") {
  for (std::size_t n : {1, 2, 3}) {
    auto x = rangeCarrier("X", n);
    auto y = rangeCarrier("Y", n);
    for (const auto& d : smallDescs()) {
      if (!d.is(Desc::Kind::Fun) && !d.is(Desc::Kind::Maybe)) continue;
      auto lx = Interp::make(d, x);
      if (lx->size() > 300) continue;
      auto ss = lx->enumerate();
      auto ts = Interp::make(d, y)->enumerate();
      for (const auto& e : allBijections(x, y)) {
        EquivLift plain(d, e);
        if (d.is(Desc::Kind::Fun)) {
          FunctionEquivStrPlus plus(d, e);
          for (const auto& s : ss)
            for (const auto& t : ts) REQUIRE(plus(s, t) == plain.holds(s, t));
        } else {
          MaybeEquivStrPrime prime(d, e);
          for (const auto& s : ss)
            for (const auto& t : ts) REQUIRE(prime(s, t) == plain.holds(s, t));
        }
      }
    }
  }
  auto b = makeCarrier("Bool", {"false", "true"});
  FinMap notMap(b, b, {1, 0});
  Bijection notE(notMap, notMap);
  CHECK(maybeEquivStrPrime(parse("maybe(X)"), notE, StructValue::just(StructValue::point(0)),
                           StructValue::just(StructValue::point(1))));
  CHECK(maybeEquivStrPrime(parse("maybe(X)"), notE, StructValue::nothing(), StructValue::nothing()));
  auto id = Bijection::identity(b);
  auto f = StructValue::codedTable({1, 0});
  CHECK(functionEquivStrPlus(parse("fun(X,X)"), id, f, f));
  CHECK_FALSE(functionEquivStrPlus(parse("fun(X,X)"), id, f, StructValue::codedTable({1, 1})));
}
