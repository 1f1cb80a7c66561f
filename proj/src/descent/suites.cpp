#include "reprind/descent/suites.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <tuple>

#include "reprind/error.hpp"

namespace reprind {

bool SuiteReport::passed() const {
  return std::none_of(clauses.begin(), clauses.end(), [](const ClauseReport& c) { return c.status == "fail"; });
}

Rel StructuredRelations::table(const Desc& d, const Rel& r, std::uint64_t cap) const { return RelLift(d, r).table(cap); }

std::function<bool(const StructValue&, const StructValue&)> StructuredRelations::lift(const Desc& d,
                                                                                     const Rel& r) const {
  auto l = std::make_shared<RelLift>(d, r);
  return [l](const StructValue& s, const StructValue& t) { return l->holds(s, t); };
}

const StructuredRelations& defaultLifting() {
  static const StructuredRelations instance;
  return instance;
}

namespace {

std::string describeRel(const Rel& r) {
  std::string out = "{";
  bool first = true;
  for (auto [x, y] : r.pairs()) {
    if (!first) out += ", ";
    first = false;
    out += "(" + r.dom()->label(x) + "," + r.cod()->label(y) + ")";
  }
  return out + "}";
}

Rel relFromMask(const CarrierPtr& x, const CarrierPtr& y, std::uint64_t mask) {
  return Rel::fromPredicate(x, y, [&](std::size_t i, std::size_t j) { return (mask >> (i * y->size() + j)) & 1U; });
}

Rel randomRel(const CarrierPtr& x, const CarrierPtr& y, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution coin(density);
  return Rel::fromPredicate(x, y, [&](std::size_t, std::size_t) { return coin(rng); });
}

CarrierPtr side(char prefix, std::size_t n) {
  static std::map<std::pair<char, std::size_t>, CarrierPtr> cache;
  auto& c = cache[{prefix, n}];
  if (!c) c = rangeCarrier(std::string(1, static_cast<char>(prefix - 'a' + 'A')) + std::to_string(n), n,
                           std::string(1, prefix));
  return c;
}

std::vector<Rel> equivalences(const CarrierPtr& c) {
  std::vector<Rel> out;
  const std::size_t n = c->size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
    Rel e = relFromMask(c, c, mask);
    if (isEquivalence(e)) out.push_back(std::move(e));
  }
  return out;
}

struct Clause {
  ClauseReport report;
  void check(bool ok, const std::function<std::string()>& why) {
    ++report.checks;
    if (!ok && report.status != "fail") {
      report.status = "fail";
      report.counterexample = why();
    }
  }
  bool failed() const { return report.status == "fail"; }
};

Clause clause(std::string number, std::string name) { return Clause{{std::move(number), std::move(name), "pass", 0, "", ""}}; }

// Lifted tables keyed by relation, computed once per suite run.
class TableCache {
 public:
  TableCache(const Desc& d, const StructuredRelations& lifting, std::uint64_t cap)
      : d_(d), lifting_(lifting), cap_(cap) {}

  const Rel& get(const Rel& r) {
    auto key = std::make_tuple(r.dom()->name(), r.cod()->name(), bitsOf(r));
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, lifting_.table(d_, r, cap_)).first;
    return it->second;
  }

 private:
  static std::vector<bool> bitsOf(const Rel& r) {
    std::vector<bool> out;
    for (std::size_t x = 0; x < r.domSize(); ++x)
      for (std::size_t y = 0; y < r.codSize(); ++y) out.push_back(r.holds(x, y));
    return out;
  }
  const Desc& d_;
  const StructuredRelations& lifting_;
  std::uint64_t cap_;
  std::map<std::tuple<std::string, std::string, std::vector<bool>>, Rel> cache_;
};

std::string pairText(const Interp& l, const Interp& r, const StructValue& s, const StructValue& t) {
  return "s = " + l.render(s) + ", t = " + r.render(t);
}

// ρ(R)(s,t) ⟺ ρ(R⁻¹)(t,s), on tables.
void symmetryOnTables(Clause& c, const Rel& r, const Rel& fwd, const Rel& back) {
  for (std::size_t i = 0; i < fwd.domSize() && !c.failed(); ++i)
    for (std::size_t j = 0; j < fwd.codSize(); ++j) {
      const bool a = fwd.holds(i, j);
      const bool b = back.holds(j, i);
      c.check(a == b, [&] {
        return "R = " + describeRel(r) + "; s = " + fwd.dom()->label(i) + ", t = " + fwd.cod()->label(j) +
               ": lifted R gives " + (a ? "true" : "false") + ", lifted inverse gives " + (b ? "true" : "false");
      });
      if (c.failed()) break;
    }
}

// ρ(R)(s,t) ∧ ρ(R′)(t,u) ⇒ ρ(R·R′)(s,u), on tables.
void transitivityOnTables(Clause& c, const Rel& r, const Rel& r2, const Rel& t1, const Rel& t2, const Rel& t12) {
  Rel via = composeRel(t1, t2);
  c.check(via.isSubsetOf(t12), [&] {
    for (auto [i, k] : via.pairs())
      if (!t12.holds(i, k)) {
        std::size_t j = 0;
        while (!(t1.holds(i, j) && t2.holds(j, k))) ++j;
        return "R = " + describeRel(r) + ", R' = " + describeRel(r2) + "; s = " + t1.dom()->label(i) +
               ", t = " + t1.cod()->label(j) + ", u = " + t2.cod()->label(k) + ": not related by the lifted composite";
      }
    return std::string("composite table mismatch");
  });
}

void symmetryAndTransitivity(const Desc& d, const SuiteConfig& cfg, const StructuredRelations& lifting, Clause& sym,
                             Clause& trans) {
  TableCache tables(d, lifting, cfg.tableCap);
  // exhaustive part
  for (std::size_t n = 1; n <= cfg.exhaustiveSize; ++n)
    for (std::size_t m = 1; m <= cfg.exhaustiveSize; ++m) {
      auto x = side('x', n);
      auto y = side('y', m);
      const bool small =
          Interp::make(d, x)->size() <= cfg.tableCap && Interp::make(d, y)->size() <= cfg.tableCap;
      if (!small) throw CapExceeded("suitability suite: " + d.str() + " is too large to tabulate at size " +
                                    std::to_string(std::max(n, m)));
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * m)); ++mask) {
        Rel r = relFromMask(x, y, mask);
        symmetryOnTables(sym, r, tables.get(r), tables.get(inverseRel(r)));
        for (std::size_t k = 1; k <= cfg.exhaustiveSize; ++k) {
          auto z = side('z', k);
          for (std::uint64_t mask2 = 0; mask2 < (std::uint64_t{1} << (m * k)); ++mask2) {
            Rel r2 = relFromMask(y, z, mask2);
            transitivityOnTables(trans, r, r2, tables.get(r), tables.get(r2), tables.get(composeRel(r, r2)));
          }
        }
      }
    }

  // sampled part
  if (cfg.sampleSize == 0 || cfg.sampledRelations == 0) return;
  std::mt19937_64 rng(cfg.seed);
  auto x = side('x', cfg.sampleSize);
  auto y = side('y', cfg.sampleSize);
  auto z = side('z', cfg.sampleSize);
  auto lx = Interp::make(d, x);
  auto ly = Interp::make(d, y);
  const bool tabulate = lx->size() <= cfg.sampleTableCap;
  const double densities[] = {0.3, 0.5, 0.7};
  std::size_t valueChecks = 0;
  for (std::size_t i = 0; i < cfg.sampledRelations; ++i) {
    Rel r = randomRel(x, y, rng, densities[i % 3]);
    Rel r2 = randomRel(y, z, rng, densities[(i / 3) % 3]);
    Rel r12 = composeRel(r, r2);
    if (tabulate) {
      Rel t1 = lifting.table(d, r, cfg.tableCap);
      symmetryOnTables(sym, r, t1, lifting.table(d, inverseRel(r), cfg.tableCap));
      transitivityOnTables(trans, r, r2, t1, lifting.table(d, r2, cfg.tableCap), lifting.table(d, r12, cfg.tableCap));
      continue;
    }
    auto f = lifting.lift(d, r);
    auto fInv = lifting.lift(d, inverseRel(r));
    auto f2 = lifting.lift(d, r2);
    auto f12 = lifting.lift(d, r12);
    RelLift sampler(d, r, RelLift::Route::Definition);
    RelLift sampler2(d, r2, RelLift::Route::Definition);
    for (std::size_t k = 0; k < cfg.valueSamples; ++k) {
      auto s = lx->random(rng);
      auto related = sampler.sampleRelated({&s}, rng);
      auto t = (k % 2 == 0 && related) ? *related : ly->random(rng);
      const bool a = f(s, t);
      sym.check(a == fInv(t, s), [&] { return "R = " + describeRel(r) + "; " + pairText(*lx, *ly, s, t); });
      if (!a) continue;
      auto u = sampler2.sampleRelated({&t}, rng);
      if (!u || !f2(t, *u)) continue;
      ++valueChecks;
      trans.check(f12(s, *u), [&] {
        return "R = " + describeRel(r) + ", R' = " + describeRel(r2) + "; " + pairText(*lx, *ly, s, t) +
               ", u = " + Interp::make(d, z)->render(*u);
      });
    }
  }
  const std::string how = tabulate ? "tabulated" : "value-sampled (" + std::to_string(valueChecks) + " chains)";
  sym.report.note = std::to_string(cfg.sampledRelations) + " seeded relations at size " +
                    std::to_string(cfg.sampleSize) + ", " + how;
  trans.report.note = sym.report.note;
}

void descentClause(const Desc& d, const SuiteConfig& cfg, Clause& c) {
  std::mt19937_64 rng(cfg.seed ^ 0x5eedULL);
  std::map<std::string, std::uint64_t> methods;
  for (std::size_t n = 1; n <= cfg.descentSize; ++n) {
    auto x = side('x', n);
    auto lx = Interp::make(d, x);
    for (const Rel& e : equivalences(x)) {
      Descent descent(d, x, e, cfg.descent);
      RelLift self(d, e);
      auto attempt = [&](const StructValue& s) {
        try {
          auto res = descent.run(s);
          ++methods[methodName(res.uniqueness)];
          c.check(res.graphWitnessChecked && res.candidates == 1, [&] {
            return "E = " + describeRel(e) + "; s = " + lx->render(s) + ": " + std::to_string(res.candidates) +
                   " candidates";
          });
        } catch (const Error& err) {
          c.check(false, [&] { return "E = " + describeRel(e) + "; s = " + lx->render(s) + ": " + err.what(); });
        }
      };
      if (lx->size() <= cfg.descentValueCap) {
        for (std::uint64_t code = 0; code < lx->size(); ++code) {
          auto s = lx->decode(code);
          if (self.holds(s, s)) attempt(s);
        }
        continue;
      }
      // self-related sources are lifts of quotient values
      RelLift back(d, inverseRel(graphRel(descent.quotient().map)), RelLift::Route::Definition);
      for (std::size_t k = 0; k < cfg.descentSamples; ++k) {
        auto v = descent.target().random(rng);
        auto s = back.sampleRelated({&v}, rng);
        if (!s) {
          c.check(false, [&] { return "E = " + describeRel(e) + ": no source value lies over a quotient value"; });
          continue;
        }
        attempt(*s);
      }
    }
  }
  std::string note = "uniqueness:";
  for (const auto& [m, k] : methods) note += " " + m + "=" + std::to_string(k);
  c.report.note = note;
}

}  // namespace

SuiteReport suitabilitySuite(const Desc& d, const SuiteConfig& cfg, const StructuredRelations& lifting) {
  requireAdmissible(d);
  SuiteReport out{"suitability", d.str(), {}};
  out.clauses.push_back({"1", "set and prop preservation", "trivial", 0, "",
                         "trivially satisfied in finite semantics: booleans are propositions and finite carriers are sets"});
  Clause sym = clause("2", "symmetry");
  Clause trans = clause("3", "transitivity");
  symmetryAndTransitivity(d, cfg, lifting, sym, trans);
  Clause desc = clause("4", "descent to quotients");
  descentClause(d, cfg, desc);
  out.clauses.push_back(sym.report);
  out.clauses.push_back(trans.report);
  out.clauses.push_back(desc.report);
  return out;
}

SuiteReport positivitySuite(const Desc& p, const SuiteConfig& cfg, const StructuredRelations& lifting) {
  if (!p.isPositive()) throw InputError("positivity suite needs a positive description, got " + p.str());
  SuiteReport out{"positivity", p.str(), {}};

  Clause refl = clause("1", "reflexivity");
  for (std::size_t n = 1; n <= std::max(cfg.exhaustiveSize, cfg.descentSize); ++n) {
    auto x = side('x', n);
    auto lx = Interp::make(p, x);
    lx->requireEnumerable(cfg.tableCap * cfg.tableCap);
    auto f = lifting.lift(p, idRel(x));
    for (std::uint64_t code = 0; code < lx->size(); ++code) {
      auto s = lx->decode(code);
      refl.check(f(s, s), [&] { return "s = " + lx->render(s) + " is not related to itself"; });
    }
  }

  Clause rev = clause("2", "reverse transitivity");
  auto checkReverse = [&](const Rel& r, const Rel& r2) {
    Rel t12 = lifting.table(p, composeRel(r, r2), cfg.tableCap);
    Rel via = composeRel(lifting.table(p, r, cfg.tableCap), lifting.table(p, r2, cfg.tableCap));
    rev.check(via == t12, [&] {
      for (std::size_t i = 0; i < t12.domSize(); ++i)
        for (std::size_t k = 0; k < t12.codSize(); ++k)
          if (via.holds(i, k) != t12.holds(i, k))
            return "R = " + describeRel(r) + ", R' = " + describeRel(r2) + "; s = " + t12.dom()->label(i) +
                   ", u = " + t12.cod()->label(k) + ": lifted composite " + (t12.holds(i, k) ? "holds" : "fails") +
                   " but a middle value " + (via.holds(i, k) ? "exists" : "does not exist");
      return std::string("tables differ");
    });
  };
  for (std::size_t n = 1; n <= cfg.exhaustiveSize; ++n)
    for (std::size_t m = 1; m <= cfg.exhaustiveSize; ++m)
      for (std::size_t k = 1; k <= cfg.exhaustiveSize; ++k)
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << (n * m)); ++a)
          for (std::uint64_t b = 0; b < (std::uint64_t{1} << (m * k)); ++b)
            checkReverse(relFromMask(side('x', n), side('y', m), a), relFromMask(side('y', m), side('z', k), b));
  if (cfg.sampleSize > 0) {
    std::mt19937_64 rng(cfg.seed);
    const double densities[] = {0.3, 0.5, 0.7};
    auto x = side('x', cfg.sampleSize);
    auto y = side('y', cfg.sampleSize);
    auto z = side('z', cfg.sampleSize);
    for (std::size_t i = 0; i < cfg.sampledRelations; ++i) {
      Rel r = randomRel(x, y, rng, densities[i % 3]);
      checkReverse(r, randomRel(y, z, rng, densities[(i / 3) % 3]));
    }
    rev.report.note = std::to_string(cfg.sampledRelations) + " seeded relations at size " + std::to_string(cfg.sampleSize);
  }

  Clause quot = clause("3", "quotients");
  for (std::size_t n = 1; n <= cfg.descentSize; ++n) {
    auto x = side('x', n);
    for (const Rel& e : equivalences(x)) {
      auto qcm = quotientConditionMap(p, x, e);
      quot.check(qcm.bijective, [&] {
        return "E = " + describeRel(e) + ": induced map has " + std::to_string(qcm.map.dom()->size()) +
               " classes onto " + std::to_string(qcm.map.cod()->size()) + " values and is not a bijection";
      });
    }
  }

  out.clauses.push_back(refl.report);
  out.clauses.push_back(rev.report);
  out.clauses.push_back(quot.report);
  return out;
}

}  // namespace reprind
