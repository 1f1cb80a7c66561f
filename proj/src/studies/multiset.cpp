#include <map>

#include "reprind/error.hpp"
#include "reprind/studies/studies.hpp"
#include "words.hpp"

namespace reprind {

namespace {

using Counts = std::vector<std::uint32_t>;
using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (letter, count)
using Assoc = std::vector<Entry>;

const char* kUnionAssoc =
    "(forall ((xs X) (ys X) (zs X)) (= (union xs (union ys zs)) (union (union xs ys) zs)))";
const char* kInsertComm =
    "(forall ((a A) (b A) (xs X)) (= (insert a (insert b xs)) (insert b (insert a xs))))";
const char* kCountInsertSame = "(forall ((a A) (xs X)) (= (count a (insert a xs)) (succ (count a xs))))";
const char* kCountInsertOther =
    "(forall ((a A) (b A) (xs X)) (=> ((!= a b)) (= (count a (insert b xs)) (count a xs))))";

// count vectors are coded with the first letter most significant
std::size_t countsCode(const Counts& c, std::size_t m) {
  std::size_t code = 0;
  for (auto v : c) code = code * m + v;
  return code;
}

Counts countsOfCode(std::size_t code, std::size_t k, std::size_t m) {
  Counts c(k);
  for (std::size_t i = k; i-- > 0;) {
    c[i] = static_cast<std::uint32_t>(code % m);
    code /= m;
  }
  return c;
}

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

struct Lists {
  std::size_t k, m, bound;
  std::vector<std::size_t> offset;  // index of the first word of each length
  std::vector<Word> words;
  std::vector<std::size_t> code;       // count code per word
  std::vector<std::size_t> canonical;  // word index per count code

  Lists(std::size_t k_, std::size_t m_, std::size_t bound_) : k(k_), m(m_), bound(bound_) {
    words = detail::wordsUpTo(k, bound);
    for (std::size_t len = 0, at = 0; len <= bound; at += power(k, len), ++len) offset.push_back(at);
    offset.push_back(words.size());
    for (const auto& w : words) {
      Counts c(k);
      for (auto a : w) c[a] = static_cast<std::uint32_t>((c[a] + 1) % m);
      code.push_back(countsCode(c, m));
    }
    canonical.resize(power(m, k));
    for (std::size_t cc = 0; cc < canonical.size(); ++cc) {
      const Counts c = countsOfCode(cc, k, m);
      Word w;
      for (std::uint32_t a = 0; a < k; ++a) w.insert(w.end(), c[a], a);
      canonical[cc] = indexOf(w);
    }
  }

  std::size_t rank(const Word& w) const {
    std::size_t r = 0;
    for (auto a : w) r = r * k + a;
    return r;
  }
  std::size_t indexOf(const Word& w) const { return offset[w.size()] + rank(w); }
  std::size_t length(std::size_t i) const { return words[i].size(); }
};

std::string renderAssoc(const CarrierPtr& letters, const Assoc& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (i ? ",(" : "(") + letters->label(a[i].first) + "," + std::to_string(a[i].second) + ")";
  return s + "]";
}

}  // namespace

MultisetStudy buildMultisetStudy(const MultisetStudyConfig& cfg) {
  const std::size_t k = cfg.alphabet, m = cfg.modulus, L = cfg.listBound;
  const std::size_t B = cfg.entryBound ? cfg.entryBound : k;
  if (k < 1 || m < 1) throw InputError("multisets: alphabet and modulus must be at least 1");
  if (k * (m - 1) > L)
    throw InputError("multisets: the list bound " + std::to_string(L) + " is below the canonical length " +
                     std::to_string(k * (m - 1)));
  if (B < k) throw InputError("multisets: the entry bound must be at least the alphabet size");

  auto letters = makeCarrier("A", detail::letterLabels(k));
  auto counts = makeCarrier("N", detail::numberLabels(m));
  const Lists lists(k, m, L);
  std::vector<std::string> listLabels;
  for (const auto& w : lists.words) listLabels.push_back(renderWord(letters, w));
  auto listCarrier = makeCarrier("ListBag", listLabels);

  std::vector<Assoc> assocs{{}};
  for (std::size_t len = 1, begin = 0; len <= B; ++len) {
    const std::size_t end = assocs.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t n = 0; n < m; ++n) {
          auto v = assocs[i];
          v.emplace_back(a, n);
          assocs.push_back(std::move(v));
        }
    begin = end;
  }
  std::map<Assoc, std::uint32_t> assocIndex;
  std::vector<std::string> assocLabels;
  std::vector<Counts> assocCounts;
  for (const auto& a : assocs) {
    assocIndex.emplace(a, static_cast<std::uint32_t>(assocLabels.size()));
    assocLabels.push_back(renderAssoc(letters, a));
    Counts c(k);
    for (auto [x, n] : a) c[x] = static_cast<std::uint32_t>((c[x] + n) % m);
    assocCounts.push_back(std::move(c));
  }
  auto assocCarrier = makeCarrier("AssocBag", assocLabels);

  const Desc x = Desc::var();
  const Desc a = Desc::constant(letters);
  const Desc nd = Desc::constant(counts);
  const Desc d = Desc::prod(
      x, Desc::prod(Desc::fun(a, Desc::fun(x, x)),
                    Desc::prod(Desc::fun(x, Desc::fun(x, x)), Desc::fun(a, Desc::fun(x, nd)))));

  auto assemble = [&](std::uint32_t empty, std::vector<StructValue> insert, std::vector<StructValue> unionRows,
                      std::vector<StructValue> count) {
    return StructValue::pair(
        StructValue::point(empty),
        StructValue::pair(StructValue::table(std::move(insert)),
                          StructValue::pair(StructValue::table(std::move(unionRows)),
                                            StructValue::table(std::move(count)))));
  };

  // lists: cons and append, the canonical form on overflow
  const std::size_t n = lists.words.size();
  StructValue listValue;
  {
    std::vector<StructValue> insert, unionRows, count;
    for (std::uint32_t c = 0; c < k; ++c) {
      std::vector<std::uint32_t> row(n), cnt(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto len = lists.length(i);
        Counts cs = countsOfCode(lists.code[i], k, m);
        cnt[i] = cs[c];
        if (len < L) {
          row[i] = static_cast<std::uint32_t>(lists.offset[len + 1] + c * power(k, len) + (i - lists.offset[len]));
        } else {
          cs[c] = static_cast<std::uint32_t>((cs[c] + 1) % m);
          row[i] = static_cast<std::uint32_t>(lists.canonical[countsCode(cs, m)]);
        }
      }
      insert.push_back(StructValue::codedTable(std::move(row)));
      count.push_back(StructValue::codedTable(std::move(cnt)));
    }
    const std::size_t codes = power(m, k);
    std::vector<std::size_t> add(codes * codes);
    for (std::size_t p = 0; p < codes; ++p)
      for (std::size_t q = 0; q < codes; ++q) {
        Counts cp = countsOfCode(p, k, m), cq = countsOfCode(q, k, m);
        for (std::size_t i = 0; i < k; ++i) cp[i] = static_cast<std::uint32_t>((cp[i] + cq[i]) % m);
        add[p * codes + q] = countsCode(cp, m);
      }
    unionRows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto li = lists.length(i);
      const auto ri = i - lists.offset[li];
      std::vector<std::uint32_t> row(n);
      for (std::size_t j = 0; j < n; ++j) {
        const auto lj = lists.length(j);
        row[j] = static_cast<std::uint32_t>(
            li + lj <= L ? lists.offset[li + lj] + ri * power(k, lj) + (j - lists.offset[lj])
                         : lists.canonical[add[lists.code[i] * codes + lists.code[j]]]);
      }
      unionRows.push_back(StructValue::codedTable(std::move(row)));
    }
    listValue = assemble(0, std::move(insert), std::move(unionRows), std::move(count));
  }

  // association lists
  auto canonicalAssoc = [&](const Assoc& v) {
    Counts c(k);
    for (auto [y, cnt] : v) c[y] = static_cast<std::uint32_t>((c[y] + cnt) % m);
    Assoc out;
    for (std::uint32_t y = 0; y < k; ++y)
      if (c[y]) out.emplace_back(y, c[y]);
    return out;
  };
  auto insertStar = [&](std::uint32_t cnt, std::uint32_t y, Assoc v) {
    bool merged = false;
    for (auto& e : v)
      if (e.first == y) {
        e.second = static_cast<std::uint32_t>((e.second + cnt) % m);
        merged = true;
        break;
      }
    if (!merged) v.emplace_back(y, cnt);
    return v.size() > B ? canonicalAssoc(v) : v;
  };
  StructValue assocValue;
  {
    const std::size_t na = assocs.size();
    std::vector<StructValue> insert, unionRows, count;
    for (std::uint32_t c = 0; c < k; ++c) {
      std::vector<std::uint32_t> row(na), cnt(na);
      for (std::size_t i = 0; i < na; ++i) {
        row[i] = assocIndex.at(insertStar(1 % m, c, assocs[i]));
        cnt[i] = assocCounts[i][c];
      }
      insert.push_back(StructValue::codedTable(std::move(row)));
      count.push_back(StructValue::codedTable(std::move(cnt)));
    }
    for (std::size_t i = 0; i < na; ++i) {
      std::vector<std::uint32_t> row(na);
      for (std::size_t j = 0; j < na; ++j) {
        Assoc acc = assocs[j];
        for (std::size_t e = assocs[i].size(); e-- > 0;) acc = insertStar(assocs[i][e].second, assocs[i][e].first, acc);
        row[j] = assocIndex.at(acc);
      }
      unionRows.push_back(StructValue::codedTable(std::move(row)));
    }
    assocValue = assemble(0, std::move(insert), std::move(unionRows), std::move(count));
  }

  std::vector<Counts> listCounts;
  for (std::size_t i = 0; i < n; ++i) listCounts.push_back(countsOfCode(lists.code[i], k, m));
  std::vector<std::size_t> assocCode;
  for (const auto& c : assocCounts) assocCode.push_back(countsCode(c, m));
  Rel r = Rel::fromPredicate(listCarrier, assocCarrier,
                             [&](std::size_t i, std::size_t j) { return lists.code[i] == assocCode[j]; });

  std::vector<std::uint32_t> succ(m);
  for (std::size_t i = 0; i < m; ++i) succ[i] = static_cast<std::uint32_t>((i + 1) % m);
  Signature sig(d, {{"empty", {0}}, {"insert", {1, 0}}, {"union", {1, 1, 0}}, {"count", {1, 1, 1}}},
                {{"A", letters}, {"N", counts}}, {{"succ", nd, counts}});
  std::vector<Formula> axioms{
      parseFormula(kUnionAssoc, sig, "union-assoc"),
      parseFormula(kInsertComm, sig, "insert-comm"),
      parseFormula(kCountInsertSame, sig, "count-insert-same"),
      parseFormula(kCountInsertOther, sig, "count-insert-other"),
  };
  const Observers obs{{"succ", FinMap(counts, counts, succ)}};
  PipelineInput input{sig,
                      StructuredInstance{listCarrier, d, std::move(listValue)},
                      StructuredInstance{assocCarrier, d, std::move(assocValue)},
                      std::move(r),
                      std::move(axioms),
                      obs,
                      obs,
                      "left",
                      {}};
  return MultisetStudy{cfg,         letters, counts, listCarrier, assocCarrier, std::move(listCounts),
                       std::move(assocCounts), std::move(input)};
}

std::size_t MultisetOracle::indexOf(const std::vector<std::uint32_t>& c) const { return countsCode(c, modulus); }

MultisetOracle multisetOracle(const MultisetStudy& study) {
  const std::size_t k = study.letters->size(), m = study.counts->size(), size = power(m, k);
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < size; ++c) {
    const Counts cs = countsOfCode(c, k, m);
    std::string s = "{";
    for (std::size_t i = 0; i < k; ++i) s += (i ? "," : "") + study.letters->label(i) + ":" + std::to_string(cs[i]);
    labels.push_back(s + "}");
  }
  auto carrier = makeCarrier("CountVector", labels);
  std::vector<StructValue> insert, unionRows, count;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<std::uint32_t> row(size), cnt(size);
    for (std::size_t c = 0; c < size; ++c) {
      Counts cs = countsOfCode(c, k, m);
      cnt[c] = cs[a];
      cs[a] = static_cast<std::uint32_t>((cs[a] + 1) % m);
      row[c] = static_cast<std::uint32_t>(countsCode(cs, m));
    }
    insert.push_back(StructValue::codedTable(std::move(row)));
    count.push_back(StructValue::codedTable(std::move(cnt)));
  }
  for (std::size_t p = 0; p < size; ++p) {
    std::vector<std::uint32_t> row(size);
    for (std::size_t q = 0; q < size; ++q) {
      Counts cp = countsOfCode(p, k, m);
      const Counts cq = countsOfCode(q, k, m);
      for (std::size_t i = 0; i < k; ++i) cp[i] = static_cast<std::uint32_t>((cp[i] + cq[i]) % m);
      row[q] = static_cast<std::uint32_t>(countsCode(cp, m));
    }
    unionRows.push_back(StructValue::codedTable(std::move(row)));
  }
  StructValue v = StructValue::pair(
      StructValue::point(0),
      StructValue::pair(StructValue::table(std::move(insert)),
                        StructValue::pair(StructValue::table(std::move(unionRows)),
                                          StructValue::table(std::move(count)))));
  return MultisetOracle{carrier, StructuredInstance{carrier, study.input.signature.desc(), std::move(v)}, m};
}

MultisetStudyResult runMultisetStudy(const MultisetStudyConfig& cfg, Report& report) {
  const MultisetStudy study = buildMultisetStudy(cfg);
  report.params()["alphabet"] = cfg.alphabet;
  report.params()["modulus"] = cfg.modulus;
  report.params()["listBound"] = cfg.listBound;
  report.params()["entryBound"] = cfg.entryBound ? cfg.entryBound : cfg.alphabet;
  Json& sec = report.section("study");
  sec["lists"] = study.lists->size();
  sec["assocLists"] = study.assoc->size();

  MultisetStudyResult res;
  const Signature& sig = study.input.signature;
  const char* names[] = {"empty", "insert", "union", "count"};
  for (const char* name : names) {
    const Operation* op = sig.findOperation(name);
    auto at = [&](const StructValue& v) {
      const StructValue* p = &v;
      for (int step : op->path) p = step ? &p->second() : &p->first();
      return *p;
    };
    const bool ok = RelLift(op->type, study.input.relation)
                        .holds(at(study.input.left.value), at(study.input.right.value));
    res.structuredConditions[name] = ok;
    report.check(std::string("condition on ") + name, ok);
  }

  res.pipeline = runPipeline(study.input, report);
  for (const auto& row : res.pipeline.axioms) {
    if (row.name != "union-assoc" && row.name != "insert-comm") continue;
    if (!row.rawLeft.holds) res.rawCounterexamples[row.name] = *row.rawLeft.counterexample;
    Json& raw = sec["rawFailures"][row.name];
    raw = row.rawLeft.holds ? Json(nullptr) : toJson(*row.rawLeft.counterexample);
    report.check(row.name + " fails on raw lists", !row.rawLeft.holds,
                 row.rawLeft.holds ? "" : row.rawLeft.counterexample->str());
  }
  if (!res.pipeline.transfer) return res;
  const TransferResult& t = *res.pipeline.transfer;

  const MultisetOracle oracle = multisetOracle(study);
  res.oracleSize = oracle.carrier->size();
  res.leftQuotientSize = t.leftQuotient.carrier->size();
  res.rightQuotientSize = t.rightQuotient.carrier->size();
  auto matches = [&](const Quotient& q, const StructuredInstance& inst, const std::vector<Counts>& cs) {
    if (q.carrier->size() != oracle.carrier->size()) return false;
    std::vector<std::uint32_t> f(q.carrier->size());
    for (std::size_t c = 0; c < f.size(); ++c)
      f[c] = static_cast<std::uint32_t>(oracle.indexOf(cs[q.partition.representative(c)]));
    FinMap fwd(q.carrier, oracle.carrier, f);
    if (!fwd.isSurjective()) return false;
    return checkStructuredEquiv(sig.desc(), Bijection::fromForward(fwd), inst.value, oracle.instance.value).holds;
  };
  res.leftMatchesOracle = matches(t.induced.left, t.leftQuotient, study.listCounts);
  res.rightMatchesOracle = matches(t.induced.right, t.rightQuotient, study.assocCounts);
  sec["quotientSizes"] = Json{{"left", res.leftQuotientSize}, {"right", res.rightQuotientSize}, {"oracle", res.oracleSize}};
  const std::string sizes = std::to_string(res.leftQuotientSize) + " and " + std::to_string(res.rightQuotientSize) +
                            " classes, " + std::to_string(res.oracleSize) + " count vectors";
  report.check("list quotient is the count-vector structure", res.leftMatchesOracle, sizes);
  report.check("association-list quotient is the count-vector structure", res.rightMatchesOracle, sizes);

  // union associativity and insert commutativity on the association-list
  // quotient by direct table lookups
  const StructValue& rv = t.rightQuotient.value;
  const auto& ins = rv.second().first().entries();
  const auto& uni = rv.second().second().first().entries();
  const std::size_t q = t.rightQuotient.carrier->size(), k = study.letters->size();
  bool assoc = true, comm = true;
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y)
      for (std::size_t z = 0; z < q; ++z)
        assoc = assoc && uni[x].codes()[uni[y].codes()[z]] == uni[uni[x].codes()[y]].codes()[z];
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t x = 0; x < q; ++x)
        comm = comm && ins[a].codes()[ins[b].codes()[x]] == ins[b].codes()[ins[a].codes()[x]];
  res.direct = {{"union-assoc", assoc}, {"insert-comm", comm}};
  res.transferMatchesDirect = res.pipeline.axiomTransfer.has_value();
  if (res.pipeline.axiomTransfer)
    for (const auto& a : res.pipeline.axiomTransfer->axioms)
      if (auto it = res.direct.find(a.right.axiom); it != res.direct.end())
        res.transferMatchesDirect = res.transferMatchesDirect && it->second == a.right.holds && it->second;
  report.check("transferred laws match direct verification on association lists", res.transferMatchesDirect);
  return res;
}

}  // namespace reprind
