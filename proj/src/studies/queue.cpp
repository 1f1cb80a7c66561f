#include <algorithm>
#include <map>

#include "reprind/error.hpp"
#include "reprind/finrel/quotient.hpp"
#include "reprind/studies/studies.hpp"
#include "words.hpp"

namespace reprind {

namespace {

using Batched = std::pair<Word, Word>;

Batched fastcheck(const Batched& q) {
  if (!q.second.empty()) return q;
  Word r(q.first.rbegin(), q.first.rend());
  return {{}, r};
}

Word appendRev(const Batched& q) {
  Word out = q.first;
  out.insert(out.end(), q.second.rbegin(), q.second.rend());
  return out;
}

const char* kDequeueEmpty = "(= (dequeue empty) nothing)";
const char* kDequeueEnqueueNothing =
    "(forall ((a A) (q X)) (=> ((!= (size q) {N}) (= (dequeue q) nothing)) "
    "(= (dequeue (enqueue a q)) (just (pair empty a)))))";
const char* kDequeueEnqueueJust =
    "(forall ((a A) (q X) (r X) (b A)) (=> ((!= (size q) {N}) (= (dequeue q) (just (pair r b)))) "
    "(= (dequeue (enqueue a q)) (just (pair (enqueue a r) b)))))";

std::string withCapacity(std::string text, std::size_t n) {
  const auto at = text.find("{N}");
  return text.replace(at, 3, std::to_string(n));
}

}  // namespace

std::string renderWord(const CarrierPtr& letters, const Word& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + letters->label(w[i]);
  return s + "]";
}

QueueStudy buildQueueStudy(const QueueStudyConfig& cfg) {
  if (cfg.alphabet < 1 || cfg.capacity < 1) throw InputError("queues: alphabet and capacity must be at least 1");
  const std::size_t n = cfg.capacity;
  auto letters = makeCarrier("A", detail::letterLabels(cfg.alphabet));
  auto sizes = makeCarrier("Size", detail::numberLabels(n + 1));

  auto words = detail::wordsUpTo(cfg.alphabet, n);
  std::map<Word, std::size_t> listIndex;
  std::vector<std::string> listLabels;
  for (const auto& w : words) {
    listIndex.emplace(w, listLabels.size());
    listLabels.push_back(renderWord(letters, w));
  }
  std::vector<Batched> pairs;
  for (std::size_t total = 0; total <= n; ++total)
    for (std::size_t lx = 0; lx <= total; ++lx)
      for (const auto& xs : words)
        if (xs.size() == lx)
          for (const auto& ys : words)
            if (ys.size() == total - lx) pairs.emplace_back(xs, ys);
  std::map<Batched, std::size_t> batchedIndex;
  std::vector<std::string> batchedLabels;
  for (const auto& q : pairs) {
    batchedIndex.emplace(q, batchedLabels.size());
    batchedLabels.push_back("(" + renderWord(letters, q.first) + "," + renderWord(letters, q.second) + ")");
  }
  auto lists = makeCarrier("ListQueue", listLabels);
  auto batched = makeCarrier("BatchedQueue", batchedLabels);

  const Desc a = Desc::constant(letters);
  const Desc x = Desc::var();
  const Desc d = Desc::prod(x, Desc::prod(Desc::fun(a, Desc::fun(x, x)), Desc::fun(x, Desc::maybe(Desc::prod(x, a)))));

  auto point = [](std::size_t i) { return StructValue::point(static_cast<std::uint32_t>(i)); };
  auto letter = [](std::size_t i) { return StructValue::constant(static_cast<std::uint32_t>(i)); };

  // list side: cons onto the front, dequeue from the back
  auto listValue = [&] {
    auto in = Interp::make(d, lists);
    const Interp& enq = in->second().first();
    const Interp& deq = in->second().second();
    std::vector<StructValue> enqRows;
    for (std::uint32_t c = 0; c < cfg.alphabet; ++c) {
      std::vector<StructValue> row;
      for (const auto& w : words) {
        if (w.size() >= n) {
          row.push_back(point(listIndex.at(w)));
          continue;
        }
        Word v{c};
        v.insert(v.end(), w.begin(), w.end());
        row.push_back(point(listIndex.at(v)));
      }
      enqRows.push_back(enq.codomain().makeTable(std::move(row)));
    }
    std::vector<StructValue> deqRow;
    for (const auto& w : words) {
      if (w.empty()) {
        deqRow.push_back(StructValue::nothing());
        continue;
      }
      Word init(w.begin(), w.end() - 1);
      deqRow.push_back(StructValue::just(StructValue::pair(point(listIndex.at(init)), letter(w.back()))));
    }
    return StructValue::pair(point(listIndex.at({})),
                             StructValue::pair(enq.makeTable(std::move(enqRows)), deq.makeTable(std::move(deqRow))));
  }();

  auto batchedValue = [&] {
    auto in = Interp::make(d, batched);
    const Interp& enq = in->second().first();
    const Interp& deq = in->second().second();
    std::vector<StructValue> enqRows;
    for (std::uint32_t c = 0; c < cfg.alphabet; ++c) {
      std::vector<StructValue> row;
      for (const auto& q : pairs) {
        if (q.first.size() + q.second.size() >= n) {
          row.push_back(point(batchedIndex.at(q)));
          continue;
        }
        Word xs{c};
        xs.insert(xs.end(), q.first.begin(), q.first.end());
        row.push_back(point(batchedIndex.at(fastcheck({xs, q.second}))));
      }
      enqRows.push_back(enq.codomain().makeTable(std::move(row)));
    }
    std::vector<StructValue> deqRow;
    for (const auto& q : pairs) {
      const Batched f = fastcheck(q);
      if (f.second.empty()) {
        deqRow.push_back(StructValue::nothing());
        continue;
      }
      Word rest(f.second.begin() + 1, f.second.end());
      deqRow.push_back(StructValue::just(
          StructValue::pair(point(batchedIndex.at(fastcheck({f.first, rest}))), letter(f.second.front()))));
    }
    return StructValue::pair(point(batchedIndex.at({})),
                             StructValue::pair(enq.makeTable(std::move(enqRows)), deq.makeTable(std::move(deqRow))));
  }();

  std::vector<std::uint32_t> ar;
  for (const auto& q : pairs) ar.push_back(static_cast<std::uint32_t>(listIndex.at(appendRev(q))));
  FinMap appendReverse(batched, lists, ar);

  Signature sig(d, {{"empty", {0}}, {"enqueue", {1, 0}}, {"dequeue", {1, 1}}}, {{"A", letters}},
                {{"size", Desc::var(), sizes}});
  std::vector<Formula> axioms{
      parseFormula(kDequeueEmpty, sig, "dequeue-empty"),
      parseFormula(withCapacity(kDequeueEnqueueNothing, n), sig, "dequeue-enqueue-nothing"),
      parseFormula(withCapacity(kDequeueEnqueueJust, n), sig, "dequeue-enqueue-just"),
  };

  std::vector<std::uint32_t> listSize, batchedSize;
  for (const auto& w : words) listSize.push_back(static_cast<std::uint32_t>(w.size()));
  for (const auto& q : pairs) batchedSize.push_back(static_cast<std::uint32_t>(q.first.size() + q.second.size()));

  PipelineInput input{sig,
                      StructuredInstance{batched, d, batchedValue},
                      StructuredInstance{lists, d, listValue},
                      graphRel(appendReverse),
                      std::move(axioms),
                      {{"size", FinMap(batched, sizes, batchedSize)}},
                      {{"size", FinMap(lists, sizes, listSize)}},
                      "right",
                      {}};
  return QueueStudy{cfg, letters, lists, batched, sizes, std::move(words), std::move(pairs), appendReverse,
                    std::move(input)};
}

QueueStudyResult runQueueStudy(const QueueStudyConfig& cfg, Report& report) {
  const QueueStudy study = buildQueueStudy(cfg);
  report.params()["alphabet"] = cfg.alphabet;
  report.params()["capacity"] = cfg.capacity;
  QueueStudyResult res;

  // appendReverse sends ([a],[b]) and ([],[b,a]) to [a,b]
  Json& sec = report.section("study");
  if (cfg.alphabet >= 2 && cfg.capacity >= 2) {
    const auto l = study.lists->indexOf("[a,b]");
    const bool ok = study.appendReverse(study.batched->indexOf("([a],[b])")) == l &&
                    study.appendReverse(study.batched->indexOf("([],[b,a])")) == l;
    sec["appendReverse"] = Json::array({Json::array({"([a],[b])", "[a,b]"}), Json::array({"([],[b,a])", "[a,b]"})});
    report.check("appendReverse identifies ([a],[b]) and ([],[b,a])", ok);
  }
  report.check("empty queues related",
               study.input.relation.holds(study.batched->indexOf("([],[])"), study.lists->indexOf("[]")));

  res.pipeline = runPipeline(study.input, report);

  bool listRaw = true;
  for (const auto& row : res.pipeline.axioms) {
    listRaw = listRaw && row.rawRight.holds;
    if (row.name == "dequeue-enqueue-just" && !row.rawLeft.holds) res.rawCounterexample = row.rawLeft.counterexample;
  }
  report.check("raw list instance satisfies the axioms", listRaw);
  if (res.rawCounterexample) sec["rawCounterexample"] = toJson(*res.rawCounterexample);
  report.check("raw batched instance violates dequeue-enqueue", res.rawCounterexample.has_value(),
               res.rawCounterexample ? res.rawCounterexample->str() : "");

  // the printed instance needs the letter c
  const QueueStudy paper = cfg.alphabet >= 3 && cfg.capacity >= 3
                               ? study
                               : buildQueueStudy({std::max<std::size_t>(cfg.alphabet, 3),
                                                  std::max<std::size_t>(cfg.capacity, 3)});
  const Formula& law = paper.input.axioms[2];
  res.paperInstance = evalAssignment(law, paper.input.signature, paper.input.left, {"c", "([b,a],[])", "([],[b])", "a"},
                                     paper.input.leftObservers);
  auto target = Interp::make(Desc::maybe(Desc::prod(Desc::var(), Desc::constant(paper.letters))), paper.batched);
  auto state = [&](const char* q) {
    return target->render(StructValue::just(
        StructValue::pair(StructValue::point(static_cast<std::uint32_t>(paper.batched->indexOf(q))),
                          StructValue::constant(static_cast<std::uint32_t>(paper.letters->indexOf("a"))))));
  };
  const std::string expectedLhs = state("([],[b,c])");
  const std::string expectedRhs = state("([c],[b])");
  res.paperInstanceMatches = res.paperInstance.guardsHold && !res.paperInstance.conclusionHolds &&
                             res.paperInstance.values.lhs == expectedLhs && res.paperInstance.values.rhs == expectedRhs;
  sec["paperInstance"] = Json{{"alphabet", paper.config.alphabet},
                              {"capacity", paper.config.capacity},
                              {"values", toJson(res.paperInstance.values)},
                              {"expectedLhs", expectedLhs},
                              {"expectedRhs", expectedRhs}};
  report.check("dequeue (enqueue c ([b,a],[])) differs as printed", res.paperInstanceMatches,
               "lhs " + res.paperInstance.values.lhs + ", rhs " + res.paperInstance.values.rhs);

  if (res.pipeline.transfer) {
    const auto& t = *res.pipeline.transfer;
    res.listClassesSingletons = t.induced.right.carrier->size() == study.lists->size();
    report.check("list-side classes are singletons", res.listClassesSingletons,
                 std::to_string(t.induced.right.carrier->size()) + " classes on " +
                     std::to_string(study.lists->size()) + " lists");

    // tilt: (xs ++ [a], ys) ~ (xs, ys ++ [a])
    DisjointSets tilt(study.batched->size());
    for (std::size_t i = 0; i < study.batchedWords.size(); ++i) {
      const auto& [xs, ys] = study.batchedWords[i];
      if (xs.empty()) continue;
      Word front(xs.begin(), xs.end() - 1);
      Word back = ys;
      back.push_back(xs.back());
      const auto j = study.batched->indexOf("(" + renderWord(study.letters, front) + "," +
                                            renderWord(study.letters, back) + ")");
      tilt.unite(i, j);
    }
    const auto classes = tilt.canonicalClasses();
    bool same = true;
    for (std::size_t i = 0; i < classes.size() && same; ++i)
      for (std::size_t j = 0; j < classes.size() && same; ++j)
        same = (classes[i] == classes[j]) == (t.induced.left.map(i) == t.induced.left.map(j));
    res.tiltClosureMatches = same;
    sec["tiltClasses"] = *std::max_element(classes.begin(), classes.end()) + 1;
    report.check("tilt closure equals the kernel of appendReverse", same);
  }
  return res;
}

}  // namespace reprind
