#include <set>

#include "reprind/error.hpp"
#include "reprind/finrel/quotient.hpp"
#include "reprind/studies/studies.hpp"

namespace reprind {

namespace {

constexpr std::uint64_t kMaxInput = 25;

CostValue tailLoop(std::uint64_t k, std::uint64_t a, std::uint64_t b) {
  if (k == 0) return costReturn(b);
  return costBind(costReturn(a + b), [&](std::uint64_t c) { return tailLoop(k - 1, b, c); });
}

}  // namespace

CostValue costReturn(std::uint64_t v) { return CostValue{v, 0}; }

CostValue fib(std::uint64_t n) {
  if (n < 2) return costReturn(n);
  return costBind(fib(n - 1), [&](std::uint64_t a) {
    return costBind(fib(n - 2), [&](std::uint64_t b) { return costReturn(a + b); });
  });
}

CostValue fibTail(std::uint64_t n) {
  if (n == 0) return costReturn(0);
  return tailLoop(n - 1, 0, 1);
}

CostStudyResult runCostStudy(std::uint64_t maxInput, Report& report) {
  if (maxInput > kMaxInput)
    throw InputError("cost: max input " + std::to_string(maxInput) + " exceeds " + std::to_string(kMaxInput));
  report.params()["maxInput"] = maxInput;
  CostStudyResult res;
  std::set<std::uint64_t> costs;
  for (std::uint64_t n = 0; n <= maxInput; ++n) {
    res.rows.emplace_back(fib(n), fibTail(n));
    costs.insert(res.rows.back().first.cost);
    costs.insert(res.rows.back().second.cost);
  }

  // the cost component quotiented by the total relation
  std::vector<std::string> labels;
  for (auto c : costs) labels.push_back(std::to_string(c));
  auto carrier = makeCarrier("Cost", labels);
  const Quotient q = quotient(carrier, Rel::total(carrier, carrier));
  auto cls = [&](std::uint64_t c) { return q.map(carrier->indexOf(std::to_string(c))); };

  Json rows = Json::array();
  res.quotientAgrees = true;
  for (std::uint64_t n = 0; n <= maxInput; ++n) {
    const auto& [f, t] = res.rows[n];
    res.rawDiffer = res.rawDiffer || f.cost != t.cost;
    res.quotientAgrees = res.quotientAgrees && f.value == t.value && cls(f.cost) == cls(t.cost);
    rows.push_back(Json{{"n", n}, {"fib", Json::array({f.value, f.cost})}, {"fibTail", Json::array({t.value, t.cost})}});
  }
  report.section("rows") = std::move(rows);
  report.section("quotient")["classes"] = q.carrier->size();

  bool recurrence = true;
  for (std::uint64_t n = 2; n <= maxInput; ++n)
    recurrence = recurrence && res.rows[n].first.cost == res.rows[n - 1].first.cost + res.rows[n - 2].first.cost + 2;
  report.check("fib cost follows C(n) = C(n-1) + C(n-2) + 2", recurrence);
  bool linear = true;
  for (std::uint64_t n = 1; n <= maxInput; ++n) linear = linear && res.rows[n].second.cost == n - 1;
  report.check("fibTail cost is n - 1", linear);
  report.check("raw costs differ", res.rawDiffer || maxInput < 3);
  report.check("equal after quotienting costs", res.quotientAgrees);
  if (maxInput >= 20) {
    const auto& [f, t] = res.rows[20];
    report.check("fib 20 = (6765, 21890), fibTail 20 = (6765, 19)",
                 f == CostValue{6765, 21890} && t == CostValue{6765, 19},
                 "(" + std::to_string(f.value) + ", " + std::to_string(f.cost) + "), (" + std::to_string(t.value) +
                     ", " + std::to_string(t.cost) + ")");
  }
  return res;
}

}  // namespace reprind
