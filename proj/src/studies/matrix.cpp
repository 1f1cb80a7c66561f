#include <map>

#include "reprind/error.hpp"
#include "reprind/structure/action.hpp"
#include "reprind/studies/studies.hpp"
#include "words.hpp"

namespace reprind {

namespace {

using Entries = std::vector<std::uint32_t>;

const char* kAxioms[][2] = {
    {"add-assoc", "(forall ((x X) (y X) (z X)) (= (add x (add y z)) (add (add x y) z)))"},
    {"add-comm", "(forall ((x X) (y X)) (= (add x y) (add y x)))"},
    {"add-unit", "(forall ((x X)) (= (add zero x) x))"},
    {"add-inverse", "(forall ((x X)) (= (add x (neg x)) zero))"},
};

std::string renderMatrix(const Entries& e, std::size_t rows, std::size_t cols) {
  std::string s = "[";
  for (std::size_t i = 0; i < rows; ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < cols; ++j) s += (j ? "," : "") + std::to_string(e[i * cols + j]);
    s += "]";
  }
  return s + "]";
}

// zero, pointwise addition and negation over the given entry lists
StructValue additiveGroup(const std::vector<Entries>& entries, std::size_t k) {
  std::map<Entries, std::uint32_t> index;
  for (std::size_t i = 0; i < entries.size(); ++i) index.emplace(entries[i], static_cast<std::uint32_t>(i));
  const std::size_t cells = entries.front().size();
  std::vector<StructValue> add;
  std::vector<std::uint32_t> neg(entries.size());
  for (std::size_t a = 0; a < entries.size(); ++a) {
    std::vector<std::uint32_t> row(entries.size());
    Entries sum(cells), inv(cells);
    for (std::size_t b = 0; b < entries.size(); ++b) {
      for (std::size_t c = 0; c < cells; ++c) sum[c] = static_cast<std::uint32_t>((entries[a][c] + entries[b][c]) % k);
      row[b] = index.at(sum);
    }
    for (std::size_t c = 0; c < cells; ++c) inv[c] = static_cast<std::uint32_t>((k - entries[a][c]) % k);
    neg[a] = index.at(inv);
    add.push_back(StructValue::codedTable(std::move(row)));
  }
  return StructValue::pair(StructValue::point(index.at(Entries(cells, 0))),
                           StructValue::pair(StructValue::table(std::move(add)), StructValue::codedTable(std::move(neg))));
}

}  // namespace

MatrixStudy buildMatrixStudy(const MatrixStudyConfig& cfg) {
  const std::size_t m = cfg.rows, n = cfg.cols, k = cfg.modulus;
  if (m < 1 || n < 1 || k < 1) throw InputError("matrices: rows, columns and modulus must be at least 1");
  auto finM = makeCarrier("Fin" + std::to_string(m), detail::numberLabels(m));
  auto finN = makeCarrier("Fin" + std::to_string(n), detail::numberLabels(n));
  auto zk = makeCarrier("Z" + std::to_string(k), detail::numberLabels(k));

  // function tables Fin m -> Fin n -> Z/k, in their enumeration order
  auto tables = Interp::make(
      Desc::fun(Desc::constant(finM), Desc::fun(Desc::constant(finN), Desc::constant(zk))), finM);
  tables->requireEnumerable();
  auto fin = makeCarrier("FinMatrix", tables->asCarrier()->labels());
  std::vector<Entries> finEntries;
  for (const auto& t : tables->enumerate()) {
    Entries e;
    for (const auto& row : t.entries())
      for (auto c : row.codes()) e.push_back(c);
    finEntries.push_back(std::move(e));
  }

  // nested vectors, row-major with the first entry most significant
  const std::size_t cells = m * n;
  std::vector<Entries> vecEntries;
  std::vector<std::string> vecLabels;
  for (std::size_t code = 0; code < finEntries.size(); ++code) {
    Entries e(cells);
    for (std::size_t c = cells, rest = code; c-- > 0; rest /= k) e[c] = static_cast<std::uint32_t>(rest % k);
    vecLabels.push_back(renderMatrix(e, m, n));
    vecEntries.push_back(std::move(e));
  }
  auto vec = makeCarrier("VecMatrix", vecLabels);

  std::map<Entries, std::uint32_t> vecIndex;
  for (std::size_t i = 0; i < vecEntries.size(); ++i) vecIndex.emplace(vecEntries[i], static_cast<std::uint32_t>(i));
  std::vector<std::uint32_t> fwd;
  for (const auto& e : finEntries) fwd.push_back(vecIndex.at(e));

  const Desc x = Desc::var();
  const Desc d = Desc::prod(x, Desc::prod(Desc::fun(x, Desc::fun(x, x)), Desc::fun(x, x)));
  Signature sig(d, {{"zero", {0}}, {"add", {1, 0}}, {"neg", {1, 1}}});
  std::vector<Formula> axioms;
  for (const auto& [name, text] : kAxioms) axioms.push_back(parseFormula(text, sig, name));

  StructuredInstance finInstance{fin, d, additiveGroup(finEntries, k)};
  StructuredInstance vecInstance{vec, d, additiveGroup(vecEntries, k)};
  return MatrixStudy{cfg,
                     fin,
                     vec,
                     std::move(finEntries),
                     std::move(vecEntries),
                     std::move(sig),
                     std::move(finInstance),
                     std::move(vecInstance),
                     Bijection::fromForward(FinMap(fin, vec, std::move(fwd))),
                     std::move(axioms)};
}

MatrixStudyResult runMatrixStudy(const MatrixStudyConfig& cfg, Report& report) {
  const MatrixStudy study = buildMatrixStudy(cfg);
  const std::size_t m = cfg.rows, n = cfg.cols, k = cfg.modulus;
  report.params()["rows"] = m;
  report.params()["cols"] = n;
  report.params()["modulus"] = k;
  MatrixStudyResult res;

  const Desc& d = study.signature.desc();
  res.structured = checkStructuredEquiv(d, study.equiv, study.finInstance.value, study.vecInstance.value);
  report.check("fin and vec structures are related by the equivalence", res.structured.holds,
               res.structured.failure ? res.structured.failure->str() : "");

  const StructValue moved = EquivAction(d, study.equiv).apply(study.finInstance.value);
  res.transferredAdditionMatches = moved.second().first() == study.vecInstance.value.second().first();
  report.check("transported addition equals vector addition", res.transferredAdditionMatches);

  std::string transferError;
  try {
    res.transfer = transferAxioms(study.axioms, study.signature, study.equiv, study.finInstance, study.vecInstance);
  } catch (const VerdictFailure& err) {
    transferError = err.what();
  }
  Json& sec = report.section("transfer");
  if (res.transfer) {
    Json rows = Json::array();
    for (const auto& a : res.transfer->axioms)
      rows.push_back(Json{{"name", a.left.axiom}, {"fin", toJson(a.left)}, {"vec", toJson(a.right)}, {"agree", a.agree}});
    sec["axioms"] = std::move(rows);
  } else {
    sec["error"] = transferError;
  }
  report.check("group axioms transfer", res.transfer && res.transfer->passed(), transferError);

  // M + N for M the diagonal and N the antidiagonal; the constant 1 when square of size 2
  std::map<Entries, std::size_t> finIndex;
  for (std::size_t i = 0; i < study.finEntries.size(); ++i) finIndex.emplace(study.finEntries[i], i);
  Entries diag(m * n), anti(m * n), sum(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      diag[i * n + j] = static_cast<std::uint32_t>((i == j) % k);
      anti[i * n + j] = static_cast<std::uint32_t>((i + j + 1 == n) % k);
      sum[i * n + j] = static_cast<std::uint32_t>((diag[i * n + j] + anti[i * n + j]) % k);
    }
  const auto& add = study.finInstance.value.second().first();
  const std::size_t mi = finIndex.at(diag), ni = finIndex.at(anti);
  const std::size_t lhs = add.entries()[mi].codes()[ni];
  res.goal = replaceGoal(study.equiv, lhs, finIndex.at(sum));
  Json& goal = report.section("goal");
  goal["M"] = study.vec->label(study.equiv.forward()(mi));
  goal["N"] = study.vec->label(study.equiv.forward()(ni));
  goal["lhs"] = res.goal.left;
  goal["rhs"] = res.goal.right;
  report.check("addFinMatrix M N decided through the vector side", res.goal.equal,
               res.goal.left + " = " + res.goal.right);

  // distinct matrices: the first differing coordinate is reported
  const GoalResult differ = replaceGoal(study.equiv, mi, ni);
  std::string where;
  for (std::size_t c = 0; c < m * n && where.empty(); ++c)
    if (diag[c] != anti[c])
      where = "(" + std::to_string(c / n) + "," + std::to_string(c % n) + "): " + std::to_string(diag[c]) +
              " vs " + std::to_string(anti[c]);
  goal["mismatch"] = Json{{"left", differ.left}, {"right", differ.right}, {"coordinate", where}};
  report.check("M and N are told apart", differ.equal == (diag == anti), where);
  return res;
}

}  // namespace reprind
