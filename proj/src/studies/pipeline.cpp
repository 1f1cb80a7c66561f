#include "reprind/studies/pipeline.hpp"

#include "reprind/error.hpp"

namespace reprind {

namespace {

constexpr std::size_t kTableCap = 256;

Json descentJson(const DescentResult& d) {
  Json j{{"graphWitness", d.graphWitnessChecked},
         {"uniqueness", methodName(d.uniqueness)},
         {"candidates", d.candidates}};
  if (d.factorisationAgrees) j["factorisationAgrees"] = *d.factorisationAgrees;
  Json trace = Json::array();
  for (const auto& t : d.representativeTrace) {
    Json choices = Json::array();
    for (const auto& [cls, rep] : t.choices) choices.push_back(Json::array({cls, rep}));
    trace.push_back(Json{{"path", t.path}, {"desc", t.desc}, {"classes", t.classes}, {"choices", choices}});
  }
  j["representatives"] = std::move(trace);
  return j;
}

bool allHold(const std::vector<AxiomRow>& rows, bool left) {
  for (const auto& r : rows) {
    const auto& q = left ? r.quotientLeft : r.quotientRight;
    if (!q || !q->holds) return false;
  }
  return true;
}

}  // namespace

Json classesJson(const Quotient& q, std::size_t cap) {
  if (q.map.dom()->size() > cap) return nullptr;
  Json out = Json::array();
  for (const auto& members : q.partition.members()) {
    Json c = Json::array();
    for (auto m : members) c.push_back(q.map.dom()->label(m));
    out.push_back(std::move(c));
  }
  return out;
}

PipelineOutcome checkRelation(const PipelineInput& in, Report& report) {
  const Desc& d = in.signature.desc();
  requireSameElements(*in.relation.dom(), *in.left.carrier, "relation domain vs left carrier");
  requireSameElements(*in.relation.cod(), *in.right.carrier, "relation codomain vs right carrier");
  Interp::make(d, in.left.carrier)->validate(in.left.value);
  Interp::make(d, in.right.carrier)->validate(in.right.value);

  PipelineOutcome out;
  Json& sec = report.section("relation");
  RelLift lift(d, in.relation);
  out.structured = lift.holds(in.left.value, in.right.value);
  sec["structured"] = Json{{"pass", out.structured}};
  if (!out.structured) {
    out.structuredFailure = RelLift(d, in.relation, RelLift::Route::Definition)
                                .explainFailure(in.left.value, in.right.value);
    if (out.structuredFailure) sec["structured"]["failure"] = out.structuredFailure->str();
  }
  report.check("structured relation", out.structured, out.structuredFailure ? out.structuredFailure->str() : "");

  auto qer = checkQER(in.relation);
  if (auto* w = std::get_if<QerWitness>(&qer)) {
    out.qer = *w;
    sec["qer"] = Json{{"pass", true}};
    report.check("QER", true);
  } else {
    const auto& f = std::get<QerFailure>(qer);
    out.qerFailure = f;
    Json j{{"pass", false}, {"detail", f.describe(in.relation)}};
    if (f.zigzag) {
      const auto& z = *f.zigzag;
      j["quadruple"] = Json::array({in.relation.dom()->label(z.x), in.relation.cod()->label(z.y),
                                    in.relation.dom()->label(z.x2), in.relation.cod()->label(z.y2)});
    }
    sec["qer"] = std::move(j);
    report.check("QER", false, f.describe(in.relation));
  }
  return out;
}

PipelineOutcome runPipeline(const PipelineInput& in, Report& report) {
  PipelineOutcome out = checkRelation(in, report);
  if (!out.structured || !out.qer) return out;
  const Signature& sig = in.signature;

  out.transfer = structuredQerPipeline(sig.desc(), in.left, in.right, in.relation, in.descent);
  const TransferResult& t = *out.transfer;

  Json& quotients = report.section("quotients");
  quotients["left"] = Json{{"size", t.leftQuotient.carrier->size()}, {"classes", classesJson(t.induced.left, kTableCap)}};
  quotients["right"] = Json{{"size", t.rightQuotient.carrier->size()},
                            {"classes", classesJson(t.induced.right, kTableCap)}};

  Json& descent = report.section("descent");
  descent["left"] = descentJson(t.leftDescent);
  descent["right"] = descentJson(t.rightDescent);
  report.check("left descent", t.leftDescent.graphWitnessChecked && t.leftDescent.candidates == 1,
               std::string(methodName(t.leftDescent.uniqueness)));
  report.check("right descent", t.rightDescent.graphWitnessChecked && t.rightDescent.candidates == 1,
               std::string(methodName(t.rightDescent.uniqueness)));

  Json& equiv = report.section("equivalence");
  equiv["crossWitness"] = t.crossWitnessChecked;
  equiv["equivLift"] = t.equivLiftChecked;
  equiv["relationIdentity"] = t.relationIdentityChecked;
  const Bijection& e = t.equiv();
  if (e.dom()->size() <= kTableCap) {
    Json table = Json::array();
    for (std::size_t c = 0; c < e.dom()->size(); ++c)
      table.push_back(Json::array({e.dom()->label(c), e.cod()->label(e.forward()(c))}));
    equiv["table"] = std::move(table);
  }
  report.check("induced equivalence", t.crossWitnessChecked && t.equivLiftChecked && t.relationIdentityChecked);

  std::string observerError;
  try {
    out.leftQuotientObservers = quotientObservers(sig, in.leftObservers, t.induced.left);
    out.rightQuotientObservers = quotientObservers(sig, in.rightObservers, t.induced.right);
  } catch (const VerdictFailure& err) {
    observerError = err.what();
  }
  if (!in.leftObservers.empty() || !in.rightObservers.empty())
    report.check("observers respect the quotients", observerError.empty(), observerError);

  Json& axioms = report.section("axioms");
  axioms = Json::array();
  for (const auto& f : in.axioms) {
    AxiomRow row{f.name, evalAxiom(f, sig, in.left, in.leftObservers), evalAxiom(f, sig, in.right, in.rightObservers),
                 std::nullopt, std::nullopt};
    Json j{{"name", f.name}, {"formula", f.str()}, {"rawLeft", toJson(row.rawLeft)}, {"rawRight", toJson(row.rawRight)}};
    if (observerError.empty() || !f.usesObservers) {
      row.quotientLeft = evalAxiom(f, sig, t.leftQuotient, out.leftQuotientObservers);
      row.quotientRight = evalAxiom(f, sig, t.rightQuotient, out.rightQuotientObservers);
      j["quotientLeft"] = toJson(*row.quotientLeft);
      j["quotientRight"] = toJson(*row.quotientRight);
    }
    const bool ok = row.quotientLeft && row.quotientLeft->holds && row.quotientRight && row.quotientRight->holds;
    std::string detail;
    if (row.quotientLeft && !row.quotientLeft->holds) detail = "left: " + row.quotientLeft->counterexample->str();
    if (row.quotientRight && !row.quotientRight->holds) detail = "right: " + row.quotientRight->counterexample->str();
    report.check("axiom " + f.name + " on quotients", ok, detail);
    axioms.push_back(std::move(j));
    out.axioms.push_back(std::move(row));
  }

  if (in.axioms.empty()) return out;
  Json& transfer = report.section("transfer");
  bool fromLeft = in.transferFrom == "left";
  if (in.transferFrom == "auto") {
    if (allHold(out.axioms, true))
      fromLeft = true;
    else if (allHold(out.axioms, false))
      fromLeft = false;
    else {
      transfer["error"] = "no quotient satisfies every axiom";
      report.check("axiom transfer", false, "no quotient satisfies every axiom");
      return out;
    }
  }
  out.transferDirection = fromLeft ? "left->right" : "right->left";
  transfer["direction"] = out.transferDirection;
  try {
    out.axiomTransfer = fromLeft ? transferAxioms(in.axioms, sig, e, t.leftQuotient, t.rightQuotient,
                                                  out.leftQuotientObservers, out.rightQuotientObservers)
                                 : transferAxioms(in.axioms, sig, e.inverse(), t.rightQuotient, t.leftQuotient,
                                                  out.rightQuotientObservers, out.leftQuotientObservers);
  } catch (const VerdictFailure& err) {
    out.transferError = err.what();
  }
  if (out.axiomTransfer) {
    transfer["structuredEquiv"] = out.axiomTransfer->structuredEquiv;
    Json rows = Json::array();
    for (const auto& a : out.axiomTransfer->axioms)
      rows.push_back(Json{{"name", a.left.axiom}, {"source", a.left.holds}, {"target", a.right.holds}, {"agree", a.agree}});
    transfer["axioms"] = std::move(rows);
  } else {
    transfer["error"] = out.transferError;
  }
  report.check("axiom transfer", out.axiomTransfer && out.axiomTransfer->passed(), out.transferError);
  return out;
}

}  // namespace reprind
