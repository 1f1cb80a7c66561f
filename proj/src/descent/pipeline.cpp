#include "reprind/descent/pipeline.hpp"

#include "reprind/error.hpp"

namespace reprind {

TransferResult structuredQerPipeline(const Desc& d, const StructuredInstance& left, const StructuredInstance& right,
                                     const Rel& r, const DescentConfig& config) {
  if (!(left.desc == d) || !(right.desc == d))
    throw InputError("pipeline: both instances must have the description " + d.str());
  requireSameElements(*left.carrier, *r.dom(), "pipeline: left carrier vs relation domain");
  requireSameElements(*right.carrier, *r.cod(), "pipeline: right carrier vs relation codomain");
  requireAdmissible(d);

  RelLift lift(d, r);
  if (!lift.holds(left.value, right.value)) {
    auto why = lift.explainFailure(left.value, right.value);
    throw VerdictFailure("the relation is not structured: " + (why ? why->str() : std::string("lifted relation fails")));
  }
  auto qer = checkQER(r);
  if (auto* f = std::get_if<QerFailure>(&qer)) throw VerdictFailure("not a QER: " + f->describe(r));
  QerWitness w = std::get<QerWitness>(std::move(qer));
  InducedEquiv ie = inducedEquiv(w);

  DescentResult ld = Descent(d, left.carrier, w.perLeft, config).run(left.value);
  DescentResult rd = Descent(d, right.carrier, w.perRight, config).run(right.value);
  const StructValue& sbar = ld.quotientInstance.value;
  const StructValue& tbar = rd.quotientInstance.value;

  const bool cross = RelLift(d, equivGraph(ie.equiv)).holds(sbar, tbar);
  const bool iota = EquivLift(d, ie.equiv).holds(sbar, tbar);
  const Rel identity = composeRel(composeRel(inverseRel(graphRel(ie.left.map)), r), graphRel(ie.right.map));
  const bool ident = identity == equivGraph(ie.equiv);
  if (!cross || !iota || !ident)
    throw SoundnessError(std::string("pipeline: the induced equivalence does not relate the quotient structures") +
                         (ident ? "" : " (relation identity fails)"));

  TransferResult out{ld.quotientInstance, rd.quotientInstance, std::move(w), std::move(ie), std::move(ld),
                     std::move(rd), true, cross, iota, ident};
  return out;
}

}  // namespace reprind
