#pragma once

#include "reprind/descent/descent.hpp"

namespace reprind {

/// Both quotient structures and the induced equivalence between them for a
/// structured QER.
struct TransferResult {
  StructuredInstance leftQuotient;
  StructuredInstance rightQuotient;
  QerWitness witness;
  InducedEquiv induced;
  DescentResult leftDescent;
  DescentResult rightDescent;
  bool structuredChecked = false;
  /// ρ(graph e) relates the two descended structures.
  bool crossWitnessChecked = false;
  /// ι(e) relates them as well.
  bool equivLiftChecked = false;
  /// graph(left quotient map)⁻¹ · R · graph(right quotient map) = graph e.
  bool relationIdentityChecked = false;

  const Bijection& equiv() const { return induced.equiv; }
};

/// Throws VerdictFailure when the instances are not related by the lifted
/// relation or R is not a QER; descent failures propagate.
TransferResult structuredQerPipeline(const Desc& d, const StructuredInstance& left, const StructuredInstance& right,
                                     const Rel& r, const DescentConfig& config = {});

}  // namespace reprind
