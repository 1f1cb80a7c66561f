#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reprind/descent/pipeline.hpp"
#include "reprind/sip/transfer.hpp"
#include "reprind/studies/report.hpp"

namespace reprind {

/// Everything a relational pipeline run needs; built by a study or loaded
/// from a spec file.
struct PipelineInput {
  Signature signature;
  StructuredInstance left;
  StructuredInstance right;
  Rel relation{makeCarrier("", {}), makeCarrier("", {})};  // from left.carrier to right.carrier
  std::vector<Formula> axioms;
  Observers leftObservers;
  Observers rightObservers;
  /// "left", "right" or "auto" (the first side whose quotient satisfies
  /// every axiom).
  std::string transferFrom = "auto";
  DescentConfig descent;
};

struct AxiomRow {
  std::string name;
  AxiomResult rawLeft;
  AxiomResult rawRight;
  std::optional<AxiomResult> quotientLeft;
  std::optional<AxiomResult> quotientRight;
};

struct PipelineOutcome {
  bool structured = false;
  std::optional<LiftFailure> structuredFailure;
  std::optional<QerWitness> qer;
  std::optional<QerFailure> qerFailure;
  std::optional<TransferResult> transfer;
  Observers leftQuotientObservers;
  Observers rightQuotientObservers;
  std::vector<AxiomRow> axioms;
  std::string transferDirection;  // "left->right" / "right->left", empty if none
  std::optional<TransferReport> axiomTransfer;
  std::string transferError;
};

/// Structured-relation and QER checks only (the qer-check command). Adds a
/// "relation" section and two verdicts.
PipelineOutcome checkRelation(const PipelineInput& in, Report& report);

/// The full run: relation checks, both quotients with descent witnesses,
/// the induced equivalence, axioms raw and quotiented, and axiom transfer.
/// Adds "relation", "quotients", "descent", "equivalence", "axioms" and
/// "transfer" sections.
PipelineOutcome runPipeline(const PipelineInput& in, Report& report);

/// Labels of the members of each class, for small carriers.
Json classesJson(const Quotient& q, std::size_t cap = 256);

}  // namespace reprind
