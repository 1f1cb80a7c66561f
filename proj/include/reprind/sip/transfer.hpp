#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "reprind/finrel/quotient.hpp"
#include "reprind/sip/formula.hpp"
#include "reprind/structure/instance.hpp"
#include "reprind/structure/lifting.hpp"

namespace reprind {

struct AxiomCounterexample {
  std::vector<std::pair<std::string, std::string>> assignment;  // binder ↦ rendered value
  std::string lhs;
  std::string rhs;

  std::string str() const;
};

struct AxiomResult {
  std::string axiom;
  bool holds = true;
  std::uint64_t assignments = 0;  // visited before stopping
  std::uint64_t guarded = 0;      // of those, satisfying every guard
  std::optional<AxiomCounterexample> counterexample;
};

/// Decides F on the instance by enumerating assignments in lexicographic
/// order (first binder most significant) and stops at the first violation,
/// which is therefore the least one.
AxiomResult evalAxiom(const Formula& f, const Signature& sig, const StructuredInstance& inst,
                      const Observers& observers = {});

/// One assignment, given by binder labels in binder order.
struct AssignmentResult {
  bool guardsHold = false;
  bool conclusionHolds = false;
  AxiomCounterexample values;  // the assignment and both conclusion sides
};

AssignmentResult evalAssignment(const Formula& f, const Signature& sig, const StructuredInstance& inst,
                                const std::vector<std::string>& labels, const Observers& observers = {});

struct EquivCheck {
  bool holds = false;
  std::optional<LiftFailure> failure;
};

/// ι(D, e)(s, t). Throws InputError when s or t is not shaped like D over
/// the respective side of e.
EquivCheck checkStructuredEquiv(const Desc& d, const Bijection& e, const StructValue& s, const StructValue& t);

/// observer ∘ e⁻¹ for observers out of the carrier; the rest unchanged.
Observers transportObservers(const Signature& sig, const Observers& observers, const Bijection& e);

/// Observers on X/E from observers on X; throws VerdictFailure when one of
/// them separates two E-related elements.
Observers quotientObservers(const Signature& sig, const Observers& observers, const Quotient& q);

struct AxiomTransfer {
  AxiomResult left;
  AxiomResult right;
  bool agree = false;
};

struct TransferReport {
  bool structuredEquiv = false;
  std::vector<AxiomTransfer> axioms;
  bool passed() const;
};

/// Checks ι(D, e) between the two instances, then evaluates every axiom on
/// both sides; the right side uses the transported observers unless
/// `rightObservers` is given. Throws VerdictFailure when ι fails, when an
/// axiom fails on the left, or when one fails on the right.
TransferReport transferAxioms(const std::vector<Formula>& axioms, const Signature& sig, const Bijection& e,
                              const StructuredInstance& left, const StructuredInstance& right,
                              const Observers& leftObservers = {},
                              const std::optional<Observers>& rightObservers = std::nullopt);

struct GoalResult {
  bool equal = false;
  std::string left;   // e(x1)
  std::string right;  // e(x2)
};

/// Decides x1 = x2 by comparing images under e.
GoalResult replaceGoal(const Bijection& e, std::size_t x1, std::size_t x2);

}  // namespace reprind
