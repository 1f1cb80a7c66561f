#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reprind/finrel/quotient.hpp"
#include "reprind/structure/instance.hpp"
#include "reprind/structure/interp.hpp"
#include "reprind/structure/lifting.hpp"

namespace reprind {

struct DescentConfig {
  /// Uniqueness is checked by scanning interpret(D, X/E) when it has at most
  /// this many values; above it the candidates are counted factor by factor.
  std::uint64_t scanCap = 20'000;
  /// Replace the exact uniqueness check by random candidates when the scan
  /// cap is exceeded.
  bool sampledUniqueness = false;
  std::size_t uniquenessSamples = 2'000;
  std::uint64_t seed = 1;
};

enum class UniquenessMethod { FullScan, FactorisedCount, Sampled };
const char* methodName(UniquenessMethod m);

/// Chosen preimages for one fun(...) node of the description.
struct RepresentativeTrace {
  std::string path;
  std::string desc;
  std::size_t classes = 0;
  /// (quotient domain value, chosen representative), first entries only.
  std::vector<std::pair<std::string, std::string>> choices;
};

struct DescentResult {
  StructuredInstance quotientInstance;
  bool graphWitnessChecked = false;
  UniquenessMethod uniqueness = UniquenessMethod::FullScan;
  /// Number of related candidates found; 1 unless uniqueness was sampled.
  std::uint64_t candidates = 0;
  /// For a top-level fun(P,T): whether the value built through the quotient
  /// condition map, with the greatest class members as representatives,
  /// agrees with the descended one.
  std::optional<bool> factorisationAgrees;
  std::vector<RepresentativeTrace> representativeTrace;
};

/// Descent of structures along the quotient X → X/E for a fixed admissible
/// description. Precomputes the representative tables once.
class Descent {
 public:
  Descent(Desc d, CarrierPtr x, const Rel& e, DescentConfig config = {});
  ~Descent();
  Descent(Descent&&) noexcept;
  Descent& operator=(Descent&&) noexcept;

  const Quotient& quotient() const { return quotient_; }
  const Interp& source() const { return *source_; }
  const Interp& target() const { return *target_; }

  /// Throws VerdictFailure when s is not related to itself by ρ(D, E), and
  /// SoundnessError when existence or uniqueness fails.
  DescentResult run(const StructValue& s) const;
  /// The descended value only, without the witness and uniqueness checks.
  StructValue descendValue(const StructValue& s) const;

  struct Node;

 private:
  Desc desc_;
  CarrierPtr base_;
  Rel equiv_;
  DescentConfig config_;
  Quotient quotient_;
  InterpPtr source_;
  InterpPtr target_;
  std::unique_ptr<Node> root_;
  std::vector<RepresentativeTrace> trace_;
  RelLift self_;
  RelLift graph_;
  std::unique_ptr<RelLift> graphDef_;
  bool altChecked_ = false;
  bool altBijective_ = false;
  std::vector<std::uint32_t> altRep_;
};

DescentResult descend(const Desc& d, const CarrierPtr& x, const Rel& e, const StructValue& s,
                      const DescentConfig& config = {});

/// interpret(P,X) / ρ(P,E) → interpret(P, X/E), induced by the action of
/// the quotient map.
struct QuotientConditionMap {
  Quotient liftedQuotient;  // of interpret(P, X) by ρ(P, E)
  FinMap map;               // its classes ↦ interpret(P, X/E)
  bool bijective = false;
};

QuotientConditionMap quotientConditionMap(const Desc& p, const CarrierPtr& x, const Rel& e,
                                          std::uint64_t cap = kDefaultInterpCap);

}  // namespace reprind
