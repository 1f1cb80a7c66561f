#pragma once

#include <memory>
#include <optional>
#include <string>

#include "reprind/finrel/relation.hpp"
#include "reprind/structure/desc.hpp"
#include "reprind/structure/interp.hpp"
#include "reprind/structure/lifting.hpp"
#include "reprind/structure/value.hpp"

namespace reprind {

/// S e : S X ≃ S Y for a bijection e : X ≃ Y.
///   X           e
///   const(K)    identity
///   prod, maybe componentwise / map
///   fun(S,T)    g ↦ (T e) ∘ g ∘ (S e⁻¹)
class EquivAction {
 public:
  EquivAction(Desc d, Bijection e);
  ~EquivAction();
  EquivAction(EquivAction&&) noexcept;
  EquivAction& operator=(EquivAction&&) noexcept;

  const Desc& desc() const { return desc_; }
  const Bijection& equiv() const { return equiv_; }
  const Interp& left() const { return *left_; }
  const Interp& right() const { return *right_; }

  StructValue apply(const StructValue& s) const;
  StructValue applyInverse(const StructValue& t) const;
  /// The action as a bijection between the enumerated interpretations.
  Bijection asBijection(std::uint64_t cap = kDefaultInterpCap) const;

  struct Node;

 private:
  Desc desc_;
  Bijection equiv_;
  InterpPtr left_;
  InterpPtr right_;
  std::unique_ptr<Node> root_;
};

/// Covariant action of a positive description on a map; throws InputError
/// for a non-positive P.
FinMap funAction(const Desc& p, const FinMap& f, std::uint64_t cap = kDefaultInterpCap);
StructValue funActionValue(const Desc& p, const FinMap& f, const StructValue& s);

struct RelMapFailure {
  bool alpha = false;  // the carrier-level premise R0 x y ⇒ R1 (f x) (g y) failed
  std::string detail;
};

/// Checks ρ(P,R0) s t ⇒ ρ(P,R1) (P f s) (P g t) for all s, t, after first
/// checking the premise on carriers.
std::optional<RelMapFailure> relMapWitness(const Desc& p, const FinMap& f, const FinMap& g, const Rel& r0,
                                           const Rel& r1, std::uint64_t cap = kDefaultInterpCap);

/// f ~ g iff for every s, ι(T,e) (f s) (g (P e s)).
class FunctionEquivStrPlus {
 public:
  FunctionEquivStrPlus(const Desc& funDesc, const Bijection& e, std::uint64_t cap = kDefaultInterpCap);
  bool operator()(const StructValue& f, const StructValue& g) const;

 private:
  EquivAction domainAction_;
  EquivLift codomainLift_;
  InterpPtr left_;
  InterpPtr right_;
  std::vector<std::uint64_t> image_;  // left domain code ↦ right domain code of its image
};

/// s ~ t iff map-Maybe (D e) s = t.
class MaybeEquivStrPrime {
 public:
  MaybeEquivStrPrime(const Desc& maybeDesc, const Bijection& e);
  bool operator()(const StructValue& s, const StructValue& t) const;

 private:
  EquivAction action_;
};

bool functionEquivStrPlus(const Desc& funDesc, const Bijection& e, const StructValue& f, const StructValue& g);
bool maybeEquivStrPrime(const Desc& maybeDesc, const Bijection& e, const StructValue& s, const StructValue& t);

}  // namespace reprind
