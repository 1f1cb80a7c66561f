#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "reprind/finrel/relation.hpp"
#include "reprind/structure/desc.hpp"

namespace reprind {

/// A named operation: a projection path through the prod(...) spine of the
/// description (0 = first component, 1 = second).
struct Operation {
  std::string name;
  std::vector<int> path;
  Desc type;
};

/// An auxiliary map out of the carrier (or out of a constant carrier).
struct ObserverSig {
  std::string name;
  Desc domain;  // X or const(K)
  CarrierPtr codomain;
};

using Observers = std::map<std::string, FinMap, std::less<>>;

class Signature {
 public:
  Signature() = default;
  Signature(Desc d, const std::vector<std::pair<std::string, std::vector<int>>>& operations,
            ConstantTable constants = {}, std::vector<ObserverSig> observers = {});

  const Desc& desc() const { return desc_; }
  const std::vector<Operation>& operations() const { return ops_; }
  const std::vector<ObserverSig>& observers() const { return observers_; }
  /// Constant carriers, including the observer codomains.
  const ConstantTable& constants() const { return constants_; }

  const Operation* findOperation(std::string_view name) const;
  const ObserverSig* findObserver(std::string_view name) const;

 private:
  Desc desc_;
  std::vector<Operation> ops_;
  ConstantTable constants_;
  std::vector<ObserverSig> observers_;
};

/// The component of `d` selected by `path`; throws InputError when the path
/// leaves the prod(...) spine.
const Desc& componentAt(const Desc& d, const std::vector<int>& path);

struct Term {
  enum class Kind { Var, Lit, Op, Observer, Nothing, Just, Pair };
  Kind kind = Kind::Var;
  std::string name;        // variable, operation, observer or literal label
  std::size_t index = 0;   // variable slot, operation index or literal index
  CarrierPtr carrier;      // literal carrier
  std::vector<Term> args;
  Desc type;

  std::string str() const;
};

struct Equation {
  bool negated = false;
  Term lhs;
  Term rhs;

  std::string str() const;
};

struct Binder {
  std::string name;
  Desc sort;  // X or const(K)
};

/// ∀ binders. guards ⇒ conclusion, with guards and conclusion (negated)
/// equations between terms of the same type.
struct Formula {
  std::string name;
  std::vector<Binder> binders;
  std::vector<Equation> guards;
  Equation conclusion;
  bool usesObservers = false;

  /// Concrete syntax; parseFormula(str()) yields an equal formula.
  std::string str() const;
};

/// Prefix S-expression syntax:
///
///   formula := (forall ((v sort) ...) body) | body
///   body    := (= t t) | (=> (guard ...) (= t t))
///   guard   := (= t t) | (!= t t)
///   term    := v | op | nothing | label | (lit K label)
///            | (op t ...) | (observer t) | (just t) | (pair t t)
///
/// A sort is X or a constant name. A bare label must be unambiguous among
/// the constant carriers, or be determined by the other side of its equation.
Formula parseFormula(std::string_view text, const Signature& sig, std::string name = {});

}  // namespace reprind
