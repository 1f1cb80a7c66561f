#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reprind/finrel/relation.hpp"
#include "reprind/structure/desc.hpp"
#include "reprind/structure/interp.hpp"
#include "reprind/structure/value.hpp"

namespace reprind {

/// Where and why a lifted relation fails to hold between two values.
struct LiftFailure {
  std::string path;    // component path, e.g. "/1/0 @ a / x2"
  std::string detail;  // the failing leaf comparison
  std::string str() const { return path + ": " + detail; }
};

/// Throws InputError naming the first fun(...) whose domain is not positive.
void requireAdmissible(const Desc& d);

/// The structured relation ρ(D, R) between interpret(D, dom R) and
/// interpret(D, cod R):
///   X           R
///   const(K)    equality
///   prod(S,T)   componentwise conjunction
///   maybe(S)    nothing/nothing, or just/just with ρ(S, R)
///   fun(P,T)    f ~ g iff ρ(P,R) p p' implies ρ(T,R) (f p) (g p')
/// D must be admissible.
///
/// Two evaluation routes exist. `Definition` evaluates the clauses above.
/// `Blocks` needs a zigzag-complete R: each value is mapped to its block
/// signature, a value over the carrier of R's blocks, and two values are
/// related iff both signatures exist and coincide. `Auto` picks `Blocks`
/// whenever R is zigzag-complete.
class RelLift {
 public:
  enum class Route { Auto, Definition, Blocks };

  RelLift(Desc d, Rel r, Route route = Route::Auto);
  ~RelLift();
  RelLift(RelLift&&) noexcept;
  RelLift& operator=(RelLift&&) noexcept;

  const Desc& desc() const { return desc_; }
  const Rel& rel() const { return rel_; }
  Route route() const { return route_; }
  const Interp& left() const { return *left_; }
  const Interp& right() const { return *right_; }
  const InterpPtr& leftPtr() const { return left_; }
  const InterpPtr& rightPtr() const { return right_; }

  bool holds(const StructValue& s, const StructValue& t) const;
  /// Definition-route search for the first failing clause.
  std::optional<LiftFailure> explainFailure(const StructValue& s, const StructValue& t) const;
  /// ρ(D, R) as a relation over the two interpretation carriers.
  Rel table(std::uint64_t cap = kDefaultInterpCap) const;

  /// Definition route only: number of t with ρ(D,R)(c, t) for every
  /// constraint c, saturated at Interp::kUnbounded.
  std::uint64_t countCandidates(const std::vector<const StructValue*>& constraints) const;
  /// Definition route only: some t related to every constraint, if any.
  std::optional<StructValue> sampleRelated(const std::vector<const StructValue*>& constraints,
                                           std::mt19937_64& rng) const;

  // Evaluation nodes, defined in the implementation file.
  struct DefNode;
  struct BlockNode;
  struct BlockData;

 private:

  Desc desc_;
  Rel rel_;
  Route route_;
  InterpPtr left_;
  InterpPtr right_;
  std::unique_ptr<DefNode> def_;
  std::unique_ptr<BlockData> blocks_;
};

/// The structured equivalence ι(D, e) between interpret(D, dom e) and
/// interpret(D, cod e), defined clause by clause from the bijection:
///   X           e(x) = y
///   const(K)    equality
///   prod(S,T)   componentwise
///   maybe(S)    nothing/nothing, or just/just with ι(S, e)
///   fun(S,T)    f ~ g iff ι(S,e) s t implies ι(T,e) (f s) (g t)
/// Any description is accepted; function domains are enumerated.
class EquivLift {
 public:
  EquivLift(Desc d, Bijection e, std::uint64_t cap = kDefaultInterpCap);
  ~EquivLift();
  EquivLift(EquivLift&&) noexcept;
  EquivLift& operator=(EquivLift&&) noexcept;

  const Desc& desc() const { return desc_; }
  const Bijection& equiv() const { return equiv_; }
  const Interp& left() const { return *left_; }
  const Interp& right() const { return *right_; }

  bool holds(const StructValue& s, const StructValue& t) const;
  std::optional<LiftFailure> explainFailure(const StructValue& s, const StructValue& t) const;
  Rel table(std::uint64_t cap = kDefaultInterpCap) const;

  struct Node;

 private:
  Desc desc_;
  Bijection equiv_;
  InterpPtr left_;
  InterpPtr right_;
  std::unique_ptr<Node> root_;
};

}  // namespace reprind
