#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reprind/finrel/relation.hpp"

namespace reprind {

/// Which law of an equivalence relation fails, with the least witness.
struct EquivalenceViolation {
  enum class Law { Reflexivity, Symmetry, Transitivity };
  Law law;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  std::string describe(const Carrier& c) const;
};

/// First violated law in the order reflexivity, symmetry, transitivity.
std::optional<EquivalenceViolation> checkEquivalence(const Rel& e);
bool isEquivalence(const Rel& e);
/// Symmetric and transitive (no reflexivity requirement).
bool isPer(const Rel& e);

/// R x y, R x' y, R x' y' but not R x y'.
struct ZigzagCounterexample {
  std::size_t x, y, x2, y2;
  friend bool operator==(const ZigzagCounterexample&, const ZigzagCounterexample&) = default;
};

/// Lexicographically least violating quadruple, or nothing when R is
/// zigzag-complete.
std::optional<ZigzagCounterexample> findZigzagViolation(const Rel& r);
bool isZigzagComplete(const Rel& r);

/// A set partition with canonical least-index representatives.
class Partition {
 public:
  explicit Partition(CarrierPtr base, std::vector<std::uint32_t> classOf);

  const CarrierPtr& base() const { return base_; }
  std::size_t classCount() const { return representatives_.size(); }
  std::uint32_t classOf(std::size_t x) const { return classOf_[x]; }
  std::uint32_t representative(std::size_t c) const { return representatives_[c]; }
  const std::vector<std::uint32_t>& representatives() const { return representatives_; }
  std::vector<std::vector<std::uint32_t>> members() const;

 private:
  CarrierPtr base_;
  std::vector<std::uint32_t> classOf_;
  std::vector<std::uint32_t> representatives_;
};

struct Quotient {
  CarrierPtr carrier;  // classes, labelled "[<representative label>]"
  FinMap map;          // x ↦ [x]
  Partition partition;
};

/// Set quotient of X by an equivalence relation; throws InputError describing
/// the failing law when `e` is not one.
Quotient quotient(const CarrierPtr& x, const Rel& e);

/// A relation together with the data establishing it is a QER.
struct QerWitness {
  Rel rel;
  FinMap choiceLR;  // x ↦ least y with R x y
  FinMap choiceRL;  // y ↦ least x with R x y
  Rel perLeft;      // R · R⁻¹
  Rel perRight;     // R⁻¹ · R
};

struct QerFailure {
  enum class Kind { Zigzag, UntotalLeft, UntotalRight };
  Kind kind;
  std::optional<ZigzagCounterexample> zigzag;
  std::size_t element = 0;  // the untotal element, for the two totality kinds

  std::string describe(const Rel& r) const;
};

using QerCheck = std::variant<QerWitness, QerFailure>;

/// Zigzag completeness first, then left totality, then right totality.
QerCheck checkQER(const Rel& r);

/// The bijection X/R← ≃ Y/R→ induced by a QER, with both quotients.
struct InducedEquiv {
  Quotient left;
  Quotient right;
  Bijection equiv;
};

/// Builds the induced bijection and verifies well-definedness, both
/// cancellation laws and e[x] = [y] ⟺ R x y. A failed verification throws
/// SoundnessError.
InducedEquiv inducedEquiv(const QerWitness& w);

/// Union-find over 0..n-1, used to build generated equivalences.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t x, std::size_t y);
  /// Class index per element, classes numbered by least member.
  std::vector<std::uint32_t> canonicalClasses();

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

}  // namespace reprind
