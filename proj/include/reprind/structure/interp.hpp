#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "reprind/finrel/relation.hpp"
#include "reprind/structure/desc.hpp"
#include "reprind/structure/value.hpp"

namespace reprind {

/// Default bound on the number of values `enumerate` and `asCarrier` will
/// materialise.
inline constexpr std::uint64_t kDefaultInterpCap = 100'000;

class Interp;
using InterpPtr = std::shared_ptr<const Interp>;

/// The interpretation of a description at a carrier, with its canonical
/// enumeration order:
///   X           the carrier, in carrier order
///   const(K)    K, in carrier order
///   prod(S,T)   lexicographic, first component most significant
///   maybe(S)    nothing first, then just(s) in S order
///   fun(S,T)    tables over the S enumeration, lexicographic with the
///               first domain value most significant
/// A value's position in this order is its code.
class Interp {
 public:
  static constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

  static InterpPtr make(const Desc& d, CarrierPtr base);

  const Desc& desc() const { return desc_; }
  const CarrierPtr& base() const { return base_; }
  /// Number of values, saturated at kUnbounded.
  std::uint64_t size() const { return size_; }
  bool isPositive() const { return desc_.isPositive(); }

  const Interp& first() const { return *a_; }
  const Interp& second() const { return *b_; }
  const Interp& domain() const { return *a_; }
  const Interp& codomain() const { return *b_; }
  const Interp& inner() const { return *a_; }

  /// Throws CapExceeded naming the description when size() > cap.
  void requireEnumerable(std::uint64_t cap = kDefaultInterpCap) const;

  StructValue decode(std::uint64_t code) const;
  std::uint64_t encode(const StructValue& v) const;
  std::vector<StructValue> enumerate(std::uint64_t cap = kDefaultInterpCap) const;
  /// The enumeration as a carrier whose labels are rendered values.
  CarrierPtr asCarrier(std::uint64_t cap = kDefaultInterpCap) const;

  /// A pseudorandom value; maybe(...) is nothing with probability 1/4.
  StructValue random(std::mt19937_64& rng) const;

  std::string render(const StructValue& v) const;
  /// Throws InputError when v does not have the shape of desc() over base().
  void validate(const StructValue& v) const;
  bool wellShaped(const StructValue& v) const;

  // Function tables (only on fun(...) interpretations).
  std::size_t tableSize() const;
  bool codedTables() const { return desc_.is(Desc::Kind::Fun) && desc_.codomain().isPositive(); }
  StructValue apply(const StructValue& table, const StructValue& arg) const;
  StructValue applyCode(const StructValue& table, std::uint64_t argCode) const;
  /// Builds a table from one entry per domain code, coding entries when
  /// the codomain is positive.
  StructValue makeTable(std::vector<StructValue> entries) const;

 private:
  Interp(Desc d, CarrierPtr base);
  std::string renderChecked(const StructValue& v) const;
  void validateAt(const StructValue& v, const std::string& path) const;

  Desc desc_;
  CarrierPtr base_;
  std::uint64_t size_ = 0;
  InterpPtr a_;
  InterpPtr b_;
};

// Code-level operations on positive interpretations. They never allocate.

/// ρ(R) on codes: `left` is over R's domain, `right` over its codomain.
bool relatesCodes(const Interp& left, const Interp& right, std::uint64_t a, std::uint64_t b, const Rel& r);

/// The covariant action of a positive description on codes, for a map
/// given as a table from src's base to dst's base.
std::uint64_t mapCode(const Interp& src, const Interp& dst, std::uint64_t code,
                      const std::vector<std::uint32_t>& f);

/// As mapCode for a partial map (negative entries are undefined); returns -1
/// when some carrier position is undefined.
std::int64_t partialMapCode(const Interp& src, const Interp& dst, std::uint64_t code,
                            const std::vector<std::int64_t>& f);

/// Saturating arithmetic used for interpretation sizes.
std::uint64_t satMul(std::uint64_t a, std::uint64_t b);
std::uint64_t satPow(std::uint64_t base, std::uint64_t exp);

}  // namespace reprind
