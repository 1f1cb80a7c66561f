#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reprind/finrel/carrier.hpp"

namespace reprind {

/// A prop-valued relation between two finite carriers, stored as a dense
/// bit matrix with one row per domain element.
class Rel {
 public:
  Rel(CarrierPtr dom, CarrierPtr cod);

  template <class Pred>
  static Rel fromPredicate(CarrierPtr dom, CarrierPtr cod, Pred&& pred) {
    Rel r(std::move(dom), std::move(cod));
    for (std::size_t x = 0; x < r.domSize(); ++x)
      for (std::size_t y = 0; y < r.codSize(); ++y)
        if (pred(x, y)) r.set(x, y);
    return r;
  }
  static Rel fromPairs(CarrierPtr dom, CarrierPtr cod,
                       std::span<const std::pair<std::size_t, std::size_t>> pairs);
  static Rel total(CarrierPtr dom, CarrierPtr cod);

  const CarrierPtr& dom() const { return dom_; }
  const CarrierPtr& cod() const { return cod_; }
  std::size_t domSize() const { return dom_->size(); }
  std::size_t codSize() const { return cod_->size(); }

  bool holds(std::size_t x, std::size_t y) const {
    return (bits_[x * words_ + (y >> 6)] >> (y & 63)) & 1U;
  }
  void set(std::size_t x, std::size_t y, bool value = true);

  std::size_t wordsPerRow() const { return words_; }
  std::span<const std::uint64_t> row(std::size_t x) const {
    return {bits_.data() + x * words_, words_};
  }
  std::span<std::uint64_t> mutableRow(std::size_t x) { return {bits_.data() + x * words_, words_}; }

  std::size_t count() const;
  std::size_t rowCount(std::size_t x) const;
  std::optional<std::size_t> firstInRow(std::size_t x) const;
  std::optional<std::size_t> firstInColumn(std::size_t y) const;
  /// Calls f(y) for every y related to x, in increasing order.
  void forEachInRow(std::size_t x, const std::function<void(std::size_t)>& f) const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;

  bool isSubsetOf(const Rel& other) const;
  friend bool operator==(const Rel& a, const Rel& b);

 private:
  CarrierPtr dom_;
  CarrierPtr cod_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

/// A total function between finite carriers.
class FinMap {
 public:
  FinMap(CarrierPtr dom, CarrierPtr cod, std::vector<std::uint32_t> table);
  static FinMap identity(const CarrierPtr& c);

  const CarrierPtr& dom() const { return dom_; }
  const CarrierPtr& cod() const { return cod_; }
  std::uint32_t operator()(std::size_t x) const { return table_[x]; }
  const std::vector<std::uint32_t>& table() const { return table_; }

  /// next ∘ this
  FinMap then(const FinMap& next) const;
  bool isInjective() const;
  bool isSurjective() const;

  friend bool operator==(const FinMap& a, const FinMap& b);

 private:
  CarrierPtr dom_;
  CarrierPtr cod_;
  std::vector<std::uint32_t> table_;
};

/// A pair of mutually inverse maps; both cancellation laws are checked when
/// the object is built.
class Bijection {
 public:
  Bijection(FinMap forward, FinMap backward);
  /// Builds the inverse table; throws InputError when `forward` is not bijective.
  static Bijection fromForward(FinMap forward);
  static Bijection identity(const CarrierPtr& c);

  const FinMap& forward() const { return forward_; }
  const FinMap& backward() const { return backward_; }
  const CarrierPtr& dom() const { return forward_.dom(); }
  const CarrierPtr& cod() const { return forward_.cod(); }

  Bijection inverse() const { return Bijection(backward_, forward_); }
  /// next ∘ this
  Bijection then(const Bijection& next) const;

 private:
  FinMap forward_;
  FinMap backward_;
};

// Relation algebra.

Rel inverseRel(const Rel& r);
/// r · s, defined by a finite existential over the middle carrier.
Rel composeRel(const Rel& r, const Rel& s);
Rel idRel(const CarrierPtr& x);
Rel graphRel(const FinMap& f);
/// graphRel(e.forward())
Rel equivGraph(const Bijection& e);

}  // namespace reprind
