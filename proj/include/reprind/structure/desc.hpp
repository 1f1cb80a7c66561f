#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "reprind/finrel/carrier.hpp"

namespace reprind {

/// Structure description: the grammar X | const(K) | prod(S,T) | fun(S,T) | maybe(S).
class Desc {
 public:
  enum class Kind { Var, Const, Prod, Fun, Maybe };

  /// The variable position X.
  Desc();

  static Desc var();
  static Desc constant(CarrierPtr k);
  static Desc prod(Desc first, Desc second);
  static Desc fun(Desc domain, Desc codomain);
  static Desc maybe(Desc inner);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  /// Prod components, Fun domain/codomain and Maybe inner share these slots.
  const Desc& first() const { return *node_->a; }
  const Desc& second() const { return *node_->b; }
  const Desc& domain() const { return *node_->a; }
  const Desc& codomain() const { return *node_->b; }
  const Desc& inner() const { return *node_->a; }
  const CarrierPtr& carrier() const { return node_->carrier; }

  /// True iff no fun(...) occurs anywhere.
  bool isPositive() const { return node_->positive; }
  /// True iff every fun(...) has a positive domain.
  bool isAdmissible() const { return node_->admissible; }
  int depth() const { return node_->depth; }

  /// Concrete syntax; parseDesc(str()) round-trips.
  std::string str() const;

  friend bool operator==(const Desc& a, const Desc& b);

 private:
  struct Node {
    Kind kind;
    CarrierPtr carrier;
    std::shared_ptr<const Desc> a;
    std::shared_ptr<const Desc> b;
    bool positive = true;
    bool admissible = true;
    int depth = 1;
  };
  explicit Desc(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Desc make(Kind k, CarrierPtr c, const Desc* a, const Desc* b);

  std::shared_ptr<const Node> node_;
};

using ConstantTable = std::map<std::string, CarrierPtr, std::less<>>;

/// Parses the concrete syntax; constants are resolved by carrier name.
/// Whitespace is ignored. Throws InputError with the offending position.
Desc parseDesc(std::string_view text, const ConstantTable& constants);

/// Every admissible description of depth <= maxDepth whose constants are
/// drawn from `constants`, ordered by depth and then structurally.
std::vector<Desc> admissibleDescs(int maxDepth, const std::vector<CarrierPtr>& constants);

}  // namespace reprind
