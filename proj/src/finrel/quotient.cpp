#include "reprind/finrel/quotient.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "reprind/error.hpp"

namespace reprind {

namespace {

bool rowsEqual(const Rel& r, std::size_t a, std::size_t b) {
  auto ra = r.row(a);
  auto rb = r.row(b);
  return std::equal(ra.begin(), ra.end(), rb.begin());
}

// Least z with r(y, z) and not r(x, z).
std::optional<std::size_t> leastInDifference(const Rel& r, std::size_t y, std::size_t x) {
  auto ry = r.row(y);
  auto rx = r.row(x);
  for (std::size_t i = 0; i < ry.size(); ++i) {
    std::uint64_t w = ry[i] & ~rx[i];
    if (w != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(w));
  }
  return std::nullopt;
}

// Under symmetry, transitivity holds iff related elements have equal rows.
bool symmetricRelationIsTransitive(const Rel& e) {
  std::vector<bool> assigned(e.domSize(), false);
  for (std::size_t x = 0; x < e.domSize(); ++x) {
    if (assigned[x]) continue;
    bool ok = true;
    e.forEachInRow(x, [&](std::size_t y) {
      if (!ok) return;
      if (!rowsEqual(e, x, y)) ok = false;
      assigned[y] = true;
    });
    if (!ok) return false;
  }
  return true;
}

std::optional<EquivalenceViolation> leastTransitivityViolation(const Rel& e) {
  for (std::size_t x = 0; x < e.domSize(); ++x) {
    std::optional<EquivalenceViolation> found;
    e.forEachInRow(x, [&](std::size_t y) {
      if (found) return;
      if (auto z = leastInDifference(e, y, x))
        found = EquivalenceViolation{EquivalenceViolation::Law::Transitivity, x, y, *z};
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<EquivalenceViolation> leastSymmetryViolation(const Rel& e) {
  for (std::size_t x = 0; x < e.domSize(); ++x) {
    std::optional<EquivalenceViolation> found;
    e.forEachInRow(x, [&](std::size_t y) {
      if (!found && !e.holds(y, x)) found = EquivalenceViolation{EquivalenceViolation::Law::Symmetry, x, y, 0};
    });
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

std::string EquivalenceViolation::describe(const Carrier& c) const {
  switch (law) {
    case Law::Reflexivity:
      return "reflexivity fails at " + c.label(x);
    case Law::Symmetry:
      return "symmetry fails: (" + c.label(x) + ", " + c.label(y) + ") related but not (" + c.label(y) + ", " +
             c.label(x) + ")";
    case Law::Transitivity:
      return "transitivity fails: (" + c.label(x) + ", " + c.label(y) + ") and (" + c.label(y) + ", " +
             c.label(z) + ") related but not (" + c.label(x) + ", " + c.label(z) + ")";
  }
  return {};
}

std::optional<EquivalenceViolation> checkEquivalence(const Rel& e) {
  requireSameElements(*e.dom(), *e.cod(), "equivalence relation");
  for (std::size_t x = 0; x < e.domSize(); ++x)
    if (!e.holds(x, x)) return EquivalenceViolation{EquivalenceViolation::Law::Reflexivity, x, x, 0};
  if (auto v = leastSymmetryViolation(e)) return v;
  if (!symmetricRelationIsTransitive(e)) return leastTransitivityViolation(e);
  return std::nullopt;
}

bool isEquivalence(const Rel& e) { return !checkEquivalence(e).has_value(); }

bool isPer(const Rel& e) {
  if (!sameElements(*e.dom(), *e.cod())) return false;
  if (leastSymmetryViolation(e)) return false;
  return symmetricRelationIsTransitive(e);
}

std::optional<ZigzagCounterexample> findZigzagViolation(const Rel& r) {
  // Zigzag completeness is difunctionality: any two elements sharing a
  // partner have identical rows.
  std::vector<std::optional<std::size_t>> firstOfColumn(r.codSize());
  for (std::size_t x = 0; x < r.domSize(); ++x)
    r.forEachInRow(x, [&](std::size_t y) {
      if (!firstOfColumn[y]) firstOfColumn[y] = x;
    });
  bool zigzag = true;
  for (std::size_t x = 0; x < r.domSize() && zigzag; ++x)
    r.forEachInRow(x, [&](std::size_t y) {
      if (zigzag && !rowsEqual(r, x, *firstOfColumn[y])) zigzag = false;
    });
  if (zigzag) return std::nullopt;

  for (std::size_t x = 0; x < r.domSize(); ++x) {
    std::optional<ZigzagCounterexample> found;
    r.forEachInRow(x, [&](std::size_t y) {
      for (std::size_t x2 = 0; x2 < r.domSize() && !found; ++x2) {
        if (!r.holds(x2, y)) continue;
        if (auto y2 = leastInDifference(r, x2, x)) found = ZigzagCounterexample{x, y, x2, *y2};
      }
    });
    if (found) return found;
  }
  throw SoundnessError("zigzag check disagrees with counterexample search");
}

bool isZigzagComplete(const Rel& r) { return !findZigzagViolation(r).has_value(); }

Partition::Partition(CarrierPtr base, std::vector<std::uint32_t> classOf)
    : base_(std::move(base)), classOf_(std::move(classOf)) {
  if (classOf_.size() != base_->size()) throw InputError("partition size does not match its base carrier");
  for (std::size_t x = 0; x < classOf_.size(); ++x) {
    const auto c = classOf_[x];
    if (c == representatives_.size()) {
      representatives_.push_back(static_cast<std::uint32_t>(x));
    } else if (c > representatives_.size()) {
      throw InputError("partition classes must be numbered by their least member");
    }
  }
}

std::vector<std::vector<std::uint32_t>> Partition::members() const {
  std::vector<std::vector<std::uint32_t>> out(classCount());
  for (std::size_t x = 0; x < classOf_.size(); ++x) out[classOf_[x]].push_back(static_cast<std::uint32_t>(x));
  return out;
}

Quotient quotient(const CarrierPtr& x, const Rel& e) {
  requireSameElements(*x, *e.dom(), "quotient");
  if (auto v = checkEquivalence(e)) throw InputError("quotient: not an equivalence relation: " + v->describe(*x));
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> classOf(x->size(), kUnset);
  std::vector<std::string> labels;
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < x->size(); ++i) {
    if (classOf[i] != kUnset) continue;
    e.forEachInRow(i, [&](std::size_t j) { classOf[j] = next; });
    labels.push_back("[" + x->label(i) + "]");
    ++next;
  }
  auto carrier = makeCarrier(x->name() + "/~", std::move(labels));
  FinMap map(x, carrier, classOf);
  return Quotient{carrier, std::move(map), Partition(x, std::move(classOf))};
}

std::string QerFailure::describe(const Rel& r) const {
  const auto& X = *r.dom();
  const auto& Y = *r.cod();
  switch (kind) {
    case Kind::Zigzag:
      return "not zigzag-complete: R(" + X.label(zigzag->x) + ", " + Y.label(zigzag->y) + "), R(" +
             X.label(zigzag->x2) + ", " + Y.label(zigzag->y) + "), R(" + X.label(zigzag->x2) + ", " +
             Y.label(zigzag->y2) + ") but not R(" + X.label(zigzag->x) + ", " + Y.label(zigzag->y2) + ")";
    case Kind::UntotalLeft:
      return "not total on the left: " + X.label(element) + " has no partner";
    case Kind::UntotalRight:
      return "not total on the right: " + Y.label(element) + " has no partner";
  }
  return {};
}

QerCheck checkQER(const Rel& r) {
  if (auto z = findZigzagViolation(r)) return QerFailure{QerFailure::Kind::Zigzag, z, 0};
  std::vector<std::uint32_t> lr(r.domSize());
  for (std::size_t x = 0; x < r.domSize(); ++x) {
    auto y = r.firstInRow(x);
    if (!y) return QerFailure{QerFailure::Kind::UntotalLeft, std::nullopt, x};
    lr[x] = static_cast<std::uint32_t>(*y);
  }
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> rl(r.codSize(), kUnset);
  for (std::size_t x = 0; x < r.domSize(); ++x)
    r.forEachInRow(x, [&](std::size_t y) {
      if (rl[y] == kUnset) rl[y] = static_cast<std::uint32_t>(x);
    });
  for (std::size_t y = 0; y < rl.size(); ++y)
    if (rl[y] == kUnset) return QerFailure{QerFailure::Kind::UntotalRight, std::nullopt, y};

  const Rel inv = inverseRel(r);
  return QerWitness{r, FinMap(r.dom(), r.cod(), std::move(lr)), FinMap(r.cod(), r.dom(), std::move(rl)),
                    composeRel(r, inv), composeRel(inv, r)};
}

InducedEquiv inducedEquiv(const QerWitness& w) {
  Quotient left = quotient(w.rel.dom(), w.perLeft);
  Quotient right = quotient(w.rel.cod(), w.perRight);

  std::vector<std::uint32_t> fwd(left.partition.classCount());
  for (std::size_t c = 0; c < fwd.size(); ++c) fwd[c] = right.map(w.choiceLR(left.partition.representative(c)));
  std::vector<std::uint32_t> bwd(right.partition.classCount());
  for (std::size_t d = 0; d < bwd.size(); ++d) bwd[d] = left.map(w.choiceRL(right.partition.representative(d)));

  // Well-definedness: every representative of a class picks the same image.
  for (std::size_t x = 0; x < w.rel.domSize(); ++x)
    if (right.map(w.choiceLR(x)) != fwd[left.map(x)])
      throw SoundnessError("induced map is not well defined at " + w.rel.dom()->label(x));
  for (std::size_t y = 0; y < w.rel.codSize(); ++y)
    if (left.map(w.choiceRL(y)) != bwd[right.map(y)])
      throw SoundnessError("induced inverse is not well defined at " + w.rel.cod()->label(y));

  std::optional<Bijection> equiv;
  try {
    equiv.emplace(FinMap(left.carrier, right.carrier, std::move(fwd)),
                  FinMap(right.carrier, left.carrier, std::move(bwd)));
  } catch (const InputError& err) {
    throw SoundnessError(std::string("induced maps do not cancel: ") + err.what());
  }

  for (std::size_t x = 0; x < w.rel.domSize(); ++x) {
    const auto image = equiv->forward()(left.map(x));
    for (std::size_t y = 0; y < w.rel.codSize(); ++y)
      if ((image == right.map(y)) != w.rel.holds(x, y))
        throw SoundnessError("e[x] = [y] <=> R x y fails at (" + w.rel.dom()->label(x) + ", " +
                             w.rel.cod()->label(y) + ")");
  }
  return InducedEquiv{std::move(left), std::move(right), std::move(*equiv)};
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) {
  auto rx = find(x);
  auto ry = find(y);
  if (rx == ry) return false;
  if (rank_[rx] < rank_[ry]) std::swap(rx, ry);
  parent_[ry] = rx;
  if (rank_[rx] == rank_[ry]) ++rank_[rx];
  return true;
}

std::vector<std::uint32_t> DisjointSets::canonicalClasses() {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> rootClass(parent_.size(), kUnset);
  std::vector<std::uint32_t> out(parent_.size());
  std::uint32_t next = 0;
  for (std::size_t x = 0; x < parent_.size(); ++x) {
    auto r = find(x);
    if (rootClass[r] == kUnset) rootClass[r] = next++;
    out[x] = rootClass[r];
  }
  return out;
}

}  // namespace reprind
