#include "reprind/finrel/relation.hpp"

#include <bit>

#include "reprind/error.hpp"

namespace reprind {

namespace {
std::size_t wordsFor(std::size_t n) { return (n + 63) / 64; }
}  // namespace

Rel::Rel(CarrierPtr dom, CarrierPtr cod)
    : dom_(std::move(dom)), cod_(std::move(cod)), words_(wordsFor(cod_->size())),
      bits_(dom_->size() * words_, 0) {}

Rel Rel::fromPairs(CarrierPtr dom, CarrierPtr cod,
                   std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  Rel r(std::move(dom), std::move(cod));
  for (auto [x, y] : pairs) {
    if (x >= r.domSize() || y >= r.codSize())
      throw InputError("relation pair (" + std::to_string(x) + ", " + std::to_string(y) + ") out of range");
    r.set(x, y);
  }
  return r;
}

Rel Rel::total(CarrierPtr dom, CarrierPtr cod) {
  return fromPredicate(std::move(dom), std::move(cod), [](std::size_t, std::size_t) { return true; });
}

void Rel::set(std::size_t x, std::size_t y, bool value) {
  auto& w = bits_[x * words_ + (y >> 6)];
  const std::uint64_t mask = std::uint64_t{1} << (y & 63);
  if (value)
    w |= mask;
  else
    w &= ~mask;
}

std::size_t Rel::count() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t Rel::rowCount(std::size_t x) const {
  std::size_t n = 0;
  for (auto w : row(x)) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::optional<std::size_t> Rel::firstInRow(std::size_t x) const {
  auto r = row(x);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(r[i]));
  return std::nullopt;
}

std::optional<std::size_t> Rel::firstInColumn(std::size_t y) const {
  for (std::size_t x = 0; x < domSize(); ++x)
    if (holds(x, y)) return x;
  return std::nullopt;
}

void Rel::forEachInRow(std::size_t x, const std::function<void(std::size_t)>& f) const {
  auto r = row(x);
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::uint64_t w = r[i];
    while (w != 0) {
      f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> Rel::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < domSize(); ++x) forEachInRow(x, [&](std::size_t y) { out.emplace_back(x, y); });
  return out;
}

bool Rel::isSubsetOf(const Rel& other) const {
  requireSameElements(*dom_, *other.dom_, "relation inclusion (domain)");
  requireSameElements(*cod_, *other.cod_, "relation inclusion (codomain)");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if ((bits_[i] & ~other.bits_[i]) != 0) return false;
  return true;
}

bool operator==(const Rel& a, const Rel& b) {
  return sameElements(*a.dom_, *b.dom_) && sameElements(*a.cod_, *b.cod_) && a.bits_ == b.bits_;
}

FinMap::FinMap(CarrierPtr dom, CarrierPtr cod, std::vector<std::uint32_t> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (table_.size() != dom_->size())
    throw InputError("map " + dom_->name() + " -> " + cod_->name() + ": table has " +
                     std::to_string(table_.size()) + " entries, domain has " + std::to_string(dom_->size()));
  for (std::size_t x = 0; x < table_.size(); ++x)
    if (table_[x] >= cod_->size())
      throw InputError("map " + dom_->name() + " -> " + cod_->name() + ": image of '" + dom_->label(x) +
                       "' out of range");
}

FinMap FinMap::identity(const CarrierPtr& c) {
  std::vector<std::uint32_t> t(c->size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<std::uint32_t>(i);
  return FinMap(c, c, std::move(t));
}

FinMap FinMap::then(const FinMap& next) const {
  requireSameElements(*cod_, *next.dom_, "map composition");
  std::vector<std::uint32_t> t(table_.size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = next.table_[table_[x]];
  return FinMap(dom_, next.cod_, std::move(t));
}

bool FinMap::isInjective() const {
  std::vector<bool> seen(cod_->size(), false);
  for (auto y : table_) {
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

bool FinMap::isSurjective() const {
  std::vector<bool> seen(cod_->size(), false);
  for (auto y : table_) seen[y] = true;
  for (bool b : seen)
    if (!b) return false;
  return true;
}

bool operator==(const FinMap& a, const FinMap& b) {
  return sameElements(*a.dom_, *b.dom_) && sameElements(*a.cod_, *b.cod_) && a.table_ == b.table_;
}

Bijection::Bijection(FinMap forward, FinMap backward) : forward_(std::move(forward)), backward_(std::move(backward)) {
  requireSameElements(*forward_.dom(), *backward_.cod(), "bijection");
  requireSameElements(*forward_.cod(), *backward_.dom(), "bijection");
  for (std::size_t x = 0; x < forward_.dom()->size(); ++x)
    if (backward_(forward_(x)) != x)
      throw InputError("bijection: backward(forward(" + forward_.dom()->label(x) + ")) is not the identity");
  for (std::size_t y = 0; y < forward_.cod()->size(); ++y)
    if (forward_(backward_(y)) != y)
      throw InputError("bijection: forward(backward(" + forward_.cod()->label(y) + ")) is not the identity");
}

Bijection Bijection::fromForward(FinMap forward) {
  const auto& dom = forward.dom();
  const auto& cod = forward.cod();
  if (dom->size() != cod->size() || !forward.isInjective())
    throw InputError("map " + dom->name() + " -> " + cod->name() + " is not a bijection");
  std::vector<std::uint32_t> back(cod->size());
  for (std::size_t x = 0; x < dom->size(); ++x) back[forward(x)] = static_cast<std::uint32_t>(x);
  FinMap backward(cod, dom, std::move(back));
  return Bijection(std::move(forward), std::move(backward));
}

Bijection Bijection::identity(const CarrierPtr& c) { return Bijection(FinMap::identity(c), FinMap::identity(c)); }

Bijection Bijection::then(const Bijection& next) const {
  return Bijection(forward_.then(next.forward_), next.backward_.then(backward_));
}

Rel inverseRel(const Rel& r) {
  Rel out(r.cod(), r.dom());
  for (std::size_t x = 0; x < r.domSize(); ++x) r.forEachInRow(x, [&](std::size_t y) { out.set(y, x); });
  return out;
}

Rel composeRel(const Rel& r, const Rel& s) {
  requireSameElements(*r.cod(), *s.dom(), "relation composition");
  Rel out(r.dom(), s.cod());
  for (std::size_t x = 0; x < r.domSize(); ++x) {
    auto dst = out.mutableRow(x);
    r.forEachInRow(x, [&](std::size_t y) {
      auto src = s.row(y);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    });
  }
  return out;
}

Rel idRel(const CarrierPtr& x) {
  Rel out(x, x);
  for (std::size_t i = 0; i < x->size(); ++i) out.set(i, i);
  return out;
}

Rel graphRel(const FinMap& f) {
  Rel out(f.dom(), f.cod());
  for (std::size_t x = 0; x < f.dom()->size(); ++x) out.set(x, f(x));
  return out;
}

Rel equivGraph(const Bijection& e) { return graphRel(e.forward()); }

}  // namespace reprind
