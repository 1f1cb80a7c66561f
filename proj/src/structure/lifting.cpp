#include "reprind/structure/lifting.hpp"

#include <algorithm>
#include <bit>

#include "reprind/error.hpp"
#include "reprind/finrel/quotient.hpp"

namespace reprind {

namespace {

void findNonPositiveDomain(const Desc& d, const Desc& whole) {
  switch (d.kind()) {
    case Desc::Kind::Var:
    case Desc::Kind::Const:
      return;
    case Desc::Kind::Prod:
      findNonPositiveDomain(d.first(), whole);
      findNonPositiveDomain(d.second(), whole);
      return;
    case Desc::Kind::Maybe:
      findNonPositiveDomain(d.inner(), whole);
      return;
    case Desc::Kind::Fun:
      if (!d.domain().isPositive())
        throw InputError("function domain " + d.domain().str() + " in " + whole.str() +
                         " is not positive; relation lifting is only defined for positive domains");
      findNonPositiveDomain(d.codomain(), whole);
      return;
  }
}

// Pairs of codes related by ρ(P, R) for a positive P, built structurally.
std::vector<std::pair<std::uint64_t, std::uint64_t>> relatedCodePairs(const Interp& l, const Interp& r,
                                                                      const Rel& rel) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  switch (l.desc().kind()) {
    case Desc::Kind::Var:
      for (auto [x, y] : rel.pairs()) out.emplace_back(x, y);
      break;
    case Desc::Kind::Const:
      for (std::uint64_t k = 0; k < l.size(); ++k) out.emplace_back(k, k);
      break;
    case Desc::Kind::Prod: {
      const auto as = relatedCodePairs(l.first(), r.first(), rel);
      const auto bs = relatedCodePairs(l.second(), r.second(), rel);
      const auto nl = l.second().size();
      const auto nr = r.second().size();
      out.reserve(as.size() * bs.size());
      for (auto [al, ar] : as)
        for (auto [bl, br] : bs) out.emplace_back(al * nl + bl, ar * nr + br);
      break;
    }
    case Desc::Kind::Maybe:
      out.emplace_back(0, 0);
      for (auto [a, b] : relatedCodePairs(l.inner(), r.inner(), rel)) out.emplace_back(a + 1, b + 1);
      break;
    case Desc::Kind::Fun:
      throw SoundnessError("relatedCodePairs on a non-positive description");
  }
  return out;
}

std::uint64_t satAdd1(std::uint64_t a) { return a == Interp::kUnbounded ? a : a + 1; }

template <class Pick>
std::optional<std::uint64_t> pickBit(const std::vector<std::uint64_t>& words, std::size_t limit, Pick&& pick) {
  std::vector<std::uint64_t> members;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint64_t w = words[i];
    while (w != 0) {
      const auto bit = i * 64 + static_cast<std::size_t>(std::countr_zero(w));
      if (bit < limit) members.push_back(bit);
      w &= w - 1;
    }
  }
  if (members.empty()) return std::nullopt;
  return members[pick(members.size())];
}

}  // namespace

void requireAdmissible(const Desc& d) { findNonPositiveDomain(d, d); }

// ---------------------------------------------------------------------------
// Definition route

struct RelLift::DefNode {
  const Interp* left = nullptr;
  const Interp* right = nullptr;
  std::unique_ptr<DefNode> a;
  std::unique_ptr<DefNode> b;
  // fun: related left domain codes, indexed by right domain code
  std::vector<std::vector<std::uint32_t>> leftsOf;
};

namespace {

using DefNodePtr = std::unique_ptr<RelLift::DefNode>;

}  // namespace

struct RelLift::BlockNode {
  const Interp* left = nullptr;
  const Interp* right = nullptr;
  InterpPtr blocks;
  std::unique_ptr<BlockNode> a;
  std::unique_ptr<BlockNode> b;
  std::vector<std::int64_t> domLeft;   // fun: block code of each left domain code
  std::vector<std::int64_t> domRight;  // fun: block code of each right domain code
};

struct RelLift::BlockData {
  std::vector<std::int64_t> leftBlock;
  std::vector<std::int64_t> rightBlock;
  CarrierPtr carrier;
  std::unique_ptr<BlockNode> root;
};

namespace {

struct DefOps {
  const Rel& rel;

  std::unique_ptr<RelLift::DefNode> build(const Interp& l, const Interp& r) const {
    auto n = std::make_unique<RelLift::DefNode>();
    n->left = &l;
    n->right = &r;
    if (l.isPositive()) return n;
    switch (l.desc().kind()) {
      case Desc::Kind::Prod:
        n->a = build(l.first(), r.first());
        n->b = build(l.second(), r.second());
        break;
      case Desc::Kind::Maybe:
        n->a = build(l.inner(), r.inner());
        break;
      case Desc::Kind::Fun: {
        n->b = build(l.codomain(), r.codomain());
        n->leftsOf.resize(r.tableSize());
        l.tableSize();
        for (auto [p, q] : relatedCodePairs(l.domain(), r.domain(), rel))
          n->leftsOf[q].push_back(static_cast<std::uint32_t>(p));
        for (auto& v : n->leftsOf) std::sort(v.begin(), v.end());
        break;
      }
      default:
        break;
    }
    return n;
  }

  bool holds(const RelLift::DefNode& n, const StructValue& s, const StructValue& t) const {
    const Interp& l = *n.left;
    const Interp& r = *n.right;
    if (l.isPositive()) return relatesCodes(l, r, l.encode(s), r.encode(t), rel);
    switch (l.desc().kind()) {
      case Desc::Kind::Prod:
        return holds(*n.a, s.first(), t.first()) && holds(*n.b, s.second(), t.second());
      case Desc::Kind::Maybe:
        if (s.is(StructValue::Kind::Nothing) || t.is(StructValue::Kind::Nothing))
          return s.is(StructValue::Kind::Nothing) && t.is(StructValue::Kind::Nothing);
        return holds(*n.a, s.inner(), t.inner());
      case Desc::Kind::Fun: {
        const bool coded = l.codedTables();
        for (std::size_t q = 0; q < n.leftsOf.size(); ++q) {
          for (auto p : n.leftsOf[q]) {
            const bool ok = coded ? relatesCodes(l.codomain(), r.codomain(), s.codes()[p], t.codes()[q], rel)
                                  : holds(*n.b, s.entries()[p], t.entries()[q]);
            if (!ok) return false;
          }
        }
        return true;
      }
      default:
        break;
    }
    return false;
  }

  std::uint64_t countCodes(const Interp& l, const Interp& r, const std::vector<std::uint64_t>& cs) const {
    switch (l.desc().kind()) {
      case Desc::Kind::Var: {
        if (cs.empty()) return r.size();
        std::vector<std::uint64_t> acc(rel.row(cs[0]).begin(), rel.row(cs[0]).end());
        for (std::size_t i = 1; i < cs.size(); ++i) {
          auto row = rel.row(cs[i]);
          for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= row[w];
        }
        std::uint64_t n = 0;
        for (auto w : acc) n += static_cast<std::uint64_t>(std::popcount(w));
        return n;
      }
      case Desc::Kind::Const:
        if (cs.empty()) return r.size();
        return std::all_of(cs.begin(), cs.end(), [&](auto c) { return c == cs[0]; }) ? 1 : 0;
      case Desc::Kind::Prod: {
        const auto nl = l.second().size();
        std::vector<std::uint64_t> as, bs;
        as.reserve(cs.size());
        bs.reserve(cs.size());
        for (auto c : cs) {
          as.push_back(c / nl);
          bs.push_back(c % nl);
        }
        const auto ka = countCodes(l.first(), r.first(), as);
        if (ka == 0) return 0;
        return satMul(ka, countCodes(l.second(), r.second(), bs));
      }
      case Desc::Kind::Maybe: {
        if (cs.empty()) return satAdd1(countCodes(l.inner(), r.inner(), cs));
        const auto zeros = std::count(cs.begin(), cs.end(), std::uint64_t{0});
        if (zeros == static_cast<std::ptrdiff_t>(cs.size())) return 1;
        if (zeros > 0) return 0;
        std::vector<std::uint64_t> inner;
        inner.reserve(cs.size());
        for (auto c : cs) inner.push_back(c - 1);
        return countCodes(l.inner(), r.inner(), inner);
      }
      case Desc::Kind::Fun:
        break;
    }
    throw SoundnessError("countCodes on a non-positive description");
  }

  std::uint64_t count(const RelLift::DefNode& n, const std::vector<const StructValue*>& cs) const {
    const Interp& l = *n.left;
    const Interp& r = *n.right;
    if (l.isPositive()) {
      std::vector<std::uint64_t> codes;
      codes.reserve(cs.size());
      for (auto* c : cs) codes.push_back(l.encode(*c));
      return countCodes(l, r, codes);
    }
    switch (l.desc().kind()) {
      case Desc::Kind::Prod: {
        std::vector<const StructValue*> as, bs;
        for (auto* c : cs) {
          as.push_back(&c->first());
          bs.push_back(&c->second());
        }
        const auto ka = count(*n.a, as);
        if (ka == 0) return 0;
        return satMul(ka, count(*n.b, bs));
      }
      case Desc::Kind::Maybe: {
        if (cs.empty()) return satAdd1(count(*n.a, cs));
        std::vector<const StructValue*> inner;
        for (auto* c : cs)
          if (c->is(StructValue::Kind::Just)) inner.push_back(&c->inner());
        if (inner.empty()) return 1;
        if (inner.size() != cs.size()) return 0;
        return count(*n.a, inner);
      }
      case Desc::Kind::Fun: {
        const bool coded = l.codedTables();
        std::uint64_t total = 1;
        for (std::size_t q = 0; q < n.leftsOf.size(); ++q) {
          std::uint64_t k = 0;
          if (coded) {
            std::vector<std::uint64_t> codes;
            for (auto* c : cs)
              for (auto p : n.leftsOf[q]) codes.push_back(c->codes()[p]);
            std::sort(codes.begin(), codes.end());
            codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
            k = countCodes(l.codomain(), r.codomain(), codes);
          } else {
            std::vector<const StructValue*> entries;
            for (auto* c : cs)
              for (auto p : n.leftsOf[q]) entries.push_back(&c->entries()[p]);
            k = count(*n.b, entries);
          }
          total = satMul(total, k);
          if (total == 0) return 0;
        }
        return total;
      }
      default:
        break;
    }
    return 0;
  }

  std::optional<std::uint64_t> sampleCodes(const Interp& l, const Interp& r, const std::vector<std::uint64_t>& cs,
                                           std::mt19937_64& rng) const {
    auto uniform = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
    switch (l.desc().kind()) {
      case Desc::Kind::Var: {
        if (cs.empty()) {
          if (r.size() == 0) return std::nullopt;
          return uniform(r.size());
        }
        std::vector<std::uint64_t> acc(rel.row(cs[0]).begin(), rel.row(cs[0]).end());
        for (std::size_t i = 1; i < cs.size(); ++i) {
          auto row = rel.row(cs[i]);
          for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= row[w];
        }
        return pickBit(acc, rel.codSize(), [&](std::size_t n) { return static_cast<std::size_t>(uniform(n)); });
      }
      case Desc::Kind::Const:
        if (cs.empty()) {
          if (r.size() == 0) return std::nullopt;
          return uniform(r.size());
        }
        if (std::all_of(cs.begin(), cs.end(), [&](auto c) { return c == cs[0]; })) return cs[0];
        return std::nullopt;
      case Desc::Kind::Prod: {
        const auto nl = l.second().size();
        std::vector<std::uint64_t> as, bs;
        for (auto c : cs) {
          as.push_back(c / nl);
          bs.push_back(c % nl);
        }
        auto a = sampleCodes(l.first(), r.first(), as, rng);
        if (!a) return std::nullopt;
        auto b = sampleCodes(l.second(), r.second(), bs, rng);
        if (!b) return std::nullopt;
        return *a * r.second().size() + *b;
      }
      case Desc::Kind::Maybe: {
        if (cs.empty()) {
          if (uniform(4) == 0) return 0;
          auto a = sampleCodes(l.inner(), r.inner(), cs, rng);
          return a ? *a + 1 : 0;
        }
        const auto zeros = std::count(cs.begin(), cs.end(), std::uint64_t{0});
        if (zeros == static_cast<std::ptrdiff_t>(cs.size())) return 0;
        if (zeros > 0) return std::nullopt;
        std::vector<std::uint64_t> inner;
        for (auto c : cs) inner.push_back(c - 1);
        auto a = sampleCodes(l.inner(), r.inner(), inner, rng);
        if (!a) return std::nullopt;
        return *a + 1;
      }
      case Desc::Kind::Fun:
        break;
    }
    throw SoundnessError("sampleCodes on a non-positive description");
  }

  std::optional<StructValue> sample(const RelLift::DefNode& n, const std::vector<const StructValue*>& cs,
                                    std::mt19937_64& rng) const {
    const Interp& l = *n.left;
    const Interp& r = *n.right;
    if (l.isPositive()) {
      std::vector<std::uint64_t> codes;
      for (auto* c : cs) codes.push_back(l.encode(*c));
      auto code = sampleCodes(l, r, codes, rng);
      if (!code) return std::nullopt;
      return r.decode(*code);
    }
    switch (l.desc().kind()) {
      case Desc::Kind::Prod: {
        std::vector<const StructValue*> as, bs;
        for (auto* c : cs) {
          as.push_back(&c->first());
          bs.push_back(&c->second());
        }
        auto a = sample(*n.a, as, rng);
        if (!a) return std::nullopt;
        auto b = sample(*n.b, bs, rng);
        if (!b) return std::nullopt;
        return StructValue::pair(std::move(*a), std::move(*b));
      }
      case Desc::Kind::Maybe: {
        std::vector<const StructValue*> inner;
        for (auto* c : cs)
          if (c->is(StructValue::Kind::Just)) inner.push_back(&c->inner());
        if (cs.empty()) {
          if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) return StructValue::nothing();
        } else if (inner.empty()) {
          return StructValue::nothing();
        } else if (inner.size() != cs.size()) {
          return std::nullopt;
        }
        auto a = sample(*n.a, inner, rng);
        if (!a) return cs.empty() ? std::optional<StructValue>(StructValue::nothing()) : std::nullopt;
        return StructValue::just(std::move(*a));
      }
      case Desc::Kind::Fun: {
        const bool coded = l.codedTables();
        std::vector<std::uint32_t> codes;
        std::vector<StructValue> entries;
        for (std::size_t q = 0; q < n.leftsOf.size(); ++q) {
          if (coded) {
            std::vector<std::uint64_t> cc;
            for (auto* c : cs)
              for (auto p : n.leftsOf[q]) cc.push_back(c->codes()[p]);
            auto v = sampleCodes(l.codomain(), r.codomain(), cc, rng);
            if (!v) return std::nullopt;
            codes.push_back(static_cast<std::uint32_t>(*v));
          } else {
            std::vector<const StructValue*> ee;
            for (auto* c : cs)
              for (auto p : n.leftsOf[q]) ee.push_back(&c->entries()[p]);
            auto v = sample(*n.b, ee, rng);
            if (!v) return std::nullopt;
            entries.push_back(std::move(*v));
          }
        }
        return coded ? StructValue::codedTable(std::move(codes)) : StructValue::table(std::move(entries));
      }
      default:
        break;
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Block route

enum class Side { Left, Right };

struct BlockOps {
  const RelLift::BlockData& data;

  std::unique_ptr<RelLift::BlockNode> build(const Interp& l, const Interp& r) const {
    auto n = std::make_unique<RelLift::BlockNode>();
    n->left = &l;
    n->right = &r;
    n->blocks = Interp::make(l.desc(), data.carrier);
    attach(*n);
    return n;
  }

  // Children reuse the sub-interpretations of n.blocks so codes line up.
  void attach(RelLift::BlockNode& n) const {
    const Interp& l = *n.left;
    const Interp& r = *n.right;
    if (l.isPositive()) return;
    auto child = [&](const Interp& cl, const Interp& cr, const Interp& cb) {
      auto c = std::make_unique<RelLift::BlockNode>();
      c->left = &cl;
      c->right = &cr;
      c->blocks = std::shared_ptr<const Interp>(n.blocks, &cb);
      attach(*c);
      return c;
    };
    switch (l.desc().kind()) {
      case Desc::Kind::Prod:
        n.a = child(l.first(), r.first(), n.blocks->first());
        n.b = child(l.second(), r.second(), n.blocks->second());
        break;
      case Desc::Kind::Maybe:
        n.a = child(l.inner(), r.inner(), n.blocks->inner());
        break;
      case Desc::Kind::Fun: {
        n.b = child(l.codomain(), r.codomain(), n.blocks->codomain());
        const std::size_t nl = l.tableSize();
        const std::size_t nr = r.tableSize();
        n.domLeft.resize(nl);
        n.domRight.resize(nr);
        for (std::size_t p = 0; p < nl; ++p)
          n.domLeft[p] = partialMapCode(l.domain(), n.blocks->domain(), p, data.leftBlock);
        for (std::size_t p = 0; p < nr; ++p)
          n.domRight[p] = partialMapCode(r.domain(), n.blocks->domain(), p, data.rightBlock);
        break;
      }
      default:
        break;
    }
  }

  const Interp& sideInterp(const RelLift::BlockNode& n, Side side) const {
    return side == Side::Left ? *n.left : *n.right;
  }
  const std::vector<std::int64_t>& sideMap(Side side) const {
    return side == Side::Left ? data.leftBlock : data.rightBlock;
  }

  std::optional<StructValue> signature(const RelLift::BlockNode& n, Side side, const StructValue& v) const {
    const Interp& si = sideInterp(n, side);
    if (si.isPositive()) {
      const auto code = partialMapCode(si, *n.blocks, si.encode(v), sideMap(side));
      if (code < 0) return std::nullopt;
      return n.blocks->decode(static_cast<std::uint64_t>(code));
    }
    switch (si.desc().kind()) {
      case Desc::Kind::Prod: {
        auto a = signature(*n.a, side, v.first());
        if (!a) return std::nullopt;
        auto b = signature(*n.b, side, v.second());
        if (!b) return std::nullopt;
        return StructValue::pair(std::move(*a), std::move(*b));
      }
      case Desc::Kind::Maybe: {
        if (v.is(StructValue::Kind::Nothing)) return StructValue::nothing();
        auto a = signature(*n.a, side, v.inner());
        if (!a) return std::nullopt;
        return StructValue::just(std::move(*a));
      }
      case Desc::Kind::Fun: {
        const auto& dom = side == Side::Left ? n.domLeft : n.domRight;
        const std::size_t nb = n.blocks->tableSize();
        if (si.codedTables()) {
          const Interp& cod = si.codomain();
          const Interp& codB = n.blocks->codomain();
          const auto& map = sideMap(side);
          std::vector<std::int64_t> acc(nb, -1);
          for (std::size_t p = 0; p < dom.size(); ++p) {
            const auto beta = dom[p];
            if (beta < 0) continue;
            const auto c = partialMapCode(cod, codB, v.codes()[p], map);
            if (c < 0) return std::nullopt;
            auto& slot = acc[static_cast<std::size_t>(beta)];
            if (slot < 0)
              slot = c;
            else if (slot != c)
              return std::nullopt;
          }
          std::vector<std::uint32_t> codes(nb);
          for (std::size_t i = 0; i < nb; ++i) {
            if (acc[i] < 0) throw SoundnessError("block signature: a domain block has no preimage");
            codes[i] = static_cast<std::uint32_t>(acc[i]);
          }
          return StructValue::codedTable(std::move(codes));
        }
        std::vector<std::optional<StructValue>> acc(nb);
        for (std::size_t p = 0; p < dom.size(); ++p) {
          const auto beta = dom[p];
          if (beta < 0) continue;
          auto sv = signature(*n.b, side, v.entries()[p]);
          if (!sv) return std::nullopt;
          auto& slot = acc[static_cast<std::size_t>(beta)];
          if (!slot)
            slot = std::move(sv);
          else if (!(*slot == *sv))
            return std::nullopt;
        }
        std::vector<StructValue> entries;
        entries.reserve(nb);
        for (auto& s : acc) {
          if (!s) throw SoundnessError("block signature: a domain block has no preimage");
          entries.push_back(std::move(*s));
        }
        return StructValue::table(std::move(entries));
      }
      default:
        break;
    }
    return std::nullopt;
  }
};

}  // namespace

RelLift::RelLift(Desc d, Rel r, Route route) : desc_(std::move(d)), rel_(std::move(r)), route_(route) {
  requireAdmissible(desc_);
  left_ = Interp::make(desc_, rel_.dom());
  right_ = Interp::make(desc_, rel_.cod());
  if (route_ == Route::Auto) route_ = isZigzagComplete(rel_) ? Route::Blocks : Route::Definition;
  if (route_ == Route::Definition) {
    def_ = DefOps{rel_}.build(*left_, *right_);
    return;
  }
  if (auto v = findZigzagViolation(rel_))
    throw InputError("block evaluation of a lifted relation needs a zigzag-complete relation");
  blocks_ = std::make_unique<BlockData>();
  blocks_->leftBlock.assign(rel_.domSize(), -1);
  blocks_->rightBlock.assign(rel_.codSize(), -1);
  std::int64_t next = 0;
  for (std::size_t x = 0; x < rel_.domSize(); ++x) {
    auto y0 = rel_.firstInRow(x);
    if (!y0) continue;
    if (blocks_->rightBlock[*y0] < 0) {
      const auto b = next++;
      rel_.forEachInRow(x, [&](std::size_t y) { blocks_->rightBlock[y] = b; });
    }
    blocks_->leftBlock[x] = blocks_->rightBlock[*y0];
  }
  blocks_->carrier = rangeCarrier("blocks", static_cast<std::size_t>(next), "b");
  blocks_->root = BlockOps{*blocks_}.build(*left_, *right_);
}

RelLift::~RelLift() = default;
RelLift::RelLift(RelLift&&) noexcept = default;
RelLift& RelLift::operator=(RelLift&&) noexcept = default;

bool RelLift::holds(const StructValue& s, const StructValue& t) const {
  if (def_) return DefOps{rel_}.holds(*def_, s, t);
  BlockOps ops{*blocks_};
  auto a = ops.signature(*blocks_->root, Side::Left, s);
  if (!a) return false;
  auto b = ops.signature(*blocks_->root, Side::Right, t);
  return b && *a == *b;
}

namespace {

std::optional<LiftFailure> explainRel(const Interp& l, const Interp& r, const Rel& rel, const StructValue& s,
                                      const StructValue& t, const std::string& path) {
  switch (l.desc().kind()) {
    case Desc::Kind::Var:
      if (rel.holds(s.index(), t.index())) return std::nullopt;
      return LiftFailure{path, "R(" + l.render(s) + ", " + r.render(t) + ") does not hold"};
    case Desc::Kind::Const:
      if (s.index() == t.index()) return std::nullopt;
      return LiftFailure{path, "constants differ: " + l.render(s) + " vs " + r.render(t)};
    case Desc::Kind::Prod:
      if (auto f = explainRel(l.first(), r.first(), rel, s.first(), t.first(), path + "/0")) return f;
      return explainRel(l.second(), r.second(), rel, s.second(), t.second(), path + "/1");
    case Desc::Kind::Maybe: {
      const bool sn = s.is(StructValue::Kind::Nothing);
      const bool tn = t.is(StructValue::Kind::Nothing);
      if (sn && tn) return std::nullopt;
      if (sn || tn) return LiftFailure{path, "maybe mismatch: " + l.render(s) + " vs " + r.render(t)};
      return explainRel(l.inner(), r.inner(), rel, s.inner(), t.inner(), path + "/just");
    }
    case Desc::Kind::Fun: {
      const std::size_t nl = l.tableSize();
      const std::size_t nr = r.tableSize();
      for (std::size_t p = 0; p < nl; ++p)
        for (std::size_t q = 0; q < nr; ++q) {
          if (!relatesCodes(l.domain(), r.domain(), p, q, rel)) continue;
          const auto sp = l.applyCode(s, p);
          const auto tq = r.applyCode(t, q);
          if (auto f = explainRel(l.codomain(), r.codomain(), rel, sp, tq,
                                  path + " @ " + l.domain().render(l.domain().decode(p)) + " ~ " +
                                      r.domain().render(r.domain().decode(q))))
            return f;
        }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<LiftFailure> RelLift::explainFailure(const StructValue& s, const StructValue& t) const {
  return explainRel(*left_, *right_, rel_, s, t, "");
}

Rel RelLift::table(std::uint64_t cap) const {
  const auto ls = left_->enumerate(cap);
  const auto rs = right_->enumerate(cap);
  return Rel::fromPredicate(left_->asCarrier(cap), right_->asCarrier(cap),
                            [&](std::size_t i, std::size_t j) { return holds(ls[i], rs[j]); });
}

std::uint64_t RelLift::countCandidates(const std::vector<const StructValue*>& constraints) const {
  if (!def_) throw SoundnessError("countCandidates needs the definition route");
  return DefOps{rel_}.count(*def_, constraints);
}

std::optional<StructValue> RelLift::sampleRelated(const std::vector<const StructValue*>& constraints,
                                                  std::mt19937_64& rng) const {
  if (!def_) throw SoundnessError("sampleRelated needs the definition route");
  return DefOps{rel_}.sample(*def_, constraints, rng);
}

// ---------------------------------------------------------------------------
// Structured equivalences

struct EquivLift::Node {
  const Interp* left = nullptr;
  const Interp* right = nullptr;
  std::unique_ptr<Node> a;
  std::unique_ptr<Node> b;
  std::vector<std::vector<std::uint32_t>> leftsOf;
};

namespace {

struct EquivOps {
  const Bijection& e;
  std::uint64_t cap;

  bool holds(const EquivLift::Node& n, const StructValue& s, const StructValue& t) const {
    const Interp& l = *n.left;
    switch (l.desc().kind()) {
      case Desc::Kind::Var:
        return e.forward()(s.index()) == t.index();
      case Desc::Kind::Const:
        return s.index() == t.index();
      case Desc::Kind::Prod:
        return holds(*n.a, s.first(), t.first()) && holds(*n.b, s.second(), t.second());
      case Desc::Kind::Maybe:
        if (s.is(StructValue::Kind::Nothing) || t.is(StructValue::Kind::Nothing))
          return s.is(StructValue::Kind::Nothing) && t.is(StructValue::Kind::Nothing);
        return holds(*n.a, s.inner(), t.inner());
      case Desc::Kind::Fun: {
        const Interp& r = *n.right;
        for (std::size_t q = 0; q < n.leftsOf.size(); ++q)
          for (auto p : n.leftsOf[q])
            if (!holds(*n.b, l.applyCode(s, p), r.applyCode(t, q))) return false;
        return true;
      }
    }
    return false;
  }

  std::unique_ptr<EquivLift::Node> build(const Interp& l, const Interp& r) const {
    auto n = std::make_unique<EquivLift::Node>();
    n->left = &l;
    n->right = &r;
    switch (l.desc().kind()) {
      case Desc::Kind::Var:
      case Desc::Kind::Const:
        break;
      case Desc::Kind::Prod:
        n->a = build(l.first(), r.first());
        n->b = build(l.second(), r.second());
        break;
      case Desc::Kind::Maybe:
        n->a = build(l.inner(), r.inner());
        break;
      case Desc::Kind::Fun: {
        n->a = build(l.domain(), r.domain());
        n->b = build(l.codomain(), r.codomain());
        const auto ls = l.domain().enumerate(cap);
        const auto rs = r.domain().enumerate(cap);
        n->leftsOf.resize(rs.size());
        for (std::size_t p = 0; p < ls.size(); ++p)
          for (std::size_t q = 0; q < rs.size(); ++q)
            if (holds(*n->a, ls[p], rs[q])) n->leftsOf[q].push_back(static_cast<std::uint32_t>(p));
        break;
      }
    }
    return n;
  }

  std::optional<LiftFailure> explain(const EquivLift::Node& n, const StructValue& s, const StructValue& t,
                                     const std::string& path) const {
    const Interp& l = *n.left;
    const Interp& r = *n.right;
    switch (l.desc().kind()) {
      case Desc::Kind::Var:
        if (holds(n, s, t)) return std::nullopt;
        return LiftFailure{path, "e(" + l.render(s) + ") = " + r.base()->label(e.forward()(s.index())) + ", not " +
                                     r.render(t)};
      case Desc::Kind::Const:
        if (holds(n, s, t)) return std::nullopt;
        return LiftFailure{path, "constants differ: " + l.render(s) + " vs " + r.render(t)};
      case Desc::Kind::Prod:
        if (auto f = explain(*n.a, s.first(), t.first(), path + "/0")) return f;
        return explain(*n.b, s.second(), t.second(), path + "/1");
      case Desc::Kind::Maybe: {
        const bool sn = s.is(StructValue::Kind::Nothing);
        const bool tn = t.is(StructValue::Kind::Nothing);
        if (sn && tn) return std::nullopt;
        if (sn || tn) return LiftFailure{path, "maybe mismatch: " + l.render(s) + " vs " + r.render(t)};
        return explain(*n.a, s.inner(), t.inner(), path + "/just");
      }
      case Desc::Kind::Fun: {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t q = 0; q < n.leftsOf.size(); ++q)
          for (auto p : n.leftsOf[q]) pairs.emplace_back(p, static_cast<std::uint32_t>(q));
        std::sort(pairs.begin(), pairs.end());
        for (auto [p, q] : pairs)
          if (auto f = explain(*n.b, l.applyCode(s, p), r.applyCode(t, q),
                               path + " @ " + l.domain().render(l.domain().decode(p)) + " ~ " +
                                   r.domain().render(r.domain().decode(q))))
            return f;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

EquivLift::EquivLift(Desc d, Bijection e, std::uint64_t cap) : desc_(std::move(d)), equiv_(std::move(e)) {
  left_ = Interp::make(desc_, equiv_.dom());
  right_ = Interp::make(desc_, equiv_.cod());
  root_ = EquivOps{equiv_, cap}.build(*left_, *right_);
}

EquivLift::~EquivLift() = default;
EquivLift::EquivLift(EquivLift&&) noexcept = default;
EquivLift& EquivLift::operator=(EquivLift&&) noexcept = default;

bool EquivLift::holds(const StructValue& s, const StructValue& t) const {
  return EquivOps{equiv_, 0}.holds(*root_, s, t);
}

std::optional<LiftFailure> EquivLift::explainFailure(const StructValue& s, const StructValue& t) const {
  return EquivOps{equiv_, 0}.explain(*root_, s, t, "");
}

Rel EquivLift::table(std::uint64_t cap) const {
  const auto ls = left_->enumerate(cap);
  const auto rs = right_->enumerate(cap);
  return Rel::fromPredicate(left_->asCarrier(cap), right_->asCarrier(cap),
                            [&](std::size_t i, std::size_t j) { return holds(ls[i], rs[j]); });
}

}  // namespace reprind
