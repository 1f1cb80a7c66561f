#include "reprind/structure/action.hpp"

#include "reprind/error.hpp"

namespace reprind {

struct EquivAction::Node {
  const Interp* left = nullptr;
  const Interp* right = nullptr;
  std::unique_ptr<Node> a;
  std::unique_ptr<Node> b;
  std::vector<std::uint32_t> domBack;  // fun: right domain code ↦ left domain code
  std::vector<std::uint32_t> domFwd;   // fun: left domain code ↦ right domain code
};

namespace {

struct ActionOps {
  const Bijection& e;

  // forward maps left values to right values; otherwise right to left.
  StructValue apply(const EquivAction::Node& n, const StructValue& v, bool forward) const {
    const Interp& src = forward ? *n.left : *n.right;
    const Interp& dst = forward ? *n.right : *n.left;
    switch (src.desc().kind()) {
      case Desc::Kind::Var:
        return StructValue::point(forward ? e.forward()(v.index()) : e.backward()(v.index()));
      case Desc::Kind::Const:
        return v;
      case Desc::Kind::Prod:
        return StructValue::pair(apply(*n.a, v.first(), forward), apply(*n.b, v.second(), forward));
      case Desc::Kind::Maybe:
        if (v.is(StructValue::Kind::Nothing)) return v;
        return StructValue::just(apply(*n.a, v.inner(), forward));
      case Desc::Kind::Fun: {
        const auto& pre = forward ? n.domBack : n.domFwd;
        if (src.codedTables()) {
          const auto& table = forward ? e.forward().table() : e.backward().table();
          std::vector<std::uint32_t> codes(pre.size());
          for (std::size_t q = 0; q < pre.size(); ++q)
            codes[q] = static_cast<std::uint32_t>(mapCode(src.codomain(), dst.codomain(), v.codes()[pre[q]], table));
          return StructValue::codedTable(std::move(codes));
        }
        std::vector<StructValue> entries;
        entries.reserve(pre.size());
        for (auto p : pre) entries.push_back(apply(*n.b, v.entries()[p], forward));
        return StructValue::table(std::move(entries));
      }
    }
    return v;
  }

  std::unique_ptr<EquivAction::Node> build(const Interp& l, const Interp& r) const {
    auto n = std::make_unique<EquivAction::Node>();
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
        const std::size_t nl = l.tableSize();
        const std::size_t nr = r.tableSize();
        n->domBack.resize(nr);
        n->domFwd.resize(nl);
        for (std::size_t q = 0; q < nr; ++q)
          n->domBack[q] = static_cast<std::uint32_t>(l.domain().encode(apply(*n->a, r.domain().decode(q), false)));
        for (std::size_t p = 0; p < nl; ++p)
          n->domFwd[p] = static_cast<std::uint32_t>(r.domain().encode(apply(*n->a, l.domain().decode(p), true)));
        break;
      }
    }
    return n;
  }
};

}  // namespace

EquivAction::EquivAction(Desc d, Bijection e) : desc_(std::move(d)), equiv_(std::move(e)) {
  left_ = Interp::make(desc_, equiv_.dom());
  right_ = Interp::make(desc_, equiv_.cod());
  root_ = ActionOps{equiv_}.build(*left_, *right_);
}

EquivAction::~EquivAction() = default;
EquivAction::EquivAction(EquivAction&&) noexcept = default;
EquivAction& EquivAction::operator=(EquivAction&&) noexcept = default;

StructValue EquivAction::apply(const StructValue& s) const { return ActionOps{equiv_}.apply(*root_, s, true); }

StructValue EquivAction::applyInverse(const StructValue& t) const {
  return ActionOps{equiv_}.apply(*root_, t, false);
}

Bijection EquivAction::asBijection(std::uint64_t cap) const {
  left_->requireEnumerable(cap);
  right_->requireEnumerable(cap);
  auto lc = left_->asCarrier(cap);
  auto rc = right_->asCarrier(cap);
  std::vector<std::uint32_t> fwd(lc->size());
  std::vector<std::uint32_t> back(rc->size());
  for (std::size_t c = 0; c < fwd.size(); ++c)
    fwd[c] = static_cast<std::uint32_t>(right_->encode(apply(left_->decode(c))));
  for (std::size_t c = 0; c < back.size(); ++c)
    back[c] = static_cast<std::uint32_t>(left_->encode(applyInverse(right_->decode(c))));
  return Bijection(FinMap(lc, rc, std::move(fwd)), FinMap(rc, lc, std::move(back)));
}

FinMap funAction(const Desc& p, const FinMap& f, std::uint64_t cap) {
  if (!p.isPositive()) throw InputError("the covariant action needs a positive description, got " + p.str());
  auto src = Interp::make(p, f.dom());
  auto dst = Interp::make(p, f.cod());
  auto sc = src->asCarrier(cap);
  auto dc = dst->asCarrier(cap);
  std::vector<std::uint32_t> table(sc->size());
  for (std::size_t c = 0; c < table.size(); ++c)
    table[c] = static_cast<std::uint32_t>(mapCode(*src, *dst, c, f.table()));
  return FinMap(sc, dc, std::move(table));
}

StructValue funActionValue(const Desc& p, const FinMap& f, const StructValue& s) {
  if (!p.isPositive()) throw InputError("the covariant action needs a positive description, got " + p.str());
  auto src = Interp::make(p, f.dom());
  auto dst = Interp::make(p, f.cod());
  return dst->decode(mapCode(*src, *dst, src->encode(s), f.table()));
}

std::optional<RelMapFailure> relMapWitness(const Desc& p, const FinMap& f, const FinMap& g, const Rel& r0,
                                           const Rel& r1, std::uint64_t cap) {
  if (!p.isPositive()) throw InputError("relMapWitness needs a positive description, got " + p.str());
  requireSameElements(*f.dom(), *r0.dom(), "f domain vs R0 domain");
  requireSameElements(*g.dom(), *r0.cod(), "g domain vs R0 codomain");
  requireSameElements(*f.cod(), *r1.dom(), "f codomain vs R1 domain");
  requireSameElements(*g.cod(), *r1.cod(), "g codomain vs R1 codomain");
  for (auto [x, y] : r0.pairs())
    if (!r1.holds(f(x), g(y)))
      return RelMapFailure{true, "R0(" + r0.dom()->label(x) + ", " + r0.cod()->label(y) + ") but not R1(" +
                                     r1.dom()->label(f(x)) + ", " + r1.cod()->label(g(y)) + ")"};
  auto s0 = Interp::make(p, r0.dom());
  auto t0 = Interp::make(p, r0.cod());
  auto s1 = Interp::make(p, r1.dom());
  auto t1 = Interp::make(p, r1.cod());
  s0->requireEnumerable(cap);
  t0->requireEnumerable(cap);
  for (std::uint64_t s = 0; s < s0->size(); ++s)
    for (std::uint64_t t = 0; t < t0->size(); ++t) {
      if (!relatesCodes(*s0, *t0, s, t, r0)) continue;
      const auto fs = mapCode(*s0, *s1, s, f.table());
      const auto gt = mapCode(*t0, *t1, t, g.table());
      if (!relatesCodes(*s1, *t1, fs, gt, r1))
        return RelMapFailure{false, "lifted R0 relates " + s0->render(s0->decode(s)) + " and " +
                                        t0->render(t0->decode(t)) + " but lifted R1 does not relate their images"};
    }
  return std::nullopt;
}

FunctionEquivStrPlus::FunctionEquivStrPlus(const Desc& funDesc, const Bijection& e, std::uint64_t cap)
    : domainAction_(funDesc.domain(), e),
      codomainLift_(funDesc.codomain(), e, cap),
      left_(Interp::make(funDesc, e.dom())),
      right_(Interp::make(funDesc, e.cod())) {
  const std::size_t n = left_->tableSize();
  image_.resize(n);
  for (std::size_t p = 0; p < n; ++p)
    image_[p] = right_->domain().encode(domainAction_.apply(left_->domain().decode(p)));
}

bool FunctionEquivStrPlus::operator()(const StructValue& f, const StructValue& g) const {
  for (std::size_t p = 0; p < image_.size(); ++p)
    if (!codomainLift_.holds(left_->applyCode(f, p), right_->applyCode(g, image_[p]))) return false;
  return true;
}

MaybeEquivStrPrime::MaybeEquivStrPrime(const Desc& maybeDesc, const Bijection& e) : action_(maybeDesc.inner(), e) {}

bool MaybeEquivStrPrime::operator()(const StructValue& s, const StructValue& t) const {
  if (s.is(StructValue::Kind::Nothing)) return t.is(StructValue::Kind::Nothing);
  if (t.is(StructValue::Kind::Nothing)) return false;
  return action_.apply(s.inner()) == t.inner();
}

bool functionEquivStrPlus(const Desc& funDesc, const Bijection& e, const StructValue& f, const StructValue& g) {
  return FunctionEquivStrPlus(funDesc, e)(f, g);
}

bool maybeEquivStrPrime(const Desc& maybeDesc, const Bijection& e, const StructValue& s, const StructValue& t) {
  return MaybeEquivStrPrime(maybeDesc, e)(s, t);
}

}  // namespace reprind
