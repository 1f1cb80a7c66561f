#include "reprind/descent/descent.hpp"

#include <random>

#include "reprind/error.hpp"

namespace reprind {

const char* methodName(UniquenessMethod m) {
  switch (m) {
    case UniquenessMethod::FullScan:
      return "full-scan";
    case UniquenessMethod::FactorisedCount:
      return "factorised-count";
    case UniquenessMethod::Sampled:
      return "sampled";
  }
  return "?";
}

struct Descent::Node {
  const Interp* src = nullptr;
  const Interp* dst = nullptr;
  std::unique_ptr<Node> a;
  std::unique_ptr<Node> b;
  std::vector<std::uint32_t> rep;  // fun: quotient domain code ↦ least source domain code
};

namespace {

constexpr std::size_t kTraceChoices = 8;
constexpr std::uint64_t kFactorisationCap = 2'000;

struct DescentOps {
  const std::vector<std::uint32_t>& q;

  std::unique_ptr<Descent::Node> build(const Interp& src, const Interp& dst, const std::string& path,
                                       std::vector<RepresentativeTrace>& trace) const {
    auto n = std::make_unique<Descent::Node>();
    n->src = &src;
    n->dst = &dst;
    if (src.isPositive()) return n;
    switch (src.desc().kind()) {
      case Desc::Kind::Prod:
        n->a = build(src.first(), dst.first(), path + "/0", trace);
        n->b = build(src.second(), dst.second(), path + "/1", trace);
        break;
      case Desc::Kind::Maybe:
        n->a = build(src.inner(), dst.inner(), path + "/just", trace);
        break;
      case Desc::Kind::Fun: {
        const std::size_t ns = src.tableSize();
        const std::size_t nd = dst.tableSize();
        constexpr std::uint32_t unset = ~std::uint32_t{0};
        n->rep.assign(nd, unset);
        for (std::size_t p = 0; p < ns; ++p) {
          const auto pbar = mapCode(src.domain(), dst.domain(), p, q);
          if (n->rep[pbar] == unset) n->rep[pbar] = static_cast<std::uint32_t>(p);
        }
        RepresentativeTrace t{path.empty() ? "/" : path, src.desc().str(), nd, {}};
        for (std::size_t pbar = 0; pbar < nd; ++pbar) {
          if (n->rep[pbar] == unset)
            throw SoundnessError("descent: no representative for " + dst.domain().render(dst.domain().decode(pbar)) +
                                 " in " + src.desc().str());
          if (t.choices.size() < kTraceChoices)
            t.choices.emplace_back(dst.domain().render(dst.domain().decode(pbar)),
                                   src.domain().render(src.domain().decode(n->rep[pbar])));
        }
        trace.push_back(std::move(t));
        n->b = build(src.codomain(), dst.codomain(), path + "/fun", trace);
        break;
      }
      default:
        break;
    }
    return n;
  }

  StructValue descend(const Descent::Node& n, const StructValue& v) const {
    const Interp& src = *n.src;
    const Interp& dst = *n.dst;
    if (src.isPositive()) return dst.decode(mapCode(src, dst, src.encode(v), q));
    switch (src.desc().kind()) {
      case Desc::Kind::Prod:
        return StructValue::pair(descend(*n.a, v.first()), descend(*n.b, v.second()));
      case Desc::Kind::Maybe:
        if (v.is(StructValue::Kind::Nothing)) return v;
        return StructValue::just(descend(*n.a, v.inner()));
      case Desc::Kind::Fun:
        if (src.codedTables()) {
          std::vector<std::uint32_t> codes(n.rep.size());
          for (std::size_t pbar = 0; pbar < n.rep.size(); ++pbar)
            codes[pbar] =
                static_cast<std::uint32_t>(mapCode(src.codomain(), dst.codomain(), v.codes()[n.rep[pbar]], q));
          return StructValue::codedTable(std::move(codes));
        } else {
          std::vector<StructValue> entries;
          entries.reserve(n.rep.size());
          for (auto p : n.rep) entries.push_back(descend(*n.b, v.entries()[p]));
          return StructValue::table(std::move(entries));
        }
      default:
        break;
    }
    return v;
  }
};

}  // namespace

Descent::Descent(Desc d, CarrierPtr x, const Rel& e, DescentConfig config)
    : desc_(std::move(d)),
      base_(std::move(x)),
      equiv_(e),
      config_(config),
      quotient_(::reprind::quotient(base_, e)),
      source_(Interp::make(desc_, base_)),
      target_(Interp::make(desc_, quotient_.carrier)),
      self_(desc_, equiv_),
      graph_(desc_, graphRel(quotient_.map)) {
  requireSameElements(*base_, *e.dom(), "descent carrier vs equivalence");
  std::vector<RepresentativeTrace> trace;
  root_ = DescentOps{quotient_.map.table()}.build(*source_, *target_, "", trace);
  trace_ = std::move(trace);
  if (desc_.is(Desc::Kind::Fun) && source_->domain().size() <= kFactorisationCap) {
    // greatest member of each lifted class, indexed through the bijection
    auto qcm = quotientConditionMap(desc_.domain(), base_, equiv_);
    altChecked_ = true;
    altBijective_ = qcm.bijective;
    if (altBijective_) {
      auto members = qcm.liftedQuotient.partition.members();
      altRep_.resize(qcm.map.cod()->size());
      for (std::size_t c = 0; c < members.size(); ++c) altRep_[qcm.map(c)] = members[c].back();
    }
  }
  if (target_->size() > config_.scanCap && !config_.sampledUniqueness)
    graphDef_ = std::make_unique<RelLift>(desc_, graphRel(quotient_.map), RelLift::Route::Definition);
}

Descent::~Descent() = default;
Descent::Descent(Descent&&) noexcept = default;
Descent& Descent::operator=(Descent&&) noexcept = default;

StructValue Descent::descendValue(const StructValue& s) const {
  return DescentOps{quotient_.map.table()}.descend(*root_, s);
}

DescentResult Descent::run(const StructValue& s) const {
  if (!self_.holds(s, s)) {
    auto why = self_.explainFailure(s, s);
    throw VerdictFailure("descent precondition: value is not related to itself by the lifted equivalence" +
                         (why ? ": " + why->str() : std::string()));
  }
  DescentResult out;
  out.quotientInstance = StructuredInstance{quotient_.carrier, desc_, descendValue(s)};
  out.representativeTrace = trace_;
  const StructValue& sbar = out.quotientInstance.value;

  out.graphWitnessChecked = graph_.holds(s, sbar);
  if (!out.graphWitnessChecked)
    throw SoundnessError("descent: the descended value is not related to its source through the quotient map");

  if (target_->size() <= config_.scanCap) {
    out.uniqueness = UniquenessMethod::FullScan;
    for (std::uint64_t c = 0; c < target_->size(); ++c)
      if (graph_.holds(s, target_->decode(c))) ++out.candidates;
  } else if (config_.sampledUniqueness) {
    out.uniqueness = UniquenessMethod::Sampled;
    out.candidates = 1;
    std::mt19937_64 rng(config_.seed);
    for (std::size_t i = 0; i < config_.uniquenessSamples; ++i) {
      auto v = target_->random(rng);
      if (!(v == sbar) && graph_.holds(s, v)) ++out.candidates;
    }
  } else {
    out.uniqueness = UniquenessMethod::FactorisedCount;
    out.candidates = graphDef_->countCandidates({&s});
  }
  if (out.candidates != 1)
    throw SoundnessError("descent: " + std::to_string(out.candidates) + " candidates related to the source in " +
                         desc_.str() + " (" + methodName(out.uniqueness) + ")");

  if (altChecked_) {
    bool agrees = altBijective_;
    const DescentOps ops{quotient_.map.table()};
    for (std::size_t pbar = 0; pbar < altRep_.size() && agrees; ++pbar)
      agrees = ops.descend(*root_->b, source_->applyCode(s, altRep_[pbar])) == target_->applyCode(sbar, pbar);
    out.factorisationAgrees = agrees;
    if (!agrees) throw SoundnessError("descent: the quotient-condition construction disagrees for " + desc_.str());
  }
  return out;
}

DescentResult descend(const Desc& d, const CarrierPtr& x, const Rel& e, const StructValue& s,
                      const DescentConfig& config) {
  return Descent(d, x, e, config).run(s);
}

QuotientConditionMap quotientConditionMap(const Desc& p, const CarrierPtr& x, const Rel& e, std::uint64_t cap) {
  if (!p.isPositive()) throw InputError("quotient condition map needs a positive description, got " + p.str());
  Quotient q = quotient(x, e);
  auto src = Interp::make(p, x);
  auto dst = Interp::make(p, q.carrier);
  src->requireEnumerable(cap);
  dst->requireEnumerable(cap);
  Rel lifted = RelLift(p, e).table(cap);
  Quotient lq = quotient(lifted.dom(), lifted);
  std::vector<std::uint32_t> table(lq.carrier->size());
  for (std::size_t c = 0; c < table.size(); ++c)
    table[c] = static_cast<std::uint32_t>(mapCode(*src, *dst, lq.partition.representative(c), q.map.table()));
  for (std::size_t v = 0; v < src->size(); ++v)
    if (mapCode(*src, *dst, v, q.map.table()) != table[lq.map(v)])
      throw SoundnessError("quotient condition map is not well defined at " + src->render(src->decode(v)));
  FinMap map(lq.carrier, dst->asCarrier(cap), std::move(table));
  const bool bijective = map.isInjective() && map.isSurjective();
  return QuotientConditionMap{std::move(lq), std::move(map), bijective};
}

}  // namespace reprind
