#include "reprind/structure/interp.hpp"

#include "reprind/error.hpp"

namespace reprind {

std::uint64_t satMul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > Interp::kUnbounded / b) return Interp::kUnbounded;
  return a * b;
}

std::uint64_t satPow(std::uint64_t base, std::uint64_t exp) {
  if (exp == 0) return 1;
  if (base <= 1) return base;
  if (exp == Interp::kUnbounded) return Interp::kUnbounded;
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    out = satMul(out, base);
    if (out == Interp::kUnbounded) break;
  }
  return out;
}

Interp::Interp(Desc d, CarrierPtr base) : desc_(std::move(d)), base_(std::move(base)) {}

InterpPtr Interp::make(const Desc& d, CarrierPtr base) {
  std::shared_ptr<Interp> out(new Interp(d, base));
  switch (d.kind()) {
    case Desc::Kind::Var:
      out->size_ = base->size();
      break;
    case Desc::Kind::Const:
      out->size_ = d.carrier()->size();
      break;
    case Desc::Kind::Prod:
      out->a_ = make(d.first(), base);
      out->b_ = make(d.second(), base);
      out->size_ = satMul(out->a_->size(), out->b_->size());
      break;
    case Desc::Kind::Maybe:
      out->a_ = make(d.inner(), base);
      out->size_ = out->a_->size() == kUnbounded ? kUnbounded : out->a_->size() + 1;
      break;
    case Desc::Kind::Fun:
      out->a_ = make(d.domain(), base);
      out->b_ = make(d.codomain(), base);
      out->size_ = satPow(out->b_->size(), out->a_->size());
      break;
  }
  return out;
}

void Interp::requireEnumerable(std::uint64_t cap) const {
  if (size_ > cap) {
    throw CapExceeded("interpretation of " + desc_.str() + " over '" + base_->name() + "' has " +
                      (size_ == kUnbounded ? std::string("more than 2^64") : std::to_string(size_)) +
                      " values, above the cap of " + std::to_string(cap));
  }
}

std::size_t Interp::tableSize() const {
  if (!desc_.is(Desc::Kind::Fun)) throw SoundnessError("tableSize on a non-function description");
  if (a_->size() > (std::uint64_t{1} << 31))
    throw CapExceeded("function domain " + desc_.domain().str() + " is too large to tabulate");
  return static_cast<std::size_t>(a_->size());
}

StructValue Interp::decode(std::uint64_t code) const {
  if (code >= size_) throw SoundnessError("code out of range for " + desc_.str());
  switch (desc_.kind()) {
    case Desc::Kind::Var:
      return StructValue::point(static_cast<std::uint32_t>(code));
    case Desc::Kind::Const:
      return StructValue::constant(static_cast<std::uint32_t>(code));
    case Desc::Kind::Prod: {
      const auto n = b_->size();
      return StructValue::pair(a_->decode(code / n), b_->decode(code % n));
    }
    case Desc::Kind::Maybe:
      return code == 0 ? StructValue::nothing() : StructValue::just(a_->decode(code - 1));
    case Desc::Kind::Fun: {
      const std::size_t n = tableSize();
      const std::uint64_t radix = b_->size();
      std::vector<std::uint64_t> digits(n);
      for (std::size_t i = n; i-- > 0;) {
        digits[i] = code % radix;
        code /= radix;
      }
      if (codedTables()) {
        std::vector<std::uint32_t> codes(digits.begin(), digits.end());
        return StructValue::codedTable(std::move(codes));
      }
      std::vector<StructValue> entries;
      entries.reserve(n);
      for (auto d : digits) entries.push_back(b_->decode(d));
      return StructValue::table(std::move(entries));
    }
  }
  return {};
}

std::uint64_t Interp::encode(const StructValue& v) const {
  switch (desc_.kind()) {
    case Desc::Kind::Var:
    case Desc::Kind::Const:
      return v.index();
    case Desc::Kind::Prod:
      return a_->encode(v.first()) * b_->size() + b_->encode(v.second());
    case Desc::Kind::Maybe:
      return v.is(StructValue::Kind::Nothing) ? 0 : 1 + a_->encode(v.inner());
    case Desc::Kind::Fun: {
      if (size_ == kUnbounded) throw CapExceeded("cannot encode a value of " + desc_.str() + ": too many tables");
      const std::uint64_t radix = b_->size();
      std::uint64_t code = 0;
      if (v.coded()) {
        for (auto c : v.codes()) code = code * radix + c;
      } else {
        for (const auto& e : v.entries()) code = code * radix + b_->encode(e);
      }
      return code;
    }
  }
  return 0;
}

std::vector<StructValue> Interp::enumerate(std::uint64_t cap) const {
  requireEnumerable(cap);
  std::vector<StructValue> out;
  out.reserve(static_cast<std::size_t>(size_));
  for (std::uint64_t c = 0; c < size_; ++c) out.push_back(decode(c));
  return out;
}

CarrierPtr Interp::asCarrier(std::uint64_t cap) const {
  requireEnumerable(cap);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(size_));
  for (std::uint64_t c = 0; c < size_; ++c) labels.push_back(render(decode(c)));
  return makeCarrier(desc_.str() + "@" + base_->name(), std::move(labels));
}

StructValue Interp::random(std::mt19937_64& rng) const {
  auto below = [&](std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); };
  switch (desc_.kind()) {
    case Desc::Kind::Var:
    case Desc::Kind::Const:
      if (size_ == 0) throw InputError("cannot pick a value of " + desc_.str() + " over an empty carrier");
      return decode(below(size_));
    case Desc::Kind::Prod: {
      auto a = a_->random(rng);
      return StructValue::pair(std::move(a), b_->random(rng));
    }
    case Desc::Kind::Maybe:
      if (below(4) == 0) return StructValue::nothing();
      return StructValue::just(a_->random(rng));
    case Desc::Kind::Fun: {
      const std::size_t n = tableSize();
      if (codedTables()) {
        std::vector<std::uint32_t> codes(n);
        for (auto& c : codes) c = static_cast<std::uint32_t>(below(b_->size()));
        return StructValue::codedTable(std::move(codes));
      }
      std::vector<StructValue> entries;
      entries.reserve(n);
      for (std::size_t i = 0; i < n; ++i) entries.push_back(b_->random(rng));
      return StructValue::table(std::move(entries));
    }
  }
  return {};
}

std::string Interp::render(const StructValue& v) const {
  if (!wellShaped(v)) return "<ill-shaped value for " + desc_.str() + ">";
  return renderChecked(v);
}

std::string Interp::renderChecked(const StructValue& v) const {
  switch (desc_.kind()) {
    case Desc::Kind::Var:
      return base_->label(v.index());
    case Desc::Kind::Const:
      return desc_.carrier()->label(v.index());
    case Desc::Kind::Prod:
      return "(" + a_->renderChecked(v.first()) + ", " + b_->renderChecked(v.second()) + ")";
    case Desc::Kind::Maybe:
      return v.is(StructValue::Kind::Nothing) ? "nothing" : "just " + a_->renderChecked(v.inner());
    case Desc::Kind::Fun: {
      std::string out = "{";
      const std::size_t n = v.tableSize();
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out += "; ";
        out += a_->renderChecked(a_->decode(i)) + " -> " + b_->renderChecked(applyCode(v, i));
      }
      return out + "}";
    }
  }
  return {};
}

bool Interp::wellShaped(const StructValue& v) const {
  try {
    validateAt(v, "");
    return true;
  } catch (const InputError&) {
    return false;
  }
}

void Interp::validate(const StructValue& v) const { validateAt(v, ""); }

void Interp::validateAt(const StructValue& v, const std::string& path) const {
  auto fail = [&](const std::string& msg) {
    throw InputError("value at '" + (path.empty() ? std::string("/") : path) + "' does not fit " + desc_.str() +
                     ": " + msg);
  };
  using K = StructValue::Kind;
  switch (desc_.kind()) {
    case Desc::Kind::Var:
      if (!v.is(K::Point)) fail("expected a carrier element");
      if (v.index() >= base_->size()) fail("element index out of range");
      return;
    case Desc::Kind::Const:
      if (!v.is(K::Const)) fail("expected an element of " + desc_.carrier()->name());
      if (v.index() >= desc_.carrier()->size()) fail("constant index out of range");
      return;
    case Desc::Kind::Prod:
      if (!v.is(K::Pair)) fail("expected a pair");
      a_->validateAt(v.first(), path + "/0");
      b_->validateAt(v.second(), path + "/1");
      return;
    case Desc::Kind::Maybe:
      if (v.is(K::Nothing)) return;
      if (!v.is(K::Just)) fail("expected nothing or just");
      a_->validateAt(v.inner(), path + "/just");
      return;
    case Desc::Kind::Fun: {
      if (!v.is(K::Table)) fail("expected a function table");
      const std::size_t n = tableSize();
      if (v.coded() != codedTables()) fail("table representation does not match the codomain");
      if (v.tableSize() != n) {
        fail("table has " + std::to_string(v.tableSize()) + " entries, domain has " + std::to_string(n) +
             (v.tableSize() < n ? " (missing " + a_->render(a_->decode(v.tableSize())) + ")" : std::string()));
      }
      if (v.coded()) {
        for (std::size_t i = 0; i < n; ++i)
          if (v.codes()[i] >= b_->size()) fail("table code out of range at entry " + std::to_string(i));
      } else {
        for (std::size_t i = 0; i < n; ++i) b_->validateAt(v.entries()[i], path + "/" + std::to_string(i));
      }
      return;
    }
  }
}

StructValue Interp::apply(const StructValue& table, const StructValue& arg) const {
  return applyCode(table, a_->encode(arg));
}

StructValue Interp::applyCode(const StructValue& table, std::uint64_t argCode) const {
  if (table.coded()) return b_->decode(table.codes()[argCode]);
  return table.entries()[argCode];
}

StructValue Interp::makeTable(std::vector<StructValue> entries) const {
  const std::size_t n = tableSize();
  if (entries.size() != n)
    throw InputError("table for " + desc_.str() + " needs " + std::to_string(n) + " entries, got " +
                     std::to_string(entries.size()));
  if (!codedTables()) return StructValue::table(std::move(entries));
  std::vector<std::uint32_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = static_cast<std::uint32_t>(b_->encode(entries[i]));
  return StructValue::codedTable(std::move(codes));
}

bool relatesCodes(const Interp& left, const Interp& right, std::uint64_t a, std::uint64_t b, const Rel& r) {
  switch (left.desc().kind()) {
    case Desc::Kind::Var:
      return r.holds(a, b);
    case Desc::Kind::Const:
      return a == b;
    case Desc::Kind::Prod: {
      const auto nl = left.second().size();
      const auto nr = right.second().size();
      return relatesCodes(left.first(), right.first(), a / nl, b / nr, r) &&
             relatesCodes(left.second(), right.second(), a % nl, b % nr, r);
    }
    case Desc::Kind::Maybe:
      if (a == 0 || b == 0) return a == 0 && b == 0;
      return relatesCodes(left.inner(), right.inner(), a - 1, b - 1, r);
    case Desc::Kind::Fun:
      break;
  }
  throw SoundnessError("relatesCodes on a non-positive description");
}

std::uint64_t mapCode(const Interp& src, const Interp& dst, std::uint64_t code, const std::vector<std::uint32_t>& f) {
  switch (src.desc().kind()) {
    case Desc::Kind::Var:
      return f[code];
    case Desc::Kind::Const:
      return code;
    case Desc::Kind::Prod: {
      const auto n = src.second().size();
      return mapCode(src.first(), dst.first(), code / n, f) * dst.second().size() +
             mapCode(src.second(), dst.second(), code % n, f);
    }
    case Desc::Kind::Maybe:
      return code == 0 ? 0 : 1 + mapCode(src.inner(), dst.inner(), code - 1, f);
    case Desc::Kind::Fun:
      break;
  }
  throw SoundnessError("mapCode on a non-positive description");
}

std::int64_t partialMapCode(const Interp& src, const Interp& dst, std::uint64_t code,
                            const std::vector<std::int64_t>& f) {
  switch (src.desc().kind()) {
    case Desc::Kind::Var:
      return f[code];
    case Desc::Kind::Const:
      return static_cast<std::int64_t>(code);
    case Desc::Kind::Prod: {
      const auto n = src.second().size();
      const auto a = partialMapCode(src.first(), dst.first(), code / n, f);
      if (a < 0) return -1;
      const auto b = partialMapCode(src.second(), dst.second(), code % n, f);
      if (b < 0) return -1;
      return a * static_cast<std::int64_t>(dst.second().size()) + b;
    }
    case Desc::Kind::Maybe: {
      if (code == 0) return 0;
      const auto a = partialMapCode(src.inner(), dst.inner(), code - 1, f);
      return a < 0 ? -1 : a + 1;
    }
    case Desc::Kind::Fun:
      break;
  }
  throw SoundnessError("partialMapCode on a non-positive description");
}

}  // namespace reprind
