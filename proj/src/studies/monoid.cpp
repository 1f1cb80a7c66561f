#include "reprind/error.hpp"
#include "reprind/studies/studies.hpp"
#include "words.hpp"

namespace reprind {

namespace {

using Bits = std::vector<std::uint32_t>;  // least significant bit first

const char* kAxioms[][2] = {
    {"plus-assoc", "(forall ((x X) (y X) (z X)) (= (plus x (plus y z)) (plus (plus x y) z)))"},
    {"plus-left-unit", "(forall ((x X)) (= (plus zero x) x))"},
    {"plus-right-unit", "(forall ((x X)) (= (plus x zero) x))"},
    {"plus-comm", "(forall ((x X) (y X)) (= (plus x y) (plus y x)))"},
};

Bits rippleAdd(const Bits& a, const Bits& b) {
  Bits out(a.size());
  std::uint32_t carry = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint32_t s = a[i] + b[i] + carry;
    out[i] = s & 1U;
    carry = s >> 1;
  }
  return out;
}

Bits toBits(std::size_t v, std::size_t width) {
  Bits b(width);
  for (std::size_t i = 0; i < width; ++i) b[i] = (v >> i) & 1U;
  return b;
}

// position of a bit list in lexicographic order, first bit most significant
std::size_t lexIndex(const Bits& b) {
  std::size_t r = 0;
  for (auto bit : b) r = r * 2 + bit;
  return r;
}

std::string renderBits(const Bits& b) {
  std::string s = "[";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s + "]";
}

}  // namespace

MonoidStudy buildMonoidStudy(std::size_t width) {
  if (width < 1 || width > 10) throw InputError("monoid: width must be between 1 and 10");
  const std::size_t size = std::size_t{1} << width;
  auto residues = makeCarrier("Residue", detail::numberLabels(size));
  std::vector<Bits> bits(size);
  std::vector<std::string> labels(size);
  for (std::size_t v = 0; v < size; ++v) {
    const Bits b = toBits(v, width);
    bits[lexIndex(b)] = b;
    labels[lexIndex(b)] = renderBits(b);
  }
  auto binary = makeCarrier("Binary", labels);

  const Desc x = Desc::var();
  const Desc d = Desc::prod(x, Desc::fun(x, Desc::fun(x, x)));
  Signature sig(d, {{"zero", {0}}, {"plus", {1}}});
  std::vector<Formula> axioms;
  for (const auto& [name, text] : kAxioms) axioms.push_back(parseFormula(text, sig, name));

  std::vector<StructValue> residuePlus, binaryPlus;
  for (std::size_t a = 0; a < size; ++a) {
    std::vector<std::uint32_t> r(size), b(size);
    for (std::size_t c = 0; c < size; ++c) {
      r[c] = static_cast<std::uint32_t>((a + c) % size);
      b[c] = static_cast<std::uint32_t>(lexIndex(rippleAdd(bits[a], bits[c])));
    }
    residuePlus.push_back(StructValue::codedTable(std::move(r)));
    binaryPlus.push_back(StructValue::codedTable(std::move(b)));
  }
  std::vector<std::uint32_t> enc(size);
  for (std::size_t v = 0; v < size; ++v) enc[v] = static_cast<std::uint32_t>(lexIndex(toBits(v, width)));

  StructuredInstance residueInstance{residues, d,
                                     StructValue::pair(StructValue::point(0), StructValue::table(std::move(residuePlus)))};
  StructuredInstance binaryInstance{binary, d,
                                    StructValue::pair(StructValue::point(0), StructValue::table(std::move(binaryPlus)))};
  return MonoidStudy{width,
                     residues,
                     binary,
                     std::move(sig),
                     std::move(residueInstance),
                     std::move(binaryInstance),
                     Bijection::fromForward(FinMap(residues, binary, std::move(enc))),
                     std::move(axioms)};
}

MonoidStudyResult runMonoidStudy(std::size_t width, Report& report) {
  const MonoidStudy study = buildMonoidStudy(width);
  report.params()["width"] = width;
  const std::size_t size = study.residues->size();
  MonoidStudyResult res;

  std::vector<Bits> bits(size);
  for (std::size_t i = 0; i < size; ++i) bits[i] = toBits(0, width);
  for (std::size_t v = 0; v < size; ++v) bits[study.encode.forward()(v)] = toBits(v, width);
  auto enc = [&](std::size_t v) { return bits[study.encode.forward()(v)]; };

  res.homomorphism = enc(0) == Bits(width, 0);
  for (std::size_t a = 0; a < size && res.homomorphism; ++a)
    for (std::size_t b = 0; b < size && res.homomorphism; ++b)
      res.homomorphism = enc((a + b) % size) == rippleAdd(enc(a), enc(b));
  report.check("encode is a monoid homomorphism", res.homomorphism);

  const Desc& d = study.signature.desc();
  res.structured = checkStructuredEquiv(d, study.encode, study.residueInstance.value, study.binaryInstance.value);
  report.check("residue and binary monoids are related by encode", res.structured.holds,
               res.structured.failure ? res.structured.failure->str() : "");

  std::string transferError;
  try {
    res.transfer =
        transferAxioms(study.axioms, study.signature, study.encode, study.residueInstance, study.binaryInstance);
  } catch (const VerdictFailure& err) {
    transferError = err.what();
  }
  report.check("monoid axioms transfer", res.transfer && res.transfer->passed(), transferError);

  // the axioms again, on bit lists directly
  const Bits zero(width, 0);
  bool assoc = true, left = true, right = true, comm = true;
  for (const auto& x : bits) {
    left = left && rippleAdd(zero, x) == x;
    right = right && rippleAdd(x, zero) == x;
    for (const auto& y : bits) {
      comm = comm && rippleAdd(x, y) == rippleAdd(y, x);
      for (const auto& z : bits) assoc = assoc && rippleAdd(x, rippleAdd(y, z)) == rippleAdd(rippleAdd(x, y), z);
    }
  }
  res.direct = {{"plus-assoc", assoc}, {"plus-left-unit", left}, {"plus-right-unit", right}, {"plus-comm", comm}};
  res.agrees = res.transfer.has_value();
  Json rows = Json::array();
  if (res.transfer)
    for (const auto& a : res.transfer->axioms) {
      const bool direct = res.direct.at(a.right.axiom);
      res.agrees = res.agrees && direct == a.right.holds;
      rows.push_back(Json{{"name", a.left.axiom}, {"residues", a.left.holds}, {"binary", a.right.holds}, {"direct", direct}});
    }
  report.section("axioms") = std::move(rows);
  report.check("transferred axioms agree with direct evaluation on bit lists", res.agrees);

  Json& ex = report.section("examples");
  if (size >= 4) {
    ex["encode 3"] = study.binary->label(study.encode.forward()(3));
    ex["encode (3+2)"] = study.binary->label(study.encode.forward()(5 % size));
  }
  return res;
}

}  // namespace reprind
