#include "reprind/structure/desc.hpp"

#include <algorithm>
#include <cctype>

#include "reprind/error.hpp"

namespace reprind {

Desc Desc::make(Kind k, CarrierPtr c, const Desc* a, const Desc* b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->carrier = std::move(c);
  if (a) n->a = std::make_shared<const Desc>(*a);
  if (b) n->b = std::make_shared<const Desc>(*b);
  switch (k) {
    case Kind::Var:
    case Kind::Const:
      break;
    case Kind::Prod:
      n->positive = a->isPositive() && b->isPositive();
      n->admissible = a->isAdmissible() && b->isAdmissible();
      n->depth = 1 + std::max(a->depth(), b->depth());
      break;
    case Kind::Fun:
      n->positive = false;
      n->admissible = a->isPositive() && b->isAdmissible();
      n->depth = 1 + std::max(a->depth(), b->depth());
      break;
    case Kind::Maybe:
      n->positive = a->isPositive();
      n->admissible = a->isAdmissible();
      n->depth = 1 + a->depth();
      break;
  }
  return Desc(std::move(n));
}

Desc::Desc() : node_(var().node_) {}

Desc Desc::var() {
  static const Desc v = make(Kind::Var, nullptr, nullptr, nullptr);
  return v;
}

Desc Desc::constant(CarrierPtr k) {
  if (!k) throw InputError("const(...) needs a carrier");
  return make(Kind::Const, std::move(k), nullptr, nullptr);
}

Desc Desc::prod(Desc first, Desc second) { return make(Kind::Prod, nullptr, &first, &second); }
Desc Desc::fun(Desc domain, Desc codomain) { return make(Kind::Fun, nullptr, &domain, &codomain); }
Desc Desc::maybe(Desc inner) { return make(Kind::Maybe, nullptr, &inner, nullptr); }

std::string Desc::str() const {
  switch (kind()) {
    case Kind::Var:
      return "X";
    case Kind::Const:
      return "const(" + carrier()->name() + ")";
    case Kind::Prod:
      return "prod(" + first().str() + "," + second().str() + ")";
    case Kind::Fun:
      return "fun(" + domain().str() + "," + codomain().str() + ")";
    case Kind::Maybe:
      return "maybe(" + inner().str() + ")";
  }
  return {};
}

bool operator==(const Desc& a, const Desc& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Desc::Kind::Var:
      return true;
    case Desc::Kind::Const:
      return a.carrier()->name() == b.carrier()->name() && sameElements(*a.carrier(), *b.carrier());
    case Desc::Kind::Prod:
    case Desc::Kind::Fun:
      return a.first() == b.first() && a.second() == b.second();
    case Desc::Kind::Maybe:
      return a.inner() == b.inner();
  }
  return false;
}

namespace {

class DescParser {
 public:
  DescParser(std::string_view text, const ConstantTable& constants) : text_(text), constants_(constants) {}

  Desc parseAll() {
    Desc d = parse();
    skipSpace();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return d;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("description syntax error at position " + std::to_string(pos_) + ": " + msg + " in \"" +
                     std::string(text_) + "\"");
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skipSpace();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skipSpace();
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '-' ||
            text_[pos_] == '\''))
      ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  Desc parse() {
    const auto start = pos_;
    const std::string word = identifier();
    if (word == "X") return Desc::var();
    if (word == "const") {
      expect('(');
      const std::string name = identifier();
      auto it = constants_.find(name);
      if (it == constants_.end()) {
        pos_ = start;
        fail("unknown constant carrier '" + name + "'");
      }
      expect(')');
      return Desc::constant(it->second);
    }
    if (word == "prod" || word == "fun") {
      expect('(');
      Desc a = parse();
      expect(',');
      Desc b = parse();
      expect(')');
      return word == "prod" ? Desc::prod(std::move(a), std::move(b)) : Desc::fun(std::move(a), std::move(b));
    }
    if (word == "maybe") {
      expect('(');
      Desc a = parse();
      expect(')');
      return Desc::maybe(std::move(a));
    }
    pos_ = start;
    fail("unknown former '" + word + "'");
  }

  std::string_view text_;
  const ConstantTable& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

Desc parseDesc(std::string_view text, const ConstantTable& constants) {
  return DescParser(text, constants).parseAll();
}

std::vector<Desc> admissibleDescs(int maxDepth, const std::vector<CarrierPtr>& constants) {
  // byDepth[d]: descriptions of depth exactly d + 1
  std::vector<std::vector<Desc>> byDepth;
  if (maxDepth < 1) return {};
  byDepth.push_back({Desc::var()});
  for (const auto& k : constants) byDepth[0].push_back(Desc::constant(k));
  for (int d = 1; d < maxDepth; ++d) {
    std::vector<Desc> upTo;
    for (const auto& layer : byDepth) upTo.insert(upTo.end(), layer.begin(), layer.end());
    const auto& top = byDepth.back();
    auto isTop = [&](const Desc& x) { return x.depth() == d; };
    std::vector<Desc> next;
    for (const auto& x : top) next.push_back(Desc::maybe(x));
    for (const auto& a : upTo)
      for (const auto& b : upTo)
        if (isTop(a) || isTop(b)) next.push_back(Desc::prod(a, b));
    for (const auto& a : upTo)
      for (const auto& b : upTo)
        if ((isTop(a) || isTop(b)) && a.isPositive()) next.push_back(Desc::fun(a, b));
    byDepth.push_back(std::move(next));
  }
  std::vector<Desc> out;
  for (const auto& layer : byDepth) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

}  // namespace reprind
