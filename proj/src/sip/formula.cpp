#include "reprind/sip/formula.hpp"

#include <cctype>
#include <optional>

#include "reprind/error.hpp"

namespace reprind {

const Desc& componentAt(const Desc& d, const std::vector<int>& path) {
  const Desc* cur = &d;
  for (int step : path) {
    if (!cur->is(Desc::Kind::Prod) || (step != 0 && step != 1))
      throw InputError("operation path leaves the product spine of " + d.str());
    cur = step == 0 ? &cur->first() : &cur->second();
  }
  return *cur;
}

Signature::Signature(Desc d, const std::vector<std::pair<std::string, std::vector<int>>>& operations,
                     ConstantTable constants, std::vector<ObserverSig> observers)
    : desc_(std::move(d)), constants_(std::move(constants)), observers_(std::move(observers)) {
  for (const auto& [name, path] : operations) {
    if (findOperation(name)) throw InputError("duplicate operation '" + name + "'");
    ops_.push_back(Operation{name, path, componentAt(desc_, path)});
  }
  for (const auto& o : observers_) {
    if (findOperation(o.name)) throw InputError("observer '" + o.name + "' clashes with an operation");
    if (!o.domain.is(Desc::Kind::Var) && !o.domain.is(Desc::Kind::Const))
      throw InputError("observer '" + o.name + "' must be defined on X or on a constant carrier");
    auto it = constants_.find(o.codomain->name());
    if (it == constants_.end())
      constants_.emplace(o.codomain->name(), o.codomain);
    else if (!sameElements(*it->second, *o.codomain))
      throw InputError("observer '" + o.name + "' codomain clashes with constant " + o.codomain->name());
  }
}

const Operation* Signature::findOperation(std::string_view name) const {
  for (const auto& op : ops_)
    if (op.name == name) return &op;
  return nullptr;
}

const ObserverSig* Signature::findObserver(std::string_view name) const {
  for (const auto& o : observers_)
    if (o.name == name) return &o;
  return nullptr;
}

std::string Term::str() const {
  auto app = [&](const std::string& head) {
    std::string s = "(" + head;
    for (const auto& a : args) s += " " + a.str();
    return s + ")";
  };
  switch (kind) {
    case Kind::Var:
      return name;
    case Kind::Lit:
      return "(lit " + carrier->name() + " " + name + ")";
    case Kind::Op:
      return args.empty() ? name : app(name);
    case Kind::Observer:
      return app(name);
    case Kind::Nothing:
      return "nothing";
    case Kind::Just:
      return app("just");
    case Kind::Pair:
      return app("pair");
  }
  return "?";
}

std::string Equation::str() const {
  return std::string(negated ? "(!= " : "(= ") + lhs.str() + " " + rhs.str() + ")";
}

std::string Formula::str() const {
  std::string body = conclusion.str();
  if (!guards.empty()) {
    std::string g;
    for (const auto& e : guards) g += (g.empty() ? "" : " ") + e.str();
    body = "(=> (" + g + ") " + body + ")";
  }
  if (binders.empty()) return body;
  std::string bs;
  for (const auto& b : binders)
    bs += (bs.empty() ? "(" : " (") + b.name + " " + (b.sort.is(Desc::Kind::Var) ? "X" : b.sort.carrier()->name()) + ")";
  return "(forall (" + bs + ") " + body + ")";
}

namespace {

struct SExpr {
  bool atom = true;
  std::string text;
  std::size_t pos = 0;
  std::vector<SExpr> items;
};

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  SExpr read() {
    SExpr e = next();
    skip();
    if (i_ != s_.size()) fail("trailing input", i_);
    return e;
  }

  [[noreturn]] static void fail(const std::string& what, std::size_t pos) {
    throw InputError("formula: " + what + " at offset " + std::to_string(pos));
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  SExpr next() {
    skip();
    if (i_ == s_.size()) fail("unexpected end of input", i_);
    SExpr e;
    e.pos = i_;
    if (s_[i_] == ')') fail("unexpected ')'", i_);
    if (s_[i_] == '(') {
      e.atom = false;
      ++i_;
      for (;;) {
        skip();
        if (i_ == s_.size()) fail("unclosed '('", e.pos);
        if (s_[i_] == ')') {
          ++i_;
          return e;
        }
        e.items.push_back(next());
      }
    }
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')')
      e.text += s_[i_++];
    return e;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

// Thrown when a term's type can only be fixed by its surroundings.
struct NeedsContext {
  std::size_t pos;
};

class Builder {
 public:
  Builder(const Signature& sig, std::vector<Binder>& binders) : sig_(sig), binders_(binders) {}

  Term build(const SExpr& e, const Desc* expected) {
    Term t = e.atom ? atom(e, expected) : list(e, expected);
    if (expected && !(t.type == *expected))
      Reader::fail("type mismatch: expected " + expected->str() + ", got " + t.type.str(), e.pos);
    return t;
  }

  Equation equation(const SExpr& e, bool allowNegated) {
    if (e.atom || e.items.size() != 3 || !e.items[0].atom ||
        (e.items[0].text != "=" && !(allowNegated && e.items[0].text == "!=")))
      Reader::fail(allowNegated ? "expected (= t t) or (!= t t)" : "expected (= t t)", e.pos);
    Equation eq;
    eq.negated = e.items[0].text == "!=";
    try {
      eq.lhs = build(e.items[1], nullptr);
      eq.rhs = build(e.items[2], &eq.lhs.type);
    } catch (const NeedsContext&) {
      try {
        eq.rhs = build(e.items[2], nullptr);
      } catch (const NeedsContext& nc) {
        Reader::fail("cannot determine the type of either side", nc.pos);
      }
      eq.lhs = build(e.items[1], &eq.rhs.type);
    }
    return eq;
  }

  bool usedObservers = false;

 private:
  std::optional<std::size_t> binder(const std::string& name) const {
    for (std::size_t i = 0; i < binders_.size(); ++i)
      if (binders_[i].name == name) return i;
    return std::nullopt;
  }

  Term literal(const std::string& label, const CarrierPtr& k) {
    Term t;
    t.kind = Term::Kind::Lit;
    t.name = label;
    t.carrier = k;
    t.index = k->indexOf(label);
    t.type = Desc::constant(k);
    return t;
  }

  Term atom(const SExpr& e, const Desc* expected) {
    if (auto b = binder(e.text)) {
      Term t;
      t.kind = Term::Kind::Var;
      t.name = e.text;
      t.index = *b;
      t.type = binders_[*b].sort;
      return t;
    }
    if (const auto* op = sig_.findOperation(e.text)) return operation(*op, e, expected);
    if (e.text == "nothing") {
      if (!expected) throw NeedsContext{e.pos};
      if (!expected->is(Desc::Kind::Maybe)) Reader::fail("nothing used at type " + expected->str(), e.pos);
      Term t;
      t.kind = Term::Kind::Nothing;
      t.type = *expected;
      return t;
    }
    if (expected && expected->is(Desc::Kind::Const)) {
      if (!expected->carrier()->find(e.text))
        Reader::fail("'" + e.text + "' is not an element of " + expected->carrier()->name(), e.pos);
      return literal(e.text, expected->carrier());
    }
    std::vector<CarrierPtr> owners;
    for (const auto& [name, k] : sig_.constants())
      if (k->find(e.text)) owners.push_back(k);
    if (owners.empty()) Reader::fail("unknown symbol '" + e.text + "'", e.pos);
    if (owners.size() > 1 && !expected) throw NeedsContext{e.pos};
    return literal(e.text, owners.front());
  }

  Term operation(const Operation& op, const SExpr& e, const Desc* expected) {
    (void)expected;
    Term t;
    t.kind = Term::Kind::Op;
    t.name = op.name;
    t.index = static_cast<std::size_t>(&op - sig_.operations().data());
    Desc type = op.type;
    const std::size_t nargs = e.atom ? 0 : e.items.size() - 1;
    for (std::size_t i = 0; i < nargs; ++i) {
      if (!type.is(Desc::Kind::Fun))
        Reader::fail("operation '" + op.name + "' takes " + std::to_string(i) + " argument(s)", e.pos);
      Desc dom = type.domain();
      t.args.push_back(build(e.items[i + 1], &dom));
      type = Desc(type.codomain());
    }
    t.type = type;
    return t;
  }

  Term list(const SExpr& e, const Desc* expected) {
    if (e.items.empty() || !e.items[0].atom) Reader::fail("expected an operator", e.pos);
    const std::string& head = e.items[0].text;
    auto arity = [&](std::size_t n) {
      if (e.items.size() != n + 1) Reader::fail("'" + head + "' takes " + std::to_string(n) + " argument(s)", e.pos);
    };
    if (!binder(head))
      if (const auto* op = sig_.findOperation(head)) return operation(*op, e, expected);
    if (const auto* o = sig_.findObserver(head)) {
      arity(1);
      usedObservers = true;
      Term t;
      t.kind = Term::Kind::Observer;
      t.name = head;
      t.args.push_back(build(e.items[1], &o->domain));
      t.type = Desc::constant(o->codomain);
      return t;
    }
    if (head == "lit") {
      arity(2);
      if (!e.items[1].atom || !e.items[2].atom) Reader::fail("expected (lit K label)", e.pos);
      auto it = sig_.constants().find(e.items[1].text);
      if (it == sig_.constants().end()) Reader::fail("unknown constant '" + e.items[1].text + "'", e.items[1].pos);
      if (!it->second->find(e.items[2].text))
        Reader::fail("'" + e.items[2].text + "' is not an element of " + e.items[1].text, e.items[2].pos);
      return literal(e.items[2].text, it->second);
    }
    if (head == "just") {
      arity(1);
      if (expected && !expected->is(Desc::Kind::Maybe)) Reader::fail("just used at type " + expected->str(), e.pos);
      Term t;
      t.kind = Term::Kind::Just;
      t.args.push_back(build(e.items[1], expected ? &expected->inner() : nullptr));
      t.type = Desc::maybe(t.args[0].type);
      return t;
    }
    if (head == "pair") {
      arity(2);
      if (expected && !expected->is(Desc::Kind::Prod)) Reader::fail("pair used at type " + expected->str(), e.pos);
      Term t;
      t.kind = Term::Kind::Pair;
      t.args.push_back(build(e.items[1], expected ? &expected->first() : nullptr));
      t.args.push_back(build(e.items[2], expected ? &expected->second() : nullptr));
      t.type = Desc::prod(t.args[0].type, t.args[1].type);
      return t;
    }
    Reader::fail("unknown operator '" + head + "'", e.items[0].pos);
  }

  const Signature& sig_;
  std::vector<Binder>& binders_;
};

bool isHead(const SExpr& e, std::string_view head) {
  return !e.atom && !e.items.empty() && e.items[0].atom && e.items[0].text == head;
}

}  // namespace

Formula parseFormula(std::string_view text, const Signature& sig, std::string name) {
  SExpr root = Reader(text).read();
  Formula f;
  f.name = std::move(name);
  const SExpr* body = &root;
  if (isHead(root, "forall")) {
    if (root.items.size() != 3 || root.items[1].atom) Reader::fail("expected (forall (binders) body)", root.pos);
    for (const auto& b : root.items[1].items) {
      if (b.atom || b.items.size() != 2 || !b.items[0].atom || !b.items[1].atom)
        Reader::fail("expected (name sort)", b.pos);
      const std::string& v = b.items[0].text;
      const std::string& sort = b.items[1].text;
      for (const auto& prev : f.binders)
        if (prev.name == v) Reader::fail("variable '" + v + "' bound twice", b.pos);
      if (sig.findOperation(v) || sig.findObserver(v) || v == "nothing" || v == "lit")
        Reader::fail("variable '" + v + "' shadows a signature symbol", b.pos);
      if (sort == "X") {
        f.binders.push_back({v, Desc::var()});
      } else {
        auto it = sig.constants().find(sort);
        if (it == sig.constants().end()) Reader::fail("unknown sort '" + sort + "'", b.items[1].pos);
        f.binders.push_back({v, Desc::constant(it->second)});
      }
    }
    body = &root.items[2];
  }
  Builder builder(sig, f.binders);
  if (isHead(*body, "=>")) {
    if (body->items.size() != 3 || body->items[1].atom) Reader::fail("expected (=> (guards) (= t t))", body->pos);
    for (const auto& g : body->items[1].items) f.guards.push_back(builder.equation(g, true));
    f.conclusion = builder.equation(body->items[2], false);
  } else {
    f.conclusion = builder.equation(*body, false);
  }
  f.usesObservers = builder.usedObservers;
  return f;
}

}  // namespace reprind
