#include "reprind/cli/spec.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "reprind/error.hpp"

namespace reprind {

namespace {

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

std::string child(const std::string& at, const std::string& key) { return at + "/" + escape(key); }
std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& at, const std::string& msg) {
  throw InputError("spec " + (at.empty() ? "/" : at) + ": " + msg);
}

const Json& field(const Json& j, const std::string& key, const std::string& at) {
  if (!j.contains(key)) fail(at, "missing field '" + key + "'");
  return j.at(key);
}

const std::string& stringAt(const Json& j, const std::string& at) {
  if (!j.is_string()) fail(at, "expected a string, got " + std::string(j.type_name()));
  return j.get_ref<const std::string&>();
}

void requireObject(const Json& j, const std::string& at) {
  if (!j.is_object()) fail(at, "expected an object, got " + std::string(j.type_name()));
}

void requireArray(const Json& j, const std::string& at) {
  if (!j.is_array()) fail(at, "expected an array, got " + std::string(j.type_name()));
}

void onlyKeys(const Json& j, std::initializer_list<const char*> keys, const std::string& at) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) fail(child(at, k), "unknown field");
  }
}

std::size_t labelAt(const Carrier& c, const Json& j, const std::string& at) {
  const auto& s = stringAt(j, at);
  auto i = c.find(s);
  if (!i) fail(at, "'" + s + "' is not an element of " + c.name());
  return *i;
}

FinMap tableAt(const Json& j, const CarrierPtr& dom, const CarrierPtr& cod, const std::string& at) {
  requireArray(j, at);
  if (j.size() < dom->size()) fail(at, "no entry for " + dom->name() + " element '" + dom->label(j.size()) + "'");
  if (j.size() > dom->size())
    fail(at, std::to_string(j.size()) + " entries for the " + std::to_string(dom->size()) + " elements of " +
                 dom->name());
  std::vector<std::uint32_t> t;
  for (std::size_t i = 0; i < j.size(); ++i) t.push_back(static_cast<std::uint32_t>(labelAt(*cod, j[i], child(at, i))));
  return FinMap(dom, cod, std::move(t));
}

Json labels(const FinMap& f) {
  Json out = Json::array();
  for (auto y : f.table()) out.push_back(f.cod()->label(y));
  return out;
}

// InputError from a library call, placed at `at`
template <class F>
auto located(const std::string& at, F&& f) {
  try {
    return f();
  } catch (const CapExceeded&) {
    throw;
  } catch (const InputError& e) {
    fail(at, e.what());
  } catch (const CarrierMismatch& e) {
    fail(at, e.what());
  }
}

}  // namespace

StructValue valueFromJson(const Interp& in, const Json& j, const std::string& at) {
  const Desc& d = in.desc();
  switch (d.kind()) {
    case Desc::Kind::Var:
      return StructValue::point(static_cast<std::uint32_t>(labelAt(*in.base(), j, at)));
    case Desc::Kind::Const:
      return StructValue::constant(static_cast<std::uint32_t>(labelAt(*d.carrier(), j, at)));
    case Desc::Kind::Prod:
      requireArray(j, at);
      if (j.size() != 2) fail(at, "a pair needs 2 entries, got " + std::to_string(j.size()));
      return StructValue::pair(valueFromJson(in.first(), j[0], child(at, 0)),
                               valueFromJson(in.second(), j[1], child(at, 1)));
    case Desc::Kind::Maybe:
      if (j.is_null()) return StructValue::nothing();
      if (d.inner().is(Desc::Kind::Maybe)) {
        if (!j.is_object() || j.size() != 1 || !j.contains("just")) fail(at, "expected null or {\"just\": ...}");
        return StructValue::just(valueFromJson(in.inner(), j.at("just"), child(at, "just")));
      }
      return StructValue::just(valueFromJson(in.inner(), j, at));
    case Desc::Kind::Fun: {
      in.domain().requireEnumerable();
      const std::uint64_t n = in.domain().size();
      requireArray(j, at);
      if (j.size() < n)
        fail(at, "function table has no entry for " + in.domain().render(in.domain().decode(j.size())));
      if (j.size() > n)
        fail(at, "function table has " + std::to_string(j.size()) + " entries for " + std::to_string(n) +
                     " domain values");
      std::vector<StructValue> entries;
      for (std::size_t i = 0; i < n; ++i) entries.push_back(valueFromJson(in.codomain(), j[i], child(at, i)));
      return in.makeTable(std::move(entries));
    }
  }
  fail(at, "unsupported description");
}

Json valueToJson(const Interp& in, const StructValue& v) {
  const Desc& d = in.desc();
  switch (d.kind()) {
    case Desc::Kind::Var:
      return in.base()->label(v.index());
    case Desc::Kind::Const:
      return d.carrier()->label(v.index());
    case Desc::Kind::Prod:
      return Json::array({valueToJson(in.first(), v.first()), valueToJson(in.second(), v.second())});
    case Desc::Kind::Maybe:
      if (v.is(StructValue::Kind::Nothing)) return nullptr;
      if (d.inner().is(Desc::Kind::Maybe)) return Json{{"just", valueToJson(in.inner(), v.inner())}};
      return valueToJson(in.inner(), v.inner());
    case Desc::Kind::Fun: {
      Json out = Json::array();
      for (std::size_t i = 0; i < in.tableSize(); ++i) out.push_back(valueToJson(in.codomain(), in.applyCode(v, i)));
      return out;
    }
  }
  return nullptr;
}

SpecFile parseSpec(const Json& j) {
  requireObject(j, "");
  onlyKeys(j,
           {"carriers", "constants", "desc", "operations", "instances", "relation", "axioms", "observers",
            "transferFrom"},
           "");
  SpecFile spec;

  std::map<std::string, CarrierPtr, std::less<>> carriers;
  const Json& cs = field(j, "carriers", "");
  requireObject(cs, "/carriers");
  for (const auto& [name, ls] : cs.items()) {
    const auto at = child("/carriers", name);
    if (name.empty() || name == "X") fail(at, "'" + name + "' is not a carrier name");
    requireArray(ls, at);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < ls.size(); ++i) labels.push_back(stringAt(ls[i], child(at, i)));
    auto c = located(at, [&] { return makeCarrier(name, labels); });
    carriers.emplace(name, c);
    spec.carriers.push_back(c);
  }
  auto carrierAt = [&](const Json& n, const std::string& at) {
    const auto& name = stringAt(n, at);
    auto it = carriers.find(name);
    if (it == carriers.end()) fail(at, "unknown carrier '" + name + "'");
    return it->second;
  };

  ConstantTable constants;
  if (j.contains("constants")) {
    const Json& ks = j.at("constants");
    requireArray(ks, "/constants");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      auto c = carrierAt(ks[i], child("/constants", i));
      if (!constants.emplace(c->name(), c).second) fail(child("/constants", i), "listed twice");
      spec.constants.push_back(c->name());
    }
  }

  const Desc d = located("/desc", [&] { return parseDesc(stringAt(field(j, "desc", ""), "/desc"), constants); });
  located("/desc", [&] {
    requireAdmissible(d);
    return 0;
  });

  const Json& ops = field(j, "operations", "");
  requireObject(ops, "/operations");
  for (const auto& [name, path] : ops.items()) {
    const auto at = child("/operations", name);
    requireArray(path, at);
    std::vector<int> steps;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (!path[i].is_number_integer() || (path[i] != 0 && path[i] != 1)) fail(child(at, i), "path steps are 0 or 1");
      steps.push_back(path[i].get<int>());
    }
    spec.operations.emplace_back(name, std::move(steps));
  }

  std::vector<ObserverSig> observerSigs;
  const Json noObservers = Json::object();
  const Json& obs = j.contains("observers") ? j.at("observers") : noObservers;
  requireObject(obs, "/observers");
  for (const auto& [name, o] : obs.items()) {
    const auto at = child("/observers", name);
    requireObject(o, at);
    const auto& dom = stringAt(field(o, "domain", at), child(at, "domain"));
    Desc domain;
    if (dom != "X") {
      auto it = constants.find(dom);
      if (it == constants.end()) fail(child(at, "domain"), "'" + dom + "' is neither X nor a constant");
      domain = Desc::constant(it->second);
    }
    const auto& codName = stringAt(field(o, "codomain", at), child(at, "codomain"));
    auto cod = constants.find(codName);
    if (cod == constants.end()) fail(child(at, "codomain"), "'" + codName + "' is not a constant");
    observerSigs.push_back(ObserverSig{name, domain, cod->second});
  }

  const Signature sig = located("/operations", [&] { return Signature(d, spec.operations, constants, observerSigs); });

  const Json& insts = field(j, "instances", "");
  requireObject(insts, "/instances");
  onlyKeys(insts, {"left", "right"}, "/instances");
  auto instance = [&](const char* side) {
    const auto at = child("/instances", side);
    const Json& i = field(insts, side, "/instances");
    requireObject(i, at);
    onlyKeys(i, {"carrier", "value"}, at);
    auto c = carrierAt(field(i, "carrier", at), child(at, "carrier"));
    auto in = Interp::make(d, c);
    return StructuredInstance{c, d, valueFromJson(*in, field(i, "value", at), child(at, "value"))};
  };
  StructuredInstance left = instance("left");
  StructuredInstance right = instance("right");

  const Json& rel = field(j, "relation", "");
  requireObject(rel, "/relation");
  std::optional<Rel> relation;
  if (rel.size() != 1 || !(rel.contains("pairs") || rel.contains("graphOf")))
    fail("/relation", "expected exactly one of 'pairs' or 'graphOf'");
  if (rel.contains("pairs")) {
    const Json& ps = rel.at("pairs");
    requireArray(ps, "/relation/pairs");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto at = child("/relation/pairs", i);
      requireArray(ps[i], at);
      if (ps[i].size() != 2) fail(at, "a related pair needs 2 labels");
      pairs.emplace_back(labelAt(*left.carrier, ps[i][0], child(at, 0)), labelAt(*right.carrier, ps[i][1], child(at, 1)));
    }
    relation = Rel::fromPairs(left.carrier, right.carrier, pairs);
  } else {
    spec.graph = tableAt(rel.at("graphOf"), left.carrier, right.carrier, "/relation/graphOf");
    relation = graphRel(*spec.graph);
  }

  std::vector<Formula> axioms;
  if (j.contains("axioms")) {
    const Json& ax = j.at("axioms");
    requireObject(ax, "/axioms");
    for (const auto& [name, text] : ax.items()) {
      const auto at = child("/axioms", name);
      const auto& t = stringAt(text, at);
      axioms.push_back(located(at, [&] { return parseFormula(t, sig, name); }));
      spec.axiomTexts.emplace_back(name, t);
    }
  }

  Observers leftObs, rightObs;
  for (const auto& o : observerSigs) {
    const auto at = child("/observers", o.name);
    const Json& spec_o = obs.at(o.name);
    if (o.domain.is(Desc::Kind::Var)) {
      onlyKeys(spec_o, {"domain", "codomain", "left", "right"}, at);
      leftObs.emplace(o.name, tableAt(field(spec_o, "left", at), left.carrier, o.codomain, child(at, "left")));
      rightObs.emplace(o.name, tableAt(field(spec_o, "right", at), right.carrier, o.codomain, child(at, "right")));
    } else {
      onlyKeys(spec_o, {"domain", "codomain", "table"}, at);
      auto t = tableAt(field(spec_o, "table", at), o.domain.carrier(), o.codomain, child(at, "table"));
      leftObs.emplace(o.name, t);
      rightObs.emplace(o.name, t);
    }
  }

  std::string from = "auto";
  if (j.contains("transferFrom")) {
    from = stringAt(j.at("transferFrom"), "/transferFrom");
    if (from != "left" && from != "right" && from != "auto") fail("/transferFrom", "expected left, right or auto");
  }

  spec.input = PipelineInput{sig,           std::move(left),    std::move(right),    std::move(*relation),
                             std::move(axioms), std::move(leftObs), std::move(rightObs), from,
                             {}};
  return spec;
}

SpecFile loadSpec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError(path + ": cannot open");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  try {
    return parseSpec(j);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Json serializeSpec(const SpecFile& spec) {
  const PipelineInput& in = spec.input;
  const Signature& sig = in.signature;
  Json j;
  Json cs = Json::object();
  for (const auto& c : spec.carriers) cs[c->name()] = c->labels();
  j["carriers"] = std::move(cs);
  j["constants"] = spec.constants;
  j["desc"] = sig.desc().str();
  Json ops = Json::object();
  for (const auto& op : sig.operations()) ops[op.name] = op.path;
  j["operations"] = std::move(ops);
  auto instance = [&](const StructuredInstance& i) {
    return Json{{"carrier", i.carrier->name()}, {"value", valueToJson(*Interp::make(i.desc, i.carrier), i.value)}};
  };
  j["instances"] = Json{{"left", instance(in.left)}, {"right", instance(in.right)}};
  if (spec.graph) {
    j["relation"] = Json{{"graphOf", labels(*spec.graph)}};
  } else {
    Json ps = Json::array();
    for (const auto& [x, y] : in.relation.pairs())
      ps.push_back(Json::array({in.relation.dom()->label(x), in.relation.cod()->label(y)}));
    j["relation"] = Json{{"pairs", std::move(ps)}};
  }
  Json ax = Json::object();
  for (const auto& [name, text] : spec.axiomTexts) ax[name] = text;
  j["axioms"] = std::move(ax);
  Json obs = Json::object();
  for (const auto& o : sig.observers()) {
    Json e{{"domain", o.domain.is(Desc::Kind::Var) ? "X" : o.domain.carrier()->name()}, {"codomain", o.codomain->name()}};
    if (o.domain.is(Desc::Kind::Var)) {
      e["left"] = labels(in.leftObservers.at(o.name));
      e["right"] = labels(in.rightObservers.at(o.name));
    } else {
      e["table"] = labels(in.leftObservers.at(o.name));
    }
    obs[o.name] = std::move(e);
  }
  j["observers"] = std::move(obs);
  j["transferFrom"] = in.transferFrom;
  return j;
}

SpecFile specFromInput(const PipelineInput& input, const std::vector<CarrierPtr>& constants,
                       std::optional<FinMap> graph) {
  SpecFile spec;
  std::set<std::string> seen;
  auto add = [&](const CarrierPtr& c) {
    if (seen.insert(c->name()).second) spec.carriers.push_back(c);
  };
  for (const auto& c : constants) {
    add(c);
    spec.constants.push_back(c->name());
  }
  add(input.left.carrier);
  add(input.right.carrier);
  for (const auto& op : input.signature.operations()) spec.operations.emplace_back(op.name, op.path);
  for (const auto& f : input.axioms) spec.axiomTexts.emplace_back(f.name, f.str());
  spec.input = input;
  spec.graph = std::move(graph);
  return spec;
}

}  // namespace reprind
