#include "reprind/sip/transfer.hpp"

#include <algorithm>

#include "reprind/error.hpp"
#include "reprind/structure/interp.hpp"

namespace reprind {

std::string AxiomCounterexample::str() const {
  std::string s;
  for (const auto& [v, val] : assignment) s += (s.empty() ? "" : ", ") + v + " = " + val;
  return s + "; lhs " + lhs + ", rhs " + rhs;
}

bool TransferReport::passed() const {
  if (!structuredEquiv) return false;
  for (const auto& a : axioms)
    if (!a.agree || !a.left.holds || !a.right.holds) return false;
  return true;
}

namespace {

void collectObservers(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Observer) out.push_back(t.name);
  for (const auto& a : t.args) collectObservers(a, out);
}

// Terms are compiled against the instance once. Subterms of positive type
// evaluate to canonical codes, so the hot loop never allocates.
constexpr std::uint64_t kFlatCap = 1 << 24;
constexpr std::size_t kClean = static_cast<std::size_t>(-1);
// values of the last binder evaluated together
constexpr std::size_t kBlock = 1024;

class Evaluator {
 public:
  Evaluator(const Formula& f, const Signature& sig, const StructuredInstance& inst, const Observers& observers)
      : f_(f), inst_(inst) {
    if (!(inst.desc == sig.desc()))
      throw InputError("axiom '" + f.name + "': instance has description " + inst.desc.str() + ", signature " +
                       sig.desc().str());
    root_ = Interp::make(inst.desc, inst.carrier);
    root_->validate(inst.value);
    for (const auto& op : sig.operations()) {
      const Interp* in = root_.get();
      const StructValue* v = &inst.value;
      for (int step : op.path) {
        in = step == 0 ? &in->first() : &in->second();
        v = step == 0 ? &v->first() : &v->second();
      }
      ops_.push_back({in, v});
    }
    std::vector<std::string> used;
    for (const auto& g : f.guards) {
      collectObservers(g.lhs, used);
      collectObservers(g.rhs, used);
    }
    collectObservers(f.conclusion.lhs, used);
    collectObservers(f.conclusion.rhs, used);
    for (const auto& name : used) {
      if (observers_.count(name)) continue;
      auto it = observers.find(name);
      if (it == observers.end()) throw InputError("axiom '" + f.name + "': unknown observer '" + name + "'");
      const ObserverSig* o = sig.findObserver(name);
      const Carrier& dom = o->domain.is(Desc::Kind::Var) ? *inst.carrier : *o->domain.carrier();
      requireSameElements(*it->second.dom(), dom, "observer " + name + " domain");
      requireSameElements(*it->second.cod(), *o->codomain, "observer " + name + " codomain");
      observers_.emplace(name, &it->second);
    }
    for (const auto& g : f.guards) guards_.push_back(equation(g));
    conclusion_ = equation(f.conclusion);
    for (const auto& b : f.binders)
      sizes_.push_back(b.sort.is(Desc::Kind::Var) ? inst.carrier->size() : b.sort.carrier()->size());
    for (auto& g : guards_) prepare(g);
    prepare(conclusion_);
  }

  const std::vector<std::size_t>& sizes() const { return sizes_; }

  /// Every guard and the conclusion run as register programs.
  bool compiled() const {
    if (sizes_.empty() || conclusion_.startAt.empty()) return false;
    for (const auto& g : guards_)
      if (g.startAt.empty()) return false;
    return true;
  }

  /// Visits every value of the last binder, the others fixed. Returns the
  /// first violating value, or its carrier size when there is none.
  std::uint64_t sweep(std::vector<std::uint64_t>& env, AxiomResult& out) const {
    const std::size_t last = env.size() - 1;
    env[last] = 0;
    refresh(conclusion_, env);
    for (const auto& g : guards_) refresh(g, env);
    for (std::uint64_t v0 = 0; v0 < sizes_[last]; v0 += kBlock) {
      const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, sizes_[last] - v0));
      runBlock(conclusion_, v0, len);
      for (const auto& g : guards_) runBlock(g, v0, len);
      for (std::size_t j = 0; j < len; ++j) {
        ++out.assignments;
        bool guarded = true;
        for (const auto& g : guards_)
          if (!blockHolds(g, j)) {
            guarded = false;
            break;
          }
        if (!guarded) continue;
        ++out.guarded;
        if (!blockHolds(conclusion_, j)) {
          env[last] = v0 + j;
          return v0 + j;
        }
      }
    }
    return sizes_[last];
  }

  /// Binder slots from `slot` on have changed.
  void changed(std::size_t slot) const {
    for (const auto& g : guards_) g.dirty = std::min(g.dirty, slot + 1);
    conclusion_.dirty = std::min(conclusion_.dirty, slot + 1);
  }

  bool guardsHold(const std::vector<std::uint64_t>& env) const {
    for (const auto& g : guards_)
      if (!holds(g, env)) return false;
    return true;
  }

  bool conclusionHolds(const std::vector<std::uint64_t>& env) const { return holds(conclusion_, env); }

  AxiomCounterexample describe(const std::vector<std::uint64_t>& env) const {
    AxiomCounterexample c;
    for (std::size_t i = 0; i < env.size(); ++i) {
      const Binder& b = f_.binders[i];
      c.assignment.emplace_back(b.name, b.sort.is(Desc::Kind::Var) ? inst_.carrier->label(env[i])
                                                                   : b.sort.carrier()->label(env[i]));
    }
    from_ = 0;
    c.lhs = conclusion_.lhs.in->render(value(conclusion_.lhs, env));
    c.rhs = conclusion_.rhs.in->render(value(conclusion_.rhs, env));
    return c;
  }

 private:
  struct Node {
    Term::Kind kind;
    std::size_t index = 0;
    InterpPtr in;
    bool positive = false;
    const FinMap* observer = nullptr;
    std::vector<Node> args;
    // operations: the table kind at each argument and the interpretation reached
    std::vector<char> codedStep;
    const Interp* result = nullptr;
    std::uint64_t secondSize = 0;  // pairs
    // fully applied operations with small positive tables: one flat lookup
    const std::vector<std::uint32_t>* flat = nullptr;
    std::vector<std::uint64_t> strides;
    // 1 + the greatest binder slot the term reads, 0 when closed
    std::size_t depth = 0;
    mutable std::uint64_t cache = 0;
  };
  // One node of a positive equation, in registers. Registers 0..k-1 hold
  // the binders; instructions are ordered by depth, so a step reruns only
  // the suffix reading the changed binders.
  enum class Op : std::uint8_t { Const, Flat1, Flat2, FlatN, Walk, Observer, Just, Pair };
  struct Instr {
    Op op;
    std::size_t depth;
    std::uint32_t dst;
    std::uint32_t a = 0, b = 0;
    std::uint64_t k = 0;  // stride of a, pair size of b, or the constant
    const std::uint32_t* table = nullptr;
    const Node* node = nullptr;
    std::vector<std::uint32_t> args;
  };
  struct Eq {
    bool negated = false;
    Node lhs;
    Node rhs;
    // 1 + the least binder slot changed since the last evaluation; 0 forces
    // a full evaluation
    mutable std::size_t dirty = 0;
    std::vector<Instr> program;
    std::vector<std::size_t> startAt;  // first instruction of depth >= d; empty when some subterm is not coded
    std::uint32_t lhsReg = 0, rhsReg = 0;
    mutable std::vector<std::uint64_t> regs;
    // column of each register in `block` when it reads the last binder, else -1
    std::vector<std::int32_t> column;
    mutable std::vector<std::uint64_t> block;
  };
  struct Slot {
    const Interp* interp;
    const StructValue* value;
  };

  InterpPtr interpOf(const Desc& d) {
    const std::string key = d.str();
    auto it = interps_.find(key);
    if (it != interps_.end()) return it->second;
    auto in = Interp::make(d, inst_.carrier);
    interps_.emplace(key, in);
    return in;
  }

  Node compile(const Term& t) {
    Node n;
    n.kind = t.kind;
    n.index = t.index;
    n.in = interpOf(t.type);
    n.positive = t.type.isPositive();
    if (t.kind == Term::Kind::Observer) n.observer = observers_.at(t.name);
    for (const auto& a : t.args) {
      n.args.push_back(compile(a));
      n.depth = std::max(n.depth, n.args.back().depth);
    }
    if (t.kind == Term::Kind::Var) n.depth = t.index + 1;
    if (t.kind == Term::Kind::Op) {
      const Interp* in = ops_[t.index].interp;
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        n.codedStep.push_back(in->codedTables());
        in = &in->codomain();
        if (n.codedStep.back()) break;
      }
      n.result = in;
      if (n.codedStep.size() == n.args.size() && !n.args.empty() && n.codedStep.back()) flatten(t.index, n);
    }
    if (t.kind == Term::Kind::Pair) n.secondSize = n.args[1].in->size();
    return n;
  }

  void flatten(std::size_t op, Node& n) {
    std::vector<std::uint64_t> dims;
    std::uint64_t total = 1;
    const Interp* in = ops_[op].interp;
    for (std::size_t i = 0; i < n.args.size(); ++i) {
      dims.push_back(in->domain().size());
      total = satMul(total, dims.back());
      in = &in->codomain();
    }
    if (total > kFlatCap) return;
    n.strides.assign(dims.size(), 1);
    for (std::size_t i = dims.size() - 1; i-- > 0;) n.strides[i] = n.strides[i + 1] * dims[i + 1];
    auto it = flat_.find(op);
    if (it == flat_.end()) {
      std::vector<std::uint32_t> table;
      table.reserve(total);
      fill(*ops_[op].value, 0, n, table);
      it = flat_.emplace(op, std::move(table)).first;
    }
    n.flat = &it->second;
  }

  void fill(const StructValue& v, std::size_t depth, const Node& n, std::vector<std::uint32_t>& out) const {
    if (depth + 1 == n.codedStep.size()) {
      out.insert(out.end(), v.codes().begin(), v.codes().end());
      return;
    }
    for (const auto& e : v.entries()) fill(e, depth + 1, n, out);
  }

  Eq equation(const Equation& e) {
    Eq q;
    q.negated = e.negated;
    q.lhs = compile(e.lhs);
    q.rhs = compile(e.rhs);
    return q;
  }

  // after the equations have their final addresses
  void prepare(Eq& q) const {
    if (!codedTree(q.lhs) || !codedTree(q.rhs)) return;
    const auto base = static_cast<std::uint32_t>(sizes_.size());
    q.lhsReg = emit(q.lhs, q.program, base);
    q.rhsReg = emit(q.rhs, q.program, base);
    std::stable_sort(q.program.begin(), q.program.end(),
                     [](const Instr& a, const Instr& b) { return a.depth < b.depth; });
    const std::size_t maxDepth = q.program.empty() ? 0 : q.program.back().depth;
    for (std::size_t d = 0, i = 0; d <= maxDepth + 1; ++d) {
      while (i < q.program.size() && q.program[i].depth < d) ++i;
      q.startAt.push_back(i);
    }
    q.regs.assign(base + q.program.size(), 0);
    q.column.assign(q.regs.size(), -1);
    if (base == 0) return;
    std::int32_t columns = 0;
    q.column[base - 1] = columns++;
    for (std::size_t i = q.startAt.size() > base ? q.startAt[base] : q.program.size(); i < q.program.size(); ++i)
      q.column[q.program[i].dst] = columns++;
    q.block.assign(static_cast<std::size_t>(columns) * kBlock, 0);
  }

  static bool codedTree(const Node& n) {
    if (!n.positive) return false;
    for (const auto& a : n.args)
      if (!codedTree(a)) return false;
    return true;
  }

  std::uint32_t emit(const Node& n, std::vector<Instr>& program, std::uint32_t base) const {
    if (n.kind == Term::Kind::Var) return static_cast<std::uint32_t>(n.index);
    Instr ins{Op::Const, n.depth, 0, 0, 0, 0, nullptr, nullptr, {}};
    ins.node = &n;
    for (const auto& a : n.args) ins.args.push_back(emit(a, program, base));
    if (!ins.args.empty()) ins.a = ins.args[0];
    if (ins.args.size() > 1) ins.b = ins.args[1];
    switch (n.kind) {
      case Term::Kind::Lit:
        ins.k = n.index;
        break;
      case Term::Kind::Nothing:
        break;
      case Term::Kind::Op:
        if (n.flat) {
          ins.op = n.args.size() == 1 ? Op::Flat1 : n.args.size() == 2 ? Op::Flat2 : Op::FlatN;
          ins.table = n.flat->data();
          ins.k = n.strides[0];
        } else {
          ins.op = Op::Walk;
        }
        break;
      case Term::Kind::Observer:
        ins.op = Op::Observer;
        break;
      case Term::Kind::Just:
        ins.op = Op::Just;
        break;
      case Term::Kind::Pair:
        ins.op = Op::Pair;
        ins.k = n.secondSize;
        break;
      default:
        break;
    }
    ins.dst = base + static_cast<std::uint32_t>(program.size());
    program.push_back(std::move(ins));
    return program.back().dst;
  }

  std::uint64_t run(const Instr& ins, const std::uint64_t* regs) const {
    switch (ins.op) {
      case Op::Const:
        return ins.k;
      case Op::Flat1:
        return ins.table[regs[ins.a]];
      case Op::Flat2:
        return ins.table[regs[ins.a] * ins.k + regs[ins.b]];
      case Op::FlatN: {
        std::uint64_t at = 0;
        for (std::size_t i = 0; i < ins.args.size(); ++i) at += regs[ins.args[i]] * ins.node->strides[i];
        return ins.table[at];
      }
      case Op::Walk: {
        const Node& n = *ins.node;
        const StructValue* v = ops_[n.index].value;
        for (std::size_t i = 0; i < n.codedStep.size(); ++i) {
          const auto c = regs[ins.args[i]];
          if (n.codedStep[i]) return v->codes()[c];
          v = &v->entries()[c];
        }
        return n.result->encode(*v);
      }
      case Op::Observer:
        return (*ins.node->observer)(regs[ins.a]);
      case Op::Just:
        return 1 + regs[ins.a];
      case Op::Pair:
        return regs[ins.a] * ins.k + regs[ins.b];
    }
    return 0;
  }

  std::uint64_t argCode(const Node& a, const std::vector<std::uint64_t>& env) const {
    return a.positive ? code(a, env) : a.in->encode(value(a, env));
  }

  // Walks the operation's tables; returns the reached value, or sets *coded.
  const StructValue* walk(const Node& n, const std::vector<std::uint64_t>& env, const Interp*& in,
                          std::uint64_t* coded) const {
    const StructValue* v = ops_[n.index].value;
    in = n.result;
    for (std::size_t i = 0; i < n.codedStep.size(); ++i) {
      const auto c = argCode(n.args[i], env);
      if (n.codedStep[i]) {
        *coded = v->codes()[c];
        return nullptr;
      }
      v = &v->entries()[c];
    }
    return v;
  }

  // Subterms whose binders all lie below from_ - 1 keep their cached code.
  std::uint64_t code(const Node& n, const std::vector<std::uint64_t>& env) const {
    if (n.depth < from_ && n.kind != Term::Kind::Var) return n.cache;
    return n.cache = compute(n, env);
  }

  std::uint64_t compute(const Node& n, const std::vector<std::uint64_t>& env) const {
    switch (n.kind) {
      case Term::Kind::Var:
        return env[n.index];
      case Term::Kind::Lit:
        return n.index;
      case Term::Kind::Op: {
        if (n.flat) {
          std::uint64_t at = 0;
          for (std::size_t i = 0; i < n.args.size(); ++i) at += argCode(n.args[i], env) * n.strides[i];
          return (*n.flat)[at];
        }
        const Interp* in = nullptr;
        std::uint64_t c = 0;
        const StructValue* v = walk(n, env, in, &c);
        return v ? in->encode(*v) : c;
      }
      case Term::Kind::Observer:
        return (*n.observer)(code(n.args[0], env));
      case Term::Kind::Nothing:
        return 0;
      case Term::Kind::Just:
        return 1 + code(n.args[0], env);
      case Term::Kind::Pair:
        return code(n.args[0], env) * n.secondSize + code(n.args[1], env);
    }
    return 0;
  }

  StructValue value(const Node& n, const std::vector<std::uint64_t>& env) const {
    if (n.positive) return n.in->decode(code(n, env));
    switch (n.kind) {
      case Term::Kind::Op: {
        const Interp* in = nullptr;
        std::uint64_t c = 0;
        const StructValue* v = walk(n, env, in, &c);
        return v ? *v : in->decode(c);
      }
      case Term::Kind::Just:
        return StructValue::just(value(n.args[0], env));
      case Term::Kind::Pair:
        return StructValue::pair(value(n.args[0], env), value(n.args[1], env));
      default:
        return StructValue::nothing();
    }
  }

  // Brings the registers that do not read the last binder up to date.
  void refresh(const Eq& e, const std::vector<std::uint64_t>& env) const {
    const std::size_t last = env.size() - 1;
    std::uint64_t* regs = e.regs.data();
    const std::size_t from = std::min(e.dirty, last + 1);
    for (std::size_t i = from ? from - 1 : 0; i < last; ++i) regs[i] = env[i];
    const std::size_t begin = from < e.startAt.size() ? e.startAt[from] : e.program.size();
    const std::size_t end = last + 1 < e.startAt.size() ? e.startAt[last + 1] : e.program.size();
    for (std::size_t i = begin; i < end; ++i) regs[e.program[i].dst] = run(e.program[i], regs);
    e.dirty = last + 1;
  }

  // A register for the block: a column, or a scalar repeated.
  struct Operand {
    const std::uint64_t* at;
    std::size_t step;
  };

  Operand operand(const Eq& e, std::uint32_t reg) const {
    const std::int32_t c = e.column[reg];
    if (c < 0) return {&e.regs[reg], 0};
    return {e.block.data() + static_cast<std::size_t>(c) * kBlock, 1};
  }

  // Evaluates the instructions reading the last binder for v0 .. v0+len-1.
  void runBlock(const Eq& e, std::uint64_t v0, std::size_t len) const {
    std::uint64_t* values = e.block.data();
    for (std::size_t j = 0; j < len; ++j) values[j] = v0 + j;
    const std::size_t k = sizes_.size();
    for (std::size_t i = k < e.startAt.size() ? e.startAt[k] : e.program.size(); i < e.program.size(); ++i) {
      const Instr& ins = e.program[i];
      std::uint64_t* dst = e.block.data() + static_cast<std::size_t>(e.column[ins.dst]) * kBlock;
      const Operand a = ins.args.empty() ? Operand{nullptr, 0} : operand(e, ins.a);
      const Operand b = ins.args.size() > 1 ? operand(e, ins.b) : Operand{nullptr, 0};
      switch (ins.op) {
        case Op::Flat1:
          for (std::size_t j = 0; j < len; ++j) dst[j] = ins.table[a.at[j * a.step]];
          break;
        case Op::Flat2:
          if (a.step && b.step)
            for (std::size_t j = 0; j < len; ++j) dst[j] = ins.table[a.at[j] * ins.k + b.at[j]];
          else if (a.step)
            for (std::size_t j = 0; j < len; ++j) dst[j] = ins.table[a.at[j] * ins.k + *b.at];
          else
            for (std::size_t j = 0; j < len; ++j) dst[j] = ins.table[*a.at * ins.k + b.at[j]];
          break;
        case Op::Just:
          for (std::size_t j = 0; j < len; ++j) dst[j] = 1 + a.at[j * a.step];
          break;
        case Op::Pair:
          for (std::size_t j = 0; j < len; ++j) dst[j] = a.at[j * a.step] * ins.k + b.at[j * b.step];
          break;
        default: {
          // one value at a time through the scalar registers
          std::vector<std::uint64_t>& regs = e.regs;
          for (std::size_t j = 0; j < len; ++j) {
            for (auto r : ins.args)
              if (e.column[r] >= 0) regs[r] = e.block[static_cast<std::size_t>(e.column[r]) * kBlock + j];
            dst[j] = run(ins, regs.data());
          }
        }
      }
    }
  }

  bool blockHolds(const Eq& e, std::size_t j) const {
    const Operand l = operand(e, e.lhsReg), r = operand(e, e.rhsReg);
    return (l.at[j * l.step] == r.at[j * r.step]) != e.negated;
  }

  bool holds(const Eq& e, const std::vector<std::uint64_t>& env) const {
    from_ = e.dirty;
    e.dirty = kClean;
    if (!e.startAt.empty()) {
      std::uint64_t* regs = e.regs.data();
      for (std::size_t i = from_ ? from_ - 1 : 0; i < env.size(); ++i) regs[i] = env[i];
      const std::size_t start = from_ < e.startAt.size() ? e.startAt[from_] : e.program.size();
      for (std::size_t i = start; i < e.program.size(); ++i) regs[e.program[i].dst] = run(e.program[i], regs);
      return (regs[e.lhsReg] == regs[e.rhsReg]) != e.negated;
    }
    const bool same = e.lhs.positive ? code(e.lhs, env) == code(e.rhs, env) : value(e.lhs, env) == value(e.rhs, env);
    return same != e.negated;
  }

  const Formula& f_;
  const StructuredInstance& inst_;
  InterpPtr root_;
  std::vector<Slot> ops_;
  std::map<std::string, const FinMap*, std::less<>> observers_;
  std::map<std::string, InterpPtr> interps_;
  std::map<std::size_t, std::vector<std::uint32_t>> flat_;
  std::vector<Eq> guards_;
  Eq conclusion_;
  std::vector<std::size_t> sizes_;
  mutable std::size_t from_ = 0;
};

}  // namespace

AxiomResult evalAxiom(const Formula& f, const Signature& sig, const StructuredInstance& inst,
                      const Observers& observers) {
  Evaluator ev(f, sig, inst, observers);
  AxiomResult out;
  out.axiom = f.name;
  const auto& sizes = ev.sizes();
  for (auto n : sizes)
    if (n == 0) return out;
  const std::size_t k = sizes.size();
  std::vector<std::uint64_t> env(k, 0);
  if (ev.compiled()) {
    for (;;) {
      if (ev.sweep(env, out) < sizes[k - 1]) {
        out.holds = false;
        out.counterexample = ev.describe(env);
        return out;
      }
      std::size_t i = k - 1;
      for (;;) {
        if (i == 0) return out;
        --i;
        if (++env[i] < sizes[i]) break;
        env[i] = 0;
      }
      ev.changed(i);
    }
  }
  for (;;) {
    ++out.assignments;
    if (ev.guardsHold(env)) {
      ++out.guarded;
      if (!ev.conclusionHolds(env)) {
        out.holds = false;
        out.counterexample = ev.describe(env);
        return out;
      }
    }
    std::size_t i = k;
    for (;;) {
      if (i == 0) return out;
      --i;
      if (++env[i] < sizes[i]) break;
      env[i] = 0;
    }
    ev.changed(i);
  }
}

AssignmentResult evalAssignment(const Formula& f, const Signature& sig, const StructuredInstance& inst,
                                const std::vector<std::string>& labels, const Observers& observers) {
  Evaluator ev(f, sig, inst, observers);
  if (labels.size() != f.binders.size())
    throw InputError("axiom '" + f.name + "' binds " + std::to_string(f.binders.size()) + " variable(s), got " +
                     std::to_string(labels.size()));
  std::vector<std::uint64_t> env;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Binder& b = f.binders[i];
    const Carrier& c = b.sort.is(Desc::Kind::Var) ? *inst.carrier : *b.sort.carrier();
    auto at = c.find(labels[i]);
    if (!at) throw InputError("'" + labels[i] + "' is not an element of " + c.name());
    env.push_back(*at);
  }
  AssignmentResult r;
  r.guardsHold = ev.guardsHold(env);
  r.conclusionHolds = ev.conclusionHolds(env);
  r.values = ev.describe(env);
  return r;
}

EquivCheck checkStructuredEquiv(const Desc& d, const Bijection& e, const StructValue& s, const StructValue& t) {
  Interp::make(d, e.dom())->validate(s);
  Interp::make(d, e.cod())->validate(t);
  EquivLift lift(d, e);
  EquivCheck out;
  out.holds = lift.holds(s, t);
  if (!out.holds) out.failure = lift.explainFailure(s, t);
  return out;
}

Observers transportObservers(const Signature& sig, const Observers& observers, const Bijection& e) {
  Observers out;
  for (const auto& [name, map] : observers) {
    const ObserverSig* o = sig.findObserver(name);
    if (!o || !o->domain.is(Desc::Kind::Var)) {
      out.emplace(name, map);
      continue;
    }
    requireSameElements(*map.dom(), *e.dom(), "observer " + name + " vs equivalence");
    std::vector<std::uint32_t> table(e.cod()->size());
    for (std::size_t y = 0; y < table.size(); ++y) table[y] = map(e.backward()(y));
    out.emplace(name, FinMap(e.cod(), map.cod(), std::move(table)));
  }
  return out;
}

Observers quotientObservers(const Signature& sig, const Observers& observers, const Quotient& q) {
  Observers out;
  for (const auto& [name, map] : observers) {
    const ObserverSig* o = sig.findObserver(name);
    if (!o || !o->domain.is(Desc::Kind::Var)) {
      out.emplace(name, map);
      continue;
    }
    requireSameElements(*map.dom(), *q.map.dom(), "observer " + name + " vs quotient");
    std::vector<std::uint32_t> table(q.carrier->size());
    for (std::size_t c = 0; c < table.size(); ++c) table[c] = map(q.partition.representative(c));
    for (std::size_t x = 0; x < map.dom()->size(); ++x) {
      const auto rep = q.partition.representative(q.map(x));
      if (map(x) != table[q.map(x)])
        throw VerdictFailure("observer " + name + " separates related elements " + map.dom()->label(rep) + " and " +
                             map.dom()->label(x));
    }
    out.emplace(name, FinMap(q.carrier, map.cod(), std::move(table)));
  }
  return out;
}

TransferReport transferAxioms(const std::vector<Formula>& axioms, const Signature& sig, const Bijection& e,
                              const StructuredInstance& left, const StructuredInstance& right,
                              const Observers& leftObservers, const std::optional<Observers>& rightObservers) {
  if (!sameElements(*left.carrier, *e.dom()) || !sameElements(*right.carrier, *e.cod()))
    throw CarrierMismatch("transfer: the equivalence runs " + e.dom()->name() + " -> " + e.cod()->name() +
                          ", the instances live over " + left.carrier->name() + " and " + right.carrier->name());
  TransferReport report;
  auto iota = checkStructuredEquiv(sig.desc(), e, left.value, right.value);
  if (!iota.holds)
    throw VerdictFailure("transfer: the instances are not structurally equivalent" +
                         (iota.failure ? ": " + iota.failure->str() : std::string()));
  report.structuredEquiv = true;

  const Observers transported = transportObservers(sig, leftObservers, e);
  const Observers& rightObs = rightObservers ? *rightObservers : transported;
  for (const auto& f : axioms) {
    AxiomTransfer t;
    t.left = evalAxiom(f, sig, left, leftObservers);
    if (!t.left.holds)
      throw VerdictFailure("transfer: axiom '" + f.name + "' does not hold on the source: " +
                           t.left.counterexample->str());
    t.right = evalAxiom(f, sig, right, rightObs);
    t.agree = t.left.holds == t.right.holds;
    if (!t.right.holds) {
      std::string why = "an axiom outside the invariant fragment";
      if (f.usesObservers && rightObservers) {
        for (const auto& [name, map] : transported) {
          auto it = rightObs.find(name);
          if (it != rightObs.end() && !(it->second == map)) why = "observer '" + name + "' does not respect e";
        }
      }
      throw VerdictFailure("transfer: axiom '" + f.name + "' fails on the target (" + why +
                           "): " + t.right.counterexample->str());
    }
    report.axioms.push_back(std::move(t));
  }
  return report;
}

GoalResult replaceGoal(const Bijection& e, std::size_t x1, std::size_t x2) {
  const auto y1 = e.forward()(x1);
  const auto y2 = e.forward()(x2);
  return GoalResult{y1 == y2, e.cod()->label(y1), e.cod()->label(y2)};
}

}  // namespace reprind
