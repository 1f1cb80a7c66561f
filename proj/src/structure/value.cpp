#include "reprind/structure/value.hpp"

namespace reprind {

StructValue StructValue::just(StructValue v) {
  StructValue out(Kind::Just, 0);
  auto n = std::make_shared<Node>();
  n->a = std::move(v);
  out.node_ = std::move(n);
  return out;
}

StructValue StructValue::pair(StructValue a, StructValue b) {
  StructValue out(Kind::Pair, 0);
  auto n = std::make_shared<Node>();
  n->a = std::move(a);
  n->b = std::move(b);
  out.node_ = std::move(n);
  return out;
}

StructValue StructValue::table(std::vector<StructValue> entries) {
  StructValue out(Kind::Table, 0);
  auto n = std::make_shared<Node>();
  n->entries = std::move(entries);
  out.node_ = std::move(n);
  return out;
}

StructValue StructValue::codedTable(std::vector<std::uint32_t> codes) {
  StructValue out(Kind::Table, 0);
  auto n = std::make_shared<Node>();
  n->coded = true;
  n->codes = std::move(codes);
  out.node_ = std::move(n);
  return out;
}

bool operator==(const StructValue& a, const StructValue& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case StructValue::Kind::Point:
    case StructValue::Kind::Const:
      return a.index_ == b.index_;
    case StructValue::Kind::Nothing:
      return true;
    case StructValue::Kind::Just:
      return a.node_ == b.node_ || a.inner() == b.inner();
    case StructValue::Kind::Pair:
      return a.node_ == b.node_ || (a.first() == b.first() && a.second() == b.second());
    case StructValue::Kind::Table:
      if (a.node_ == b.node_) return true;
      if (a.coded() != b.coded()) return false;
      return a.coded() ? a.codes() == b.codes() : a.entries() == b.entries();
  }
  return false;
}

}  // namespace reprind
