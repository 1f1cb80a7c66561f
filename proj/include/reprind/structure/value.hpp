#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace reprind {

/// An element of the interpretation of a description at a carrier.
///
/// Function tables whose codomain is positive are stored as canonical codes
/// of the codomain interpretation instead of as nested values; whether a
/// table is coded is fixed by its description, so equal values always share
/// a representation.
class StructValue {
 public:
  enum class Kind { Point, Const, Pair, Nothing, Just, Table };

  StructValue() : kind_(Kind::Nothing) {}

  static StructValue point(std::uint32_t index) { return StructValue(Kind::Point, index); }
  static StructValue constant(std::uint32_t index) { return StructValue(Kind::Const, index); }
  static StructValue nothing() { return StructValue(); }
  static StructValue just(StructValue v);
  static StructValue pair(StructValue a, StructValue b);
  static StructValue table(std::vector<StructValue> entries);
  static StructValue codedTable(std::vector<std::uint32_t> codes);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  std::uint32_t index() const { return index_; }

  const StructValue& first() const;
  const StructValue& second() const;
  const StructValue& inner() const;

  bool coded() const;
  std::size_t tableSize() const;
  const std::vector<std::uint32_t>& codes() const;
  const std::vector<StructValue>& entries() const;

  friend bool operator==(const StructValue& a, const StructValue& b);

 private:
  struct Node;
  StructValue(Kind k, std::uint32_t index) : kind_(k), index_(index) {}

  Kind kind_;
  std::uint32_t index_ = 0;
  std::shared_ptr<const Node> node_;
};

struct StructValue::Node {
  StructValue a;
  StructValue b;
  bool coded = false;
  std::vector<std::uint32_t> codes;
  std::vector<StructValue> entries;
};

inline const StructValue& StructValue::first() const { return node_->a; }
inline const StructValue& StructValue::second() const { return node_->b; }
inline const StructValue& StructValue::inner() const { return node_->a; }
inline bool StructValue::coded() const { return node_->coded; }
inline std::size_t StructValue::tableSize() const {
  return node_->coded ? node_->codes.size() : node_->entries.size();
}
inline const std::vector<std::uint32_t>& StructValue::codes() const { return node_->codes; }
inline const std::vector<StructValue>& StructValue::entries() const { return node_->entries; }

}  // namespace reprind
