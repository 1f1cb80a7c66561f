#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace reprind {

/// A finite enumerated set. Element order is fixed at construction and every
/// downstream enumeration is derived from it.
class Carrier {
 public:
  Carrier(std::string name, std::vector<std::string> labels);

  const std::string& name() const { return name_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws InputError when the label is unknown.
  std::size_t indexOf(std::string_view label) const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using CarrierPtr = std::shared_ptr<const Carrier>;

CarrierPtr makeCarrier(std::string name, std::vector<std::string> labels);

/// Carrier whose labels are "<prefix>0" .. "<prefix>(n-1)".
CarrierPtr rangeCarrier(std::string name, std::size_t n, std::string_view prefix = "");

/// Element-wise equality of two carriers (names are ignored).
bool sameElements(const Carrier& a, const Carrier& b);

/// Throws CarrierMismatch naming `what` when the carriers differ.
void requireSameElements(const Carrier& a, const Carrier& b, std::string_view what);

}  // namespace reprind
