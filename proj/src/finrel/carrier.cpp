#include "reprind/finrel/carrier.hpp"

#include "reprind/error.hpp"

namespace reprind {

Carrier::Carrier(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(labels_[i], i);
    if (!inserted) {
      throw InputError("carrier '" + name_ + "': duplicate label '" + labels_[i] + "' at positions " +
                       std::to_string(it->second) + " and " + std::to_string(i));
    }
  }
}

std::optional<std::size_t> Carrier::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Carrier::indexOf(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw InputError("carrier '" + name_ + "' has no element '" + std::string(label) + "'");
}

CarrierPtr makeCarrier(std::string name, std::vector<std::string> labels) {
  return std::make_shared<const Carrier>(std::move(name), std::move(labels));
}

CarrierPtr rangeCarrier(std::string name, std::size_t n, std::string_view prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return makeCarrier(std::move(name), std::move(labels));
}

bool sameElements(const Carrier& a, const Carrier& b) {
  return &a == &b || a.labels() == b.labels();
}

void requireSameElements(const Carrier& a, const Carrier& b, std::string_view what) {
  if (!sameElements(a, b)) {
    throw CarrierMismatch(std::string(what) + ": carrier '" + a.name() + "' (" + std::to_string(a.size()) +
                          " elements) does not match '" + b.name() + "' (" + std::to_string(b.size()) +
                          " elements)");
  }
}

}  // namespace reprind
