#pragma once

#include "reprind/finrel/carrier.hpp"
#include "reprind/structure/desc.hpp"
#include "reprind/structure/value.hpp"

namespace reprind {

/// A carrier together with a structure on it.
struct StructuredInstance {
  CarrierPtr carrier;
  Desc desc;
  StructValue value;
};

}  // namespace reprind
