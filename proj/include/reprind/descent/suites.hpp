#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "reprind/descent/descent.hpp"

namespace reprind {

struct SuiteConfig {
  /// Every relation between carriers of size 1..exhaustiveSize is checked.
  std::size_t exhaustiveSize = 2;
  /// Carrier size of the pseudorandom relation sample.
  std::size_t sampleSize = 3;
  std::size_t sampledRelations = 200;
  /// Values drawn per sampled relation when its lifted table is too large.
  std::size_t valueSamples = 12;
  std::uint64_t seed = 2024;
  /// Lifted relations are tabulated when both interpretations have at most
  /// this many values (exhaustive sizes) ...
  std::uint64_t tableCap = 729;
  /// ... or this many values (sampled size).
  std::uint64_t sampleTableCap = 81;
  /// Descent: every self-related value is descended when the source
  /// interpretation has at most this many values, otherwise a sample.
  std::uint64_t descentValueCap = 256;
  std::size_t descentSamples = 24;
  /// Largest carrier for the descent and quotient clauses.
  std::size_t descentSize = 3;
  DescentConfig descent{2'000, false, 2'000, 1};
};

struct ClauseReport {
  std::string clause;  // "1", "2", ...
  std::string name;
  std::string status;  // "pass", "fail" or "trivial"
  std::uint64_t checks = 0;
  std::string counterexample;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::string desc;
  std::vector<ClauseReport> clauses;
  bool passed() const;
};

/// The lifting under test. Overridable so that faults can be injected.
class StructuredRelations {
 public:
  virtual ~StructuredRelations() = default;
  virtual Rel table(const Desc& d, const Rel& r, std::uint64_t cap) const;
  virtual std::function<bool(const StructValue&, const StructValue&)> lift(const Desc& d, const Rel& r) const;
};

const StructuredRelations& defaultLifting();

/// Symmetry, transitivity and descent for an admissible description.
SuiteReport suitabilitySuite(const Desc& d, const SuiteConfig& config = {},
                             const StructuredRelations& lifting = defaultLifting());
/// Reflexivity, reverse transitivity and the quotient condition for a
/// positive description.
SuiteReport positivitySuite(const Desc& p, const SuiteConfig& config = {},
                            const StructuredRelations& lifting = defaultLifting());

}  // namespace reprind
