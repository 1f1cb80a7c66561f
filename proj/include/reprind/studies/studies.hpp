#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reprind/studies/pipeline.hpp"

namespace reprind {

// ---------------------------------------------------------------- queues

struct QueueStudyConfig {
  std::size_t alphabet = 2;  // letters a, b, ...
  std::size_t capacity = 3;  // bound on the total number of elements
};

using Word = std::vector<std::uint32_t>;

struct QueueStudy {
  QueueStudyConfig config;
  CarrierPtr letters;  // "A"
  CarrierPtr lists;    // lists of length <= N
  CarrierPtr batched;  // (xs, ys) with |xs| + |ys| <= N
  CarrierPtr sizes;    // "Size": 0..N
  std::vector<Word> listWords;
  std::vector<std::pair<Word, Word>> batchedWords;
  FinMap appendReverse;  // batched -> lists
  PipelineInput input;   // left = batched, right = lists
};

QueueStudy buildQueueStudy(const QueueStudyConfig& cfg);
std::string renderWord(const CarrierPtr& letters, const Word& w);

struct QueueStudyResult {
  PipelineOutcome pipeline;
  /// The least violation of the dequeue/enqueue law on the raw batched side.
  std::optional<AxiomCounterexample> rawCounterexample;
  /// The law at q = ([b,a],[]), enqueuing c, over the alphabet {a,b,c}.
  AssignmentResult paperInstance;
  bool paperInstanceMatches = false;
  bool tiltClosureMatches = false;
  bool listClassesSingletons = false;
};

QueueStudyResult runQueueStudy(const QueueStudyConfig& cfg, Report& report);

// ------------------------------------------------------------- multisets

struct MultisetStudyConfig {
  std::size_t alphabet = 2;
  std::size_t modulus = 2;
  std::size_t listBound = 3;
  /// Entry bound for association lists; 0 means |A|.
  std::size_t entryBound = 0;
};

struct MultisetStudy {
  MultisetStudyConfig config;
  CarrierPtr letters;  // "A"
  CarrierPtr counts;   // "N": Z/m
  CarrierPtr lists;
  CarrierPtr assoc;
  std::vector<std::vector<std::uint32_t>> listCounts;   // count vector of each list
  std::vector<std::vector<std::uint32_t>> assocCounts;  // and of each association list
  PipelineInput input;  // left = lists, right = association lists
};

MultisetStudy buildMultisetStudy(const MultisetStudyConfig& cfg);

/// Count vectors A -> Z/m with pointwise operations.
struct MultisetOracle {
  CarrierPtr carrier;
  StructuredInstance instance;
  /// Code of a count vector in the oracle carrier.
  std::size_t indexOf(const std::vector<std::uint32_t>& counts) const;
  std::size_t modulus = 0;
};

MultisetOracle multisetOracle(const MultisetStudy& study);

struct MultisetStudyResult {
  PipelineOutcome pipeline;
  std::map<std::string, bool> structuredConditions;  // empty, insert, union, count
  /// Least violations of union-assoc and insert-comm on raw bounded lists.
  std::map<std::string, AxiomCounterexample> rawCounterexamples;
  /// The two laws checked on the association-list quotient by direct lookups.
  std::map<std::string, bool> direct;
  bool transferMatchesDirect = false;
  bool leftMatchesOracle = false;
  bool rightMatchesOracle = false;
  std::size_t leftQuotientSize = 0;
  std::size_t rightQuotientSize = 0;
  std::size_t oracleSize = 0;
};

MultisetStudyResult runMultisetStudy(const MultisetStudyConfig& cfg, Report& report);

// -------------------------------------------------------------- matrices

struct MatrixStudyConfig {
  std::size_t rows = 2;
  std::size_t cols = 2;
  std::size_t modulus = 5;
};

struct MatrixStudy {
  MatrixStudyConfig config;
  CarrierPtr fin;  // function tables Fin m -> Fin n -> Z/k
  CarrierPtr vec;  // nested vectors
  std::vector<std::vector<std::uint32_t>> finEntries;  // row-major entries of each fin matrix
  std::vector<std::vector<std::uint32_t>> vecEntries;
  Signature signature;
  StructuredInstance finInstance;
  StructuredInstance vecInstance;
  Bijection equiv;  // fin -> vec
  std::vector<Formula> axioms;
};

MatrixStudy buildMatrixStudy(const MatrixStudyConfig& cfg);

struct MatrixStudyResult {
  EquivCheck structured;
  GoalResult goal;  // addFinMatrix M N = constant 1
  bool transferredAdditionMatches = false;
  std::optional<TransferReport> transfer;
};

MatrixStudyResult runMatrixStudy(const MatrixStudyConfig& cfg, Report& report);

// ---------------------------------------------------------------- monoid

struct MonoidStudy {
  std::size_t width = 2;
  CarrierPtr residues;  // 0 .. 2^w - 1
  CarrierPtr binary;    // bit lists, least significant bit first
  Signature signature;
  StructuredInstance residueInstance;
  StructuredInstance binaryInstance;
  Bijection encode;  // residues -> binary
  std::vector<Formula> axioms;
};

MonoidStudy buildMonoidStudy(std::size_t width);

struct MonoidStudyResult {
  bool homomorphism = false;
  EquivCheck structured;
  std::optional<TransferReport> transfer;
  /// Axioms re-checked on the binary side by direct loops.
  std::map<std::string, bool> direct;
  bool agrees = false;
};

MonoidStudyResult runMonoidStudy(std::size_t width, Report& report);

// ------------------------------------------------------------------ cost

/// A payload with a bind counter.
struct CostValue {
  std::uint64_t value = 0;
  std::uint64_t cost = 0;
  friend bool operator==(const CostValue&, const CostValue&) = default;
};

CostValue costReturn(std::uint64_t v);
/// (x, m) >>= g  =  (y, 1 + m + n)  where g x = (y, n).
template <class F>
CostValue costBind(const CostValue& x, F&& g) {
  CostValue r = g(x.value);
  return CostValue{r.value, 1 + x.cost + r.cost};
}

CostValue fib(std::uint64_t n);
CostValue fibTail(std::uint64_t n);

struct CostStudyResult {
  std::vector<std::pair<CostValue, CostValue>> rows;  // (fib n, fibTail n) for n = 0..maxInput
  bool rawDiffer = false;       // some n with different costs
  bool quotientAgrees = false;  // equal after collapsing the cost component
};

CostStudyResult runCostStudy(std::uint64_t maxInput, Report& report);

}  // namespace reprind
