#pragma once

#include <string>
#include <vector>

#include "reprind/studies/pipeline.hpp"

namespace reprind {

/// A user-defined pipeline input, as read from a JSON spec file.
///
///   {
///     "carriers":   {"<name>": ["<label>", ...], ...},
///     "constants":  ["<carrier name>", ...],
///     "desc":       "<description>",
///     "operations": {"<name>": [<path step>, ...], ...},
///     "instances":  {"left":  {"carrier": "<name>", "value": <value>},
///                    "right": {"carrier": "<name>", "value": <value>}},
///     "relation":   {"pairs": [["<left label>", "<right label>"], ...]}
///                 | {"graphOf": ["<right label>", ...]},
///     "axioms":     {"<name>": "<formula>", ...},
///     "observers":  {"<name>": {"domain": "X", "codomain": "<const>",
///                               "left": [...], "right": [...]}
///                  | {"domain": "<const>", "codomain": "<const>", "table": [...]}},
///     "transferFrom": "left" | "right" | "auto"
///   }
///
/// Values: X and const(K) elements are labels, pairs are two-element arrays,
/// maybe is null or the inner value ({"just": v} when the inner value is
/// itself a maybe), and functions are arrays with one entry per domain value
/// in the canonical enumeration order. Observer and graphOf tables list
/// codomain labels in carrier order.
struct SpecFile {
  std::vector<CarrierPtr> carriers;  // in file order
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, std::vector<int>>> operations;
  PipelineInput input;
  /// Set when the relation was given as a graph.
  std::optional<FinMap> graph;
  std::vector<std::pair<std::string, std::string>> axiomTexts;
};

/// Throws InputError naming the file position (JSON pointer) of the first
/// problem; CapExceeded when a function table is too large to enumerate.
SpecFile parseSpec(const Json& j);
SpecFile loadSpec(const std::string& path);
Json serializeSpec(const SpecFile& spec);

/// Builds a spec from an in-memory input. `constants` lists the carriers
/// referenced as const(K) or as observer codomains.
SpecFile specFromInput(const PipelineInput& input, const std::vector<CarrierPtr>& constants,
                       std::optional<FinMap> graph = std::nullopt);

StructValue valueFromJson(const Interp& in, const Json& j, const std::string& at);
Json valueToJson(const Interp& in, const StructValue& v);

}  // namespace reprind
