#pragma once

#include <list>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "reprind/sip/transfer.hpp"

namespace reprind {

using Json = nlohmann::ordered_json;

struct Verdict {
  std::string check;
  bool pass = false;
  std::string detail;
};

/// A machine-readable run report: named sections plus an ordered list of
/// verdicts. Deterministic for a given input; no timing inside.
class Report {
 public:
  Report(std::string command, std::string subject);

  /// References stay valid while further sections are added.
  Json& section(const std::string& name);
  Json& params() { return params_; }
  void check(std::string name, bool pass, std::string detail = {});

  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  bool passed() const;
  /// The verdict named `name`; throws std::out_of_range when absent.
  const Verdict& verdict(const std::string& name) const;

  Json json() const;
  /// One line per verdict, then PASS or FAIL.
  std::string text() const;

 private:
  std::string command_;
  std::string subject_;
  Json params_ = Json::object();
  std::list<std::pair<std::string, Json>> sections_;
  std::vector<Verdict> verdicts_;
};

Json toJson(const AxiomCounterexample& c);
Json toJson(const AxiomResult& r);

}  // namespace reprind
