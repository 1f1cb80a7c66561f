#include "reprind/studies/report.hpp"

#include <stdexcept>

namespace reprind {

Report::Report(std::string command, std::string subject) : command_(std::move(command)), subject_(std::move(subject)) {}

Json& Report::section(const std::string& name) {
  for (auto& [k, v] : sections_)
    if (k == name) return v;
  return sections_.emplace_back(name, Json()).second;
}

void Report::check(std::string name, bool pass, std::string detail) {
  verdicts_.push_back(Verdict{std::move(name), pass, std::move(detail)});
}

bool Report::passed() const {
  for (const auto& v : verdicts_)
    if (!v.pass) return false;
  return true;
}

const Verdict& Report::verdict(const std::string& name) const {
  for (const auto& v : verdicts_)
    if (v.check == name) return v;
  throw std::out_of_range("no verdict named " + name);
}

Json Report::json() const {
  Json j;
  j["command"] = command_;
  j["subject"] = subject_;
  j["params"] = params_;
  for (const auto& [k, v] : sections_) j[k] = v;
  Json vs = Json::array();
  for (const auto& v : verdicts_) {
    Json e;
    e["check"] = v.check;
    e["pass"] = v.pass;
    if (!v.detail.empty()) e["detail"] = v.detail;
    vs.push_back(std::move(e));
  }
  j["verdicts"] = std::move(vs);
  j["passed"] = passed();
  return j;
}

std::string Report::text() const {
  std::string out = command_ + " " + subject_ + "\n";
  for (const auto& v : verdicts_) {
    out += v.pass ? "  PASS  " : "  FAIL  ";
    out += v.check;
    if (!v.detail.empty()) out += ": " + v.detail;
    out += "\n";
  }
  out += passed() ? "PASS\n" : "FAIL\n";
  return out;
}

Json toJson(const AxiomCounterexample& c) {
  Json a = Json::object();
  for (const auto& [v, val] : c.assignment) a[v] = val;
  return Json{{"assignment", a}, {"lhs", c.lhs}, {"rhs", c.rhs}};
}

Json toJson(const AxiomResult& r) {
  Json j{{"holds", r.holds}, {"assignments", r.assignments}, {"guarded", r.guarded}};
  if (r.counterexample) j["counterexample"] = toJson(*r.counterexample);
  return j;
}

}  // namespace reprind
