#include "reprind/cli/app.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "reprind/cli/spec.hpp"
#include "reprind/descent/suites.hpp"
#include "reprind/error.hpp"
#include "reprind/studies/studies.hpp"

namespace reprind {

namespace {

using Params = std::map<std::string, std::size_t>;

Params parseParams(const std::vector<std::string>& raw, const Params& defaults) {
  Params out = defaults;
  for (const auto& p : raw) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw InputError("--param '" + p + "': expected key=value");
    const std::string key = p.substr(0, eq), value = p.substr(eq + 1);
    if (!out.count(key)) {
      std::string known;
      for (const auto& [k, v] : defaults) known += (known.empty() ? "" : ", ") + k;
      throw InputError("--param '" + key + "': unknown parameter (known: " + known + ")");
    }
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || value[0] == '-')
      throw InputError("--param '" + key + "': '" + value + "' is not a non-negative integer");
    out[key] = v;
  }
  return out;
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError(path + ": cannot write");
  f << text;
}

void writeJson(const std::string& path, const Json& j) { writeFile(path, j.dump(2) + "\n"); }

struct Study {
  Params defaults;
  std::function<void(const Params&, Report&)> run;
  // a spec file for the study, when it has one
  std::function<SpecFile(const Params&)> spec;
};

const std::map<std::string, Study>& studies() {
  static const std::map<std::string, Study> table{
      {"queues",
       {{{"alphabet", 2}, {"capacity", 3}},
        [](const Params& p, Report& r) { runQueueStudy({p.at("alphabet"), p.at("capacity")}, r); },
        [](const Params& p) {
          const auto s = buildQueueStudy({p.at("alphabet"), p.at("capacity")});
          return specFromInput(s.input, {s.letters, s.sizes}, s.appendReverse);
        }}},
      {"multisets",
       {{{"alphabet", 2}, {"modulus", 2}, {"listBound", 3}, {"entryBound", 0}},
        [](const Params& p, Report& r) {
          runMultisetStudy({p.at("alphabet"), p.at("modulus"), p.at("listBound"), p.at("entryBound")}, r);
        },
        [](const Params& p) {
          const auto s = buildMultisetStudy({p.at("alphabet"), p.at("modulus"), p.at("listBound"), p.at("entryBound")});
          return specFromInput(s.input, {s.letters, s.counts});
        }}},
      {"matrices",
       {{{"rows", 2}, {"cols", 2}, {"modulus", 5}},
        [](const Params& p, Report& r) { runMatrixStudy({p.at("rows"), p.at("cols"), p.at("modulus")}, r); },
        nullptr}},
      {"monoid",
       {{{"width", 2}},
        [](const Params& p, Report& r) { runMonoidStudy(p.at("width"), r); },
        [](const Params& p) {
          const auto s = buildMonoidStudy(p.at("width"));
          PipelineInput in{s.signature, s.residueInstance,  s.binaryInstance, graphRel(s.encode.forward()),
                           s.axioms,    {},                 {},               "left",
                           {}};
          return specFromInput(in, {}, s.encode.forward());
        }}},
      {"cost", {{{"maxInput", 20}}, [](const Params& p, Report& r) { runCostStudy(p.at("maxInput"), r); }, nullptr}},
  };
  return table;
}

struct Output {
  std::string reportPath;
  bool json = false;
};

int finish(const Report& report, const Output& o, std::ostream& out) {
  if (!o.reportPath.empty()) writeJson(o.reportPath, report.json());
  if (o.json)
    out << report.json().dump(2) << "\n";
  else
    out << report.text();
  return report.passed() ? kExitPass : kExitVerdict;
}

Json suiteJson(const SuiteReport& s, Report& report) {
  Json clauses = Json::array();
  for (const auto& c : s.clauses) {
    Json j{{"clause", c.clause}, {"name", c.name}, {"status", c.status}, {"checks", c.checks}};
    if (!c.counterexample.empty()) j["counterexample"] = c.counterexample;
    if (!c.note.empty()) j["note"] = c.note;
    clauses.push_back(std::move(j));
    report.check("clause " + c.clause + " (" + c.name + ")", c.status != "fail",
                 c.status == "fail" ? c.counterexample : c.status == "trivial" ? "trivial" : "");
  }
  return clauses;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Representation independence checks over finite carriers", "reprind"};
  app.require_subcommand(1);
  Output o;

  std::string specPath;
  auto* qer = app.add_subcommand("qer-check", "Structured-relation and QER checks for a spec file");
  qer->add_option("spec", specPath, "JSON spec file")->required();

  auto* pipe = app.add_subcommand("pipeline", "Quotients, induced equivalence and axiom transfer for a spec file");
  pipe->add_option("spec", specPath, "JSON spec file")->required();

  std::string studyName, emitPath;
  std::vector<std::string> params;
  auto* cs = app.add_subcommand("case-study", "Run a built-in case study");
  cs->add_option("name", studyName, "queues, multisets, matrices, monoid or cost")->required();
  cs->add_option("--param", params, "Parameter override key=value");
  cs->add_option("--emit-spec", emitPath, "Write the study as a spec file and exit");

  std::string suiteName, descText;
  std::size_t maxSize = 0;
  std::uint64_t seed = SuiteConfig{}.seed;
  std::vector<std::string> constDefs;
  auto* suite = app.add_subcommand("suite", "Property suites for one description");
  suite->add_option("kind", suiteName, "suitability or positivity")->required()->check(CLI::IsMember({"suitability", "positivity"}));
  suite->add_option("--desc", descText, "Description, e.g. \"fun(X,maybe(X))\"")->required();
  suite->add_option("--max-size", maxSize, "Largest carrier checked exhaustively");
  suite->add_option("--seed", seed, "Seed of the sampled size-3 relations");
  suite->add_option("--const", constDefs, "Constant carrier NAME=a,b,... (default K=k0,k1)");

  for (auto* sub : {qer, pipe, cs, suite}) {
    sub->add_option("--report", o.reportPath, "Write the JSON report to this path");
    sub->add_flag("--json", o.json, "Print the JSON report instead of text");
  }

  std::vector<std::string> argv{"reprind"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::vector<char*> ptrs;
  for (auto& a : argv) ptrs.push_back(a.data());
  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "reprind: " << e.what() << "\n";
    return kExitInput;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    err << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
  };
  try {
    int code = kExitPass;
    if (qer->parsed() || pipe->parsed()) {
      const SpecFile spec = loadSpec(specPath);
      Report report(qer->parsed() ? "qer-check" : "pipeline", specPath);
      if (qer->parsed())
        checkRelation(spec.input, report);
      else
        runPipeline(spec.input, report);
      code = finish(report, o, out);
    } else if (cs->parsed()) {
      auto it = studies().find(studyName);
      if (it == studies().end()) throw InputError("unknown case study '" + studyName + "'");
      const Params p = parseParams(params, it->second.defaults);
      if (!emitPath.empty()) {
        if (!it->second.spec) throw InputError("case study '" + studyName + "' has no spec form");
        writeJson(emitPath, serializeSpec(it->second.spec(p)));
        out << "wrote " << emitPath << "\n";
        return kExitPass;
      }
      Report report("case-study", studyName);
      it->second.run(p, report);
      code = finish(report, o, out);
    } else {
      ConstantTable constants;
      std::vector<std::string> defs = constDefs.empty() ? std::vector<std::string>{"K=k0,k1"} : constDefs;
      for (const auto& def : defs) {
        const auto eq = def.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("--const '" + def + "': expected NAME=a,b,...");
        std::vector<std::string> labels;
        std::string rest = def.substr(eq + 1);
        for (std::size_t at = 0; at <= rest.size();) {
          const auto comma = std::min(rest.find(',', at), rest.size());
          labels.push_back(rest.substr(at, comma - at));
          at = comma + 1;
        }
        constants.emplace(def.substr(0, eq), makeCarrier(def.substr(0, eq), labels));
      }
      const Desc d = parseDesc(descText, constants);
      SuiteConfig cfg;
      cfg.seed = seed;
      if (maxSize) {
        cfg.exhaustiveSize = maxSize;
        cfg.descentSize = maxSize;
      }
      Report report("suite " + suiteName, d.str());
      report.params()["maxSize"] = cfg.exhaustiveSize;
      report.params()["seed"] = cfg.seed;
      const SuiteReport s = suiteName == "suitability" ? suitabilitySuite(d, cfg) : positivitySuite(d, cfg);
      report.section("clauses") = suiteJson(s, report);
      code = finish(report, o, out);
    }
    elapsed();
    return code;
  } catch (const CapExceeded& e) {
    err << "reprind: " << e.what() << "\n";
    return kExitCap;
  } catch (const InputError& e) {
    err << "reprind: " << e.what() << "\n";
    return kExitInput;
  } catch (const CarrierMismatch& e) {
    err << "reprind: " << e.what() << "\n";
    return kExitInput;
  } catch (const VerdictFailure& e) {
    err << "reprind: " << e.what() << "\n";
    return kExitVerdict;
  } catch (const SoundnessError& e) {
    err << "reprind: soundness check failed: " << e.what() << "\n";
    return kExitVerdict;
  }
}

}  // namespace reprind
