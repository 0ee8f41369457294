// Command-line front end.
//
// Exit codes: 0 holds/pass, 1 negative verdict, 2 law violated, 3 input error,
// 4 I/O error, 5 precondition unmet.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "c2ka/comm.hpp"
#include "c2ka/dsl.hpp"
#include "c2ka/factory.hpp"
#include "c2ka/report.hpp"

namespace {

using namespace c2ka;

enum Exit { kHolds = 0, kNegative = 1, kViolation = 2, kInput = 3, kIo = 4, kPrecondition = 5 };

/// Thrown to end a command with a given exit code after output was written.
struct ExitWith {
  int code;
};

struct Common {
  std::string file;
  std::string profile = "strict";
  bool all = false;
  bool unverified = false;
  bool allow_self = false;
  bool par_warns = false;

  ValidationOptions validation() const {
    ValidationOptions v;
    v.enforce_cascade_output = profile == "strict";
    v.checks.collect_all = all;
    v.checks.require_par_commutative = !par_warns;
    return v;
  }
};

ModelDocument load(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return import_json(text);
  return parse_model(text);
}

void print_violations(const AxiomReport& report, std::ostream& os) {
  for (const Violation& v : report.violations) {
    os << "violation: " << v.law << ":";
    for (const auto& [var, value] : v.witness) os << " " << var << "=" << value;
    os << "  (" << v.lhs << " != " << v.rhs << ")\n";
  }
}

AxiomReport validate(const ModelDocument& doc, const ValidationOptions& options) {
  return doc.agents.empty() ? validate_model(doc.model, options)
                            : validate_system(doc.system(), options);
}

/// Refuses models that fail their checks unless --unverified was given.
void require_verified(const ModelDocument& doc, const Common& c) {
  AxiomReport report = validate(doc, c.validation());
  if (report.passed()) return;
  if (c.unverified) {
    std::cerr << "warning: analysing an unverified model (" << report.violations.size()
              << " law violation(s))\n";
    return;
  }
  std::cerr << "error: the model fails its checks; rerun check for details or pass --unverified\n";
  print_violations(report, std::cerr);
  throw ExitWith{kViolation};
}

int cmd_check(const Common& c, bool as_json) {
  const ModelDocument doc = load(c.file);
  const AxiomReport report = validate(doc, c.validation());
  if (as_json) {
    nlohmann::ordered_json j = {{"passed", report.passed()}, {"profile", c.profile}};
    nlohmann::ordered_json violations = nlohmann::ordered_json::array();
    for (const Violation& v : report.violations) {
      nlohmann::ordered_json witness = nlohmann::ordered_json::array();
      for (const auto& [var, value] : v.witness) witness.push_back({var, value});
      violations.push_back({{"law", v.law}, {"witness", witness}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    }
    j["violations"] = violations;
    j["warnings"] = report.warnings;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
    print_violations(report, std::cout);
    std::cout << (report.passed() ? "ok" : "failed") << ": " << report.violations.size()
              << " violation(s) under the " << c.profile << " profile\n";
  }
  return report.passed() ? kHolds : kViolation;
}

int cmd_analyze(const Common& c, const std::string& format) {
  const ModelDocument doc = load(c.file);
  require_verified(doc, c);
  const ReportDocument report =
      ReportDocument::build(doc, {c.validation(), AnalysisOptions{c.allow_self}});
  if (format == "json")
    std::cout << report.to_json();
  else if (format == "dot")
    std::cout << report.to_dot();
  else
    std::cout << report.to_text();
  return kHolds;
}

void print_verdict(const AgentSystem& sys, const std::string& what, const CommVerdict& v, bool as_json) {
  if (as_json) {
    auto j = verdict_json(sys, v);
    j["query"] = what;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << what << ": " << (v.holds ? "holds" : "does not hold") << "\n";
  const auto& sc = sys.model().stim().carrier();
  const auto& kc = sys.model().cka().carrier();
  if (v.stimulus)
    std::cout << "witness: s = " << sc.name(v.stimulus->s) << ", t = " << sc.name(v.stimulus->t) << "\n";
  if (v.direct)
    std::cout << "kinds:" << (v.direct->stimuli ? " stimuli" : "") << (v.direct->environment ? " environment" : "")
              << "\n";
  if (v.path) {
    std::cout << "path: [";
    for (std::size_t i = 0; i < v.path->hops.size(); ++i) std::cout << (i ? ", " : "") << v.path->hops[i];
    std::cout << "]\n";
    for (std::size_t i = 0; i < v.path->kinds.size(); ++i) {
      const EdgeKinds& k = v.path->kinds[i];
      std::cout << "  " << v.path->hops[i] << " -> " << v.path->hops[i + 1] << ":"
                << (k.stimuli ? " stimuli" : "") << (k.environment ? " environment" : "") << "\n";
    }
  }
  if (!v.behaviour_chain.empty()) {
    std::cout << "dependence chain:";
    for (Element e : v.behaviour_chain) std::cout << " " << kc.name(e);
    std::cout << "\n";
  }
}

struct QueryArgs {
  std::vector<std::string> pfc, pfc_direct, stimuli, direct_stimuli, env, direct_env;
  bool connected = false;
  bool json = false;
};

int cmd_query(const Common& c, const QueryArgs& q) {
  const ModelDocument doc = load(c.file);
  require_verified(doc, c);
  const Analysis an(doc.system(), AnalysisOptions{c.allow_self});
  const AgentSystem& sys = an.system();

  auto run = [&](const std::string& name, const std::vector<std::string>& ab, auto query) {
    const CommVerdict v = query(ab[0], ab[1]);
    print_verdict(sys, name + "(" + ab[0] + ", " + ab[1] + ")", v, q.json);
    return v.holds ? kHolds : kNegative;
  };
  if (!q.pfc.empty()) return run("pfc", q.pfc, [&](auto a, auto b) { return an.pfc(a, b); });
  if (!q.pfc_direct.empty())
    return run("pfc_direct", q.pfc_direct, [&](auto a, auto b) { return an.pfc_direct(a, b); });
  if (!q.stimuli.empty()) return run("stimuli", q.stimuli, [&](auto a, auto b) { return an.stimuli(a, b); });
  if (!q.direct_stimuli.empty())
    return run("direct_stimuli", q.direct_stimuli, [&](auto a, auto b) { return an.direct_stimuli(a, b); });
  if (!q.env.empty()) return run("env", q.env, [&](auto a, auto b) { return an.env(a, b); });
  if (!q.direct_env.empty())
    return run("direct_env", q.direct_env, [&](auto a, auto b) { return an.direct_env(a, b); });

  const ConnectivityVerdict v = an.stimuli_connected();
  auto join = [](const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
    return out;
  };
  if (q.json) {
    nlohmann::ordered_json j = {{"query", "connected"}, {"holds", v.holds}};
    if (!v.holds) j["partition"] = {{"part", v.part}, {"rest", v.rest}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "stimuli-connected: " << (v.holds ? "holds" : "does not hold") << "\n";
    if (!v.holds) std::cout << "partition: {" << join(v.part) << "} | {" << join(v.rest) << "}\n";
  }
  return v.holds ? kHolds : kNegative;
}

struct WhatIfArgs {
  std::string source, sink, agent, replace;
  bool json = false;
};

int cmd_whatif(const Common& c, const WhatIfArgs& w) {
  const ModelDocument doc = load(c.file);
  require_verified(doc, c);
  const AgentSystem sys = doc.system();
  const Carrier& kc = sys.model().cka().carrier();
  const Replacement replacement = parse_replacement(w.replace, kc);

  ModificationReport r;
  try {
    r = whatif_replace(sys, w.source, w.sink, w.agent, replacement);
  } catch (const DomainError& e) {
    std::cerr << "precondition unmet: " << e.what() << "\n";
    return kPrecondition;
  }

  const std::string relation = "pfc(" + w.source + ", " + w.sink + ")";
  if (w.json) {
    nlohmann::ordered_json j = {
        {"replacement", w.replace},
        {"clause", r.clause},
        {"claim", to_string(r.claim)},
        {"condition", r.condition ? nlohmann::ordered_json(*r.condition) : nlohmann::ordered_json(nullptr)},
        {"relay", {{"agent", w.agent}, {"old", kc.name(r.old_behaviour)}, {"new", kc.name(r.new_behaviour)}}},
        {"relay_on_every_path", r.relay_on_every_path},
        {"recomputed", r.recomputed ? verdict_json(sys.with_behaviour(sys.index_of(w.agent), r.new_behaviour),
                                                   *r.recomputed)
                                    : nlohmann::ordered_json(nullptr)},
        {"consistent", r.consistent},
        {"status", to_string(r.status)},
        {"note", r.note},
    };
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "replacement: " << w.replace << " (clause " << r.clause << ")\n";
    std::cout << "relay " << w.agent << ": " << kc.name(r.old_behaviour) << " -> " << kc.name(r.new_behaviour)
              << "\n";
    std::cout << "claim: " << to_string(r.claim) << "\n";
    if (r.condition) std::cout << "condition: " << (*r.condition ? "true" : "false") << "\n";
    std::cout << "relay on every path: " << (r.relay_on_every_path ? "yes" : "no") << "\n";
    if (r.recomputed) {
      std::cout << "recomputed " << relation << ": " << (r.recomputed->holds ? "holds" : "does not hold");
      if (r.recomputed->path) {
        std::cout << " via [";
        const auto& hops = r.recomputed->path->hops;
        for (std::size_t i = 0; i < hops.size(); ++i) std::cout << (i ? ", " : "") << hops[i];
        std::cout << "]";
      }
      std::cout << "\n";
    }
    std::cout << "consistent: " << (r.consistent ? "yes" : "no") << "\n";
    std::cout << "status: " << to_string(r.status) << "\n";
    if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  }
  if (r.status == WhatIfStatus::precondition_unmet || !r.recomputed) return kPrecondition;
  return r.recomputed->holds ? kHolds : kNegative;
}

int cmd_convert(const Common& c, const std::string& to) {
  const ModelDocument doc = load(c.file);
  std::cout << (to == "json" ? export_json(doc) : serialize_model(doc));
  return kHolds;
}

int cmd_fixture(const std::string& name) {
  if (name.empty()) {
    for (const auto& n : fixture_names()) std::cout << n << "\n";
    return kHolds;
  }
  std::cout << load_fixture(name).source;
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyse communicating concurrent Kleene algebra models for potential communication"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub, bool analysis) {
    sub->add_option("file", c.file, "Model file (.c2ka text, or .json)")->required();
    sub->add_option("--profile", c.profile, "strict: every law; relaxed: cascade-output only warns")
        ->check(CLI::IsMember({"strict", "relaxed"}));
    sub->add_flag("--all", c.all, "Report every violating instantiation, not one per law");
    sub->add_flag("--par-commutativity-warns", c.par_warns,
                  "Report a non-commutative parallel composition as a warning");
    if (analysis) {
      sub->add_flag("--unverified", c.unverified, "Analyse even if the model fails its checks");
      sub->add_flag("--allow-self", c.allow_self, "Admit A = B for reachability relations (cycles)");
    }
  };

  auto* check = app.add_subcommand("check", "Check every law; exit 2 on a violation");
  add_common(check, false);
  bool check_json = false;
  check->add_flag("--json", check_json, "Machine-readable result");

  auto* analyze = app.add_subcommand("analyze", "Full report: classifications and every relation");
  add_common(analyze, true);
  std::string format = "text";
  auto* fmt = analyze->add_option_group("format");
  fmt->add_flag_callback("--json", [&] { format = "json"; }, "JSON report");
  fmt->add_flag_callback("--text", [&] { format = "text"; }, "Plain-text report (default)");
  fmt->add_flag_callback("--dot", [&] { format = "dot"; }, "Graphviz digraph of direct potential communication");
  fmt->require_option(0, 1);

  auto* query = app.add_subcommand("query", "Evaluate one relation; exit 0 holds, 1 does not");
  add_common(query, true);
  QueryArgs q;
  auto* which = query->add_option_group("relation");
  which->add_option("--pfc", q.pfc, "Potential for communication A ~> B")->expected(2)->type_name("A B");
  which->add_option("--pfc-direct", q.pfc_direct, "Direct potential for communication")->expected(2)->type_name("A B");
  which->add_option("--stimuli", q.stimuli, "Stimuli communication")->expected(2)->type_name("A B");
  which->add_option("--direct-stimuli", q.direct_stimuli, "Direct stimuli communication")->expected(2)->type_name("A B");
  which->add_option("--env", q.env, "Environment communication")->expected(2)->type_name("A B");
  which->add_option("--direct-env", q.direct_env, "Direct environment communication")->expected(2)->type_name("A B");
  which->add_flag("--connected", q.connected, "Stimuli-connectedness of the whole system");
  which->require_option(1);
  query->add_flag("--json", q.json, "Machine-readable verdict");

  auto* whatif = app.add_subcommand("whatif", "Replace a relay agent's behaviour and recompute");
  add_common(whatif, true);
  WhatIfArgs w;
  whatif->add_option("--source", w.source, "Agent A with pfcD(A, C)")->required();
  whatif->add_option("--sink", w.sink, "Agent B with pfc(C, B)")->required();
  whatif->add_option("--agent", w.agent, "Relay agent C")->required();
  whatif->add_option("--replace", w.replace, "seq:d | choice:d | seqstar | inactive | idle | orbit:c | fixed:c")
      ->required();
  whatif->add_flag("--json", w.json, "Machine-readable report");

  auto* convert = app.add_subcommand("convert", "Print the model in canonical text or JSON form");
  convert->add_option("file", c.file, "Model file")->required();
  std::string to = "c2ka";
  convert->add_option("--to", to, "Output form")->check(CLI::IsMember({"c2ka", "json"}));

  auto* fixture = app.add_subcommand("fixture", "List built-in fixtures, or print one");
  std::string fixture_name;
  fixture->add_option("name", fixture_name, "Fixture name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*check) return cmd_check(c, check_json);
    if (*analyze) return cmd_analyze(c, format);
    if (*query) return cmd_query(c, q);
    if (*whatif) return cmd_whatif(c, w);
    if (*convert) return cmd_convert(c, to);
    if (*fixture) return cmd_fixture(fixture_name);
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << c.file << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
    if (!e.expected().empty()) {
      std::cerr << "  expected one of:";
      for (const auto& x : e.expected()) std::cerr << " " << x;
      std::cerr << "\n";
    }
    return kInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
