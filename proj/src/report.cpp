#include "c2ka/report.hpp"

#include <algorithm>
#include <sstream>

namespace c2ka {

namespace {

using Json = nlohmann::ordered_json;

Json names(const Carrier& c, const std::vector<Element>& elements) {
  Json out = Json::array();
  for (Element e : elements) out.push_back(c.name(e));
  return out;
}

Json kinds_json(const EdgeKinds& k) {
  Json out = Json::array();
  if (k.stimuli) out.push_back("stimuli");
  if (k.environment) out.push_back("environment");
  return out;
}

Json axioms_json(const AxiomReport& report) {
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    Json witness = Json::array();
    for (const auto& [var, value] : v.witness) witness.push_back({var, value});
    violations.push_back({{"law", v.law}, {"witness", witness}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  }
  return {{"passed", report.passed()}, {"violations", violations}, {"warnings", report.warnings}};
}

/// relation[a][b] for every ordered pair the relation is defined on.
template <class F>
Json matrix(const AgentSystem& sys, bool diagonal, F&& entry) {
  Json out = Json::object();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    Json row = Json::object();
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (i != j || diagonal) row[sys.name(j)] = entry(sys.name(i), sys.name(j));
    out[sys.name(i)] = std::move(row);
  }
  return out;
}

std::string list(const Json& items) {
  if (items.empty()) return "none";
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item.get<std::string>();
  }
  return out;
}

std::string braces(const Json& items) { return "{" + (items.empty() ? "" : list(items)) + "}"; }

std::string path_text(const Json& v) {
  const Json& hops = v.at("path");
  const Json& kinds = v.at("kinds");
  std::string out = hops.at(0).get<std::string>();
  for (std::size_t i = 1; i < hops.size(); ++i) {
    std::string label;
    for (const auto& k : kinds.at(i - 1)) label += (label.empty() ? "" : ",") + k.get<std::string>().substr(0, 1);
    out += " -[" + label + "]-> " + hops.at(i).get<std::string>();
  }
  return out;
}

std::string quote(const std::string& id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json verdict_json(const AgentSystem& sys, const CommVerdict& v) {
  const C2kaModel& m = sys.model();
  Json out = {{"holds", v.holds}};
  if (v.stimulus)
    out["witness"] = {{"s", m.stim().carrier().name(v.stimulus->s)},
                      {"t", m.stim().carrier().name(v.stimulus->t)}};
  if (v.direct) out["kinds"] = kinds_json(*v.direct);
  if (v.path) {
    out["path"] = v.path->hops;
    Json kinds = Json::array();
    for (const auto& k : v.path->kinds) kinds.push_back(kinds_json(k));
    out["kinds"] = std::move(kinds);
  }
  if (!v.behaviour_chain.empty()) out["chain"] = names(m.cka().carrier(), v.behaviour_chain);
  return out;
}

ReportDocument ReportDocument::build(const ModelDocument& doc, const ReportOptions& options) {
  if (doc.agents.empty()) throw StructuralError("the model declares no agents to analyse");
  const AgentSystem sys = doc.system();
  const C2kaModel& m = sys.model();
  const Carrier& sc = m.stim().carrier();
  const Carrier& kc = m.cka().carrier();
  const AxiomReport axioms = validate_system(sys, options.validation);
  const Analysis an(sys, options.analysis);

  Json agents = Json::array();
  for (const Agent& a : sys.agents()) agents.push_back({{"name", a.name}, {"behaviour", kc.name(a.behaviour)}});

  Json warnings = axioms.warnings;
  if (kc.size() <= 2)
    warnings.push_back("behaviour carrier has at most two elements; no agent can change another");

  Json behaviours = Json::array();
  for (Element a = 0; a < kc.size(); ++a)
    behaviours.push_back({{"name", kc.name(a)},
                          {"orbit", names(kc, orbit(m, a))},
                          {"strong_orbit", names(kc, strong_orbit(m, a))},
                          {"fixed_point", is_fixed_point_behaviour(m, a)}});

  const bool self = options.analysis.allow_self;
  auto v = [&](CommVerdict verdict) { return verdict_json(sys, verdict); };
  Json relations = {
      {"direct_stimuli", matrix(sys, false, [&](auto a, auto b) { return v(an.direct_stimuli(a, b)); })},
      {"stimuli", matrix(sys, self, [&](auto a, auto b) { return v(an.stimuli(a, b)); })},
      {"direct_env", matrix(sys, false, [&](auto a, auto b) { return v(an.direct_env(a, b)); })},
      {"env", matrix(sys, self, [&](auto a, auto b) { return v(an.env(a, b)); })},
      {"pfc_direct", matrix(sys, false, [&](auto a, auto b) { return v(an.pfc_direct(a, b)); })},
      {"pfc", matrix(sys, self, [&](auto a, auto b) { return v(an.pfc(a, b)); })},
  };

  const ConnectivityVerdict conn = an.stimuli_connected();
  Json connectivity = {{"connected", conn.holds}, {"partition", nullptr}};
  if (!conn.holds) connectivity["partition"] = {{"part", conn.part}, {"rest", conn.rest}};

  Json root = {
      {"format", "c2ka-report"},
      {"version", 1},
      {"verified", axioms.passed()},
      {"profile", options.validation.enforce_cascade_output ? "strict" : "relaxed"},
      {"allow_self", self},
      {"model",
       {{"sizes", {{"stimuli", sc.size()}, {"behaviours", kc.size()}, {"agents", sys.size()}}},
        {"stimuli", sc.names()},
        {"behaviours", kc.names()},
        {"agents", agents},
        {"warnings", warnings}}},
      {"axioms", axioms_json(axioms)},
      {"basic_stimuli", names(sc, an.basic())},
      {"behaviours", behaviours},
      {"without_reactivation", is_without_reactivation(m)},
      {"relations", relations},
      {"connectivity", connectivity},
      {"communication_fixed_points", an.communication_fixed_points()},
      {"universally_influential", an.universally_influential()},
  };
  return ReportDocument(std::move(root));
}

std::string ReportDocument::to_json() const { return json_.dump(2) + "\n"; }

std::string ReportDocument::to_text() const {
  const Json& j = json_;
  const Json& model = j.at("model");
  const Json& sizes = model.at("sizes");
  std::ostringstream os;

  os << "model: " << sizes.at("stimuli") << " stimuli, " << sizes.at("behaviours") << " behaviours, "
     << sizes.at("agents") << " agents (" << j.at("profile").get<std::string>() << " profile)\n";
  if (!verified()) os << "UNVERIFIED MODEL: the relations below rest on failed checks\n";
  for (const auto& w : model.at("warnings")) os << "warning: " << w.get<std::string>() << "\n";

  const Json& axioms = j.at("axioms");
  if (axioms.at("passed").get<bool>()) {
    os << "axioms: all laws hold\n";
  } else {
    os << "axioms: " << axioms.at("violations").size() << " violation(s)\n";
    for (const auto& v : axioms.at("violations")) {
      os << "  " << v.at("law").get<std::string>() << ":";
      for (const auto& w : v.at("witness"))
        os << " " << w.at(0).get<std::string>() << "=" << w.at(1).get<std::string>();
      os << "  (" << v.at("lhs").get<std::string>() << " != " << v.at("rhs").get<std::string>() << ")\n";
    }
  }

  os << "basic stimuli: " << list(j.at("basic_stimuli")) << "\n";
  os << "behaviours:\n";
  for (const auto& b : j.at("behaviours")) {
    os << "  " << b.at("name").get<std::string>() << ": orbit " << braces(b.at("orbit"))
       << ", strong orbit " << braces(b.at("strong_orbit"));
    if (b.at("fixed_point").get<bool>()) os << ", fixed point";
    os << "\n";
  }
  os << "without reactivation: " << (j.at("without_reactivation").get<bool>() ? "yes" : "no") << "\n";

  struct Section {
    const char* key;
    const char* title;
  };
  const Section sections[] = {
      {"direct_stimuli", "direct stimuli communication"},
      {"stimuli", "stimuli communication"},
      {"direct_env", "direct environment communication"},
      {"env", "environment communication"},
      {"pfc_direct", "direct potential for communication"},
      {"pfc", "potential for communication"},
  };
  for (const auto& [key, title] : sections) {
    os << title << ":";
    std::ostringstream body;
    for (const auto& [a, row] : j.at("relations").at(key).items())
      for (const auto& [b, v] : row.items()) {
        if (!v.at("holds").get<bool>()) continue;
        body << "  " << a << " -> " << b;
        if (v.contains("witness"))
          body << "  by s = " << v.at("witness").at("s").get<std::string>()
               << ", t = " << v.at("witness").at("t").get<std::string>();
        if (v.contains("path")) body << "  path [" << list(v.at("path")) << "]  " << path_text(v);
        else if (v.contains("kinds")) body << "  " << list(v.at("kinds"));
        if (v.contains("chain")) body << "  dependence chain " << list(v.at("chain"));
        body << "\n";
      }
    os << (body.str().empty() ? " none\n" : "\n" + body.str());
  }

  const Json& conn = j.at("connectivity");
  if (conn.at("connected").get<bool>())
    os << "stimuli-connected: yes\n";
  else
    os << "stimuli-connected: no, " << braces(conn.at("partition").at("part")) << " | "
       << braces(conn.at("partition").at("rest")) << "\n";
  os << "communication fixed points: " << list(j.at("communication_fixed_points")) << "\n";
  os << "universally influential: " << list(j.at("universally_influential")) << "\n";
  return os.str();
}

std::string ReportDocument::to_dot() const {
  std::ostringstream os;
  os << "digraph pfc {\n";
  if (!verified()) os << "  label=\"unverified model\";\n";
  os << "  node [shape=box];\n";
  for (const auto& a : json_.at("model").at("agents"))
    os << "  " << quote(a.at("name").get<std::string>()) << " [label="
       << quote(a.at("name").get<std::string>() + " : " + a.at("behaviour").get<std::string>()) << "];\n";
  for (const auto& [a, row] : json_.at("relations").at("pfc_direct").items())
    for (const auto& [b, v] : row.items()) {
      if (!v.at("holds").get<bool>()) continue;
      const Json& kinds = v.at("kinds");
      const bool s = std::find(kinds.begin(), kinds.end(), "stimuli") != kinds.end();
      const bool e = std::find(kinds.begin(), kinds.end(), "environment") != kinds.end();
      const char* label = s && e ? "stimuli+env" : s ? "stimuli" : "env";
      const char* style = s && e ? "bold" : s ? "solid" : "dashed";
      os << "  " << quote(a) << " -> " << quote(b) << " [label=\"" << label << "\", style=" << style
         << "];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace c2ka
