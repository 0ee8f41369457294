#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "c2ka/factory.hpp"
#include "c2ka/report.hpp"
#include "support.hpp"

namespace c2ka {
namespace {

ReportOptions relaxed() {
  ReportOptions o;
  o.validation.enforce_cascade_output = false;
  return o;
}

ReportDocument relay_report(ReportOptions o = relaxed()) {
  return ReportDocument::build(load_fixture("C2KA-RELAY").doc, o);
}

const char* const kRelations[] = {"direct_stimuli", "stimuli", "direct_env", "env", "pfc_direct", "pfc"};

TEST(Report, TopLevelLayout) {
  const ReportDocument r = relay_report();
  const auto& j = r.json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"format", "version", "verified", "profile", "allow_self", "model",
                                            "axioms", "basic_stimuli", "behaviours", "without_reactivation",
                                            "relations", "connectivity", "communication_fixed_points",
                                            "universally_influential"}));
  EXPECT_EQ(j.at("format"), "c2ka-report");
  EXPECT_EQ(j.at("version"), 1);
  EXPECT_EQ(j.at("profile"), "relaxed");
  EXPECT_TRUE(j.at("verified").get<bool>());
}

TEST(Report, NeedsAgents) {
  ModelDocument doc = load_fixture("LATTICE-3").doc;
  doc.agents.clear();
  EXPECT_THROW(ReportDocument::build(doc), StructuralError);
}

TEST(Report, MatricesAgreeWithTheAnalysis) {
  for (const Fixture& f : testing::all_fixtures()) {
    if (f.doc.agents.empty()) continue;
    ReportOptions o;
    o.validation = f.validation;
    const ReportDocument r = ReportDocument::build(f.doc, o);
    const Analysis an(f.doc.system());
    const AgentSystem& sys = an.system();
    for (const char* rel : kRelations)
      for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < sys.size(); ++j) {
          if (i == j) continue;
          const bool shown = r.json().at("relations").at(rel).at(sys.name(i)).at(sys.name(j)).at("holds");
          const std::string_view name = rel;
          bool expected = false;
          if (name == "direct_stimuli") expected = an.stimuli_direct_at(i, j);
          if (name == "stimuli") expected = an.stimuli_at(i, j);
          if (name == "direct_env") expected = an.env_direct_at(i, j);
          if (name == "env") expected = an.env_at(i, j);
          if (name == "pfc_direct") expected = an.stimuli_direct_at(i, j) || an.env_direct_at(i, j);
          if (name == "pfc") expected = an.pfc_at(i, j);
          EXPECT_EQ(shown, expected) << f.name << " " << rel << " " << sys.name(i) << " " << sys.name(j);
        }
  }
}

TEST(Report, WitnessesReverifyFromTheDefinitions) {
  for (const Fixture& f : testing::all_fixtures()) {
    if (f.doc.agents.empty()) continue;
    ReportOptions o;
    o.validation = f.validation;
    const auto j = ReportDocument::build(f.doc, o).json();
    const AgentSystem sys = f.doc.system();
    const C2kaModel& m = sys.model();
    const Carrier& sc = m.stim().carrier();
    const Carrier& kc = m.cka().carrier();
    const auto basic = basic_stimuli(m.stim());
    auto is_basic = [&](Element t) { return std::find(basic.begin(), basic.end(), t) != basic.end(); };
    auto beh = [&](const std::string& agent) { return sys.behaviour(sys.index_of(agent)); };
    auto direct_stimuli = [&](const std::string& a, const std::string& b, const nlohmann::ordered_json& w) {
      const Element s = sc.at(w.at("s").get<std::string>()), t = sc.at(w.at("t").get<std::string>());
      return is_basic(s) && is_basic(t) && sub_stimulus(m.stim(), t, m.out(s, beh(a))) &&
             m.act(t, beh(b)) != beh(b);
    };

    for (const auto& [a, row] : j.at("relations").at("direct_stimuli").items())
      for (const auto& [b, cell] : row.items())
        if (cell.at("holds").get<bool>()) EXPECT_TRUE(direct_stimuli(a, b, cell.at("witness"))) << f.name;

    for (const auto& [a, row] : j.at("relations").at("env").items())
      for (const auto& [b, cell] : row.items()) {
        if (!cell.at("holds").get<bool>()) continue;
        const auto chain = cell.at("chain").get<std::vector<std::string>>();
        ASSERT_GE(chain.size(), 2u);
        EXPECT_EQ(kc.at(chain.front()), beh(b));
        EXPECT_EQ(kc.at(chain.back()), beh(a));
        for (std::size_t i = 0; i + 1 < chain.size(); ++i)
          EXPECT_TRUE(sys.dep().depends(kc.at(chain[i]), kc.at(chain[i + 1]))) << f.name;
      }

    const Analysis an(sys);
    for (const char* rel : {"stimuli", "pfc"})
      for (const auto& [a, row] : j.at("relations").at(rel).items())
        for (const auto& [b, cell] : row.items()) {
          if (!cell.at("holds").get<bool>()) continue;
          const auto path = cell.at("path").get<std::vector<std::string>>();
          ASSERT_GE(path.size(), 2u);
          EXPECT_EQ(path.front(), a);
          EXPECT_EQ(path.back(), b);
          for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const std::size_t x = sys.index_of(path[i]), y = sys.index_of(path[i + 1]);
            const bool edge = std::string_view(rel) == "stimuli" ? an.stimuli_direct_at(x, y)
                                                                 : an.stimuli_direct_at(x, y) || an.env_direct_at(x, y);
            EXPECT_TRUE(edge) << f.name << " " << rel << " " << path[i] << " -> " << path[i + 1];
          }
        }
  }
}

TEST(Report, TextNamesTheRelayPath) {
  const std::string text = relay_report().to_text();
  EXPECT_NE(text.find("path [A, C, B]"), std::string::npos);
  EXPECT_NE(text.find("universally influential: A"), std::string::npos);
  EXPECT_EQ(text.find("UNVERIFIED"), std::string::npos);
}

TEST(Report, FailingModelIsAnalysedButMarked) {
  const ReportDocument r = relay_report(ReportOptions{});
  EXPECT_FALSE(r.verified());
  EXPECT_FALSE(r.json().at("axioms").at("passed").get<bool>());
  EXPECT_EQ(r.json().at("axioms").at("violations").at(0).at("law"), "c2ka.cascade-output");
  EXPECT_NE(r.to_text().find("UNVERIFIED"), std::string::npos);
  EXPECT_NE(r.to_dot().find("unverified model"), std::string::npos);
}

TEST(Report, DotEdgesAreTheDirectRelation) {
  for (const Fixture& f : testing::all_fixtures()) {
    if (f.doc.agents.empty()) continue;
    ReportOptions o;
    o.validation = f.validation;
    const ReportDocument r = ReportDocument::build(f.doc, o);
    const std::string dot = r.to_dot();
    EXPECT_EQ(dot.rfind("digraph pfc {", 0), 0u);
    EXPECT_EQ(dot.substr(dot.size() - 2), "}\n");

    std::set<std::pair<std::string, std::string>> edges;
    const std::regex edge(R"re("([^"]+)" -> "([^"]+)" \[label="(stimuli|env|stimuli\+env)", style=(solid|dashed|bold)\];)re");
    for (auto it = std::sregex_iterator(dot.begin(), dot.end(), edge); it != std::sregex_iterator(); ++it) {
      const std::string label = (*it)[3], style = (*it)[4];
      EXPECT_EQ(style, label == "stimuli" ? "solid" : label == "env" ? "dashed" : "bold");
      edges.emplace((*it)[1], (*it)[2]);
    }
    std::set<std::pair<std::string, std::string>> expected;
    for (const auto& [a, row] : r.json().at("relations").at("pfc_direct").items())
      for (const auto& [b, cell] : row.items())
        if (cell.at("holds").get<bool>()) expected.emplace(a, b);
    EXPECT_EQ(edges, expected) << f.name;
  }
}

TEST(Report, SelfCellsOnlyForReachabilityWithTheFlag) {
  ReportOptions o = relaxed();
  EXPECT_FALSE(relay_report(o).json().at("relations").at("pfc").at("C").contains("C"));
  o.analysis.allow_self = true;
  const auto j = relay_report(o).json();
  EXPECT_TRUE(j.at("allow_self").get<bool>());
  EXPECT_TRUE(j.at("relations").at("pfc").at("C").at("C").at("holds").get<bool>());
  EXPECT_FALSE(j.at("relations").at("pfc").at("A").at("A").at("holds").get<bool>());
  EXPECT_FALSE(j.at("relations").at("direct_stimuli").at("C").contains("C"));
}

TEST(Report, DisconnectedSystemShowsAPartition) {
  const ModelDocument base = load_fixture("C2KA-RELAY").doc;
  ModelDocument doc = base;
  doc.agents.push_back({"Z", base.model.cka().zero()});
  const auto j = ReportDocument::build(doc, relaxed()).json();
  EXPECT_FALSE(j.at("connectivity").at("connected").get<bool>());
  const auto& part = j.at("connectivity").at("partition");
  EXPECT_EQ(part.at("part").size() + part.at("rest").size(), 4u);
  const auto fixed = j.at("communication_fixed_points").get<std::vector<std::string>>();
  EXPECT_NE(std::find(fixed.begin(), fixed.end(), "Z"), fixed.end());
}

TEST(Report, JsonTextIsStable) {
  EXPECT_EQ(relay_report().to_json(), relay_report().to_json());
  EXPECT_EQ(nlohmann::ordered_json::parse(relay_report().to_json()), relay_report().json());
}

}  // namespace
}  // namespace c2ka
