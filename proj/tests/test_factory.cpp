#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <unistd.h>

#include "c2ka/factory.hpp"
#include "c2ka/oracles.hpp"
#include "support.hpp"

namespace c2ka {
namespace {

using Json = nlohmann::json;
using Pairs = std::set<std::pair<std::string, std::string>>;

std::vector<std::string> names(const Carrier& c, const std::vector<Element>& xs) {
  std::vector<std::string> out;
  for (Element x : xs) out.push_back(c.name(x));
  return out;
}

Pairs pairs_from(const Json& j) {
  Pairs out;
  for (const auto& p : j) out.emplace(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  return out;
}

template <class F>
Pairs collect(const AgentSystem& sys, F holds) {
  Pairs out;
  for (std::size_t i = 0; i < sys.size(); ++i)
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (i != j && holds(i, j)) out.emplace(sys.name(i), sys.name(j));
  return out;
}

// Engine and oracle readings of each relation named in the sidecars.
Pairs engine_relation(const Analysis& an, const std::string& rel) {
  const AgentSystem& sys = an.system();
  if (rel == "direct_stimuli") return collect(sys, [&](auto i, auto j) { return an.stimuli_direct_at(i, j); });
  if (rel == "stimuli") return collect(sys, [&](auto i, auto j) { return an.stimuli_at(i, j); });
  if (rel == "direct_env") return collect(sys, [&](auto i, auto j) { return an.env_direct_at(i, j); });
  if (rel == "env") return collect(sys, [&](auto i, auto j) { return an.env_at(i, j); });
  if (rel == "pfc_direct")
    return collect(sys, [&](auto i, auto j) { return an.stimuli_direct_at(i, j) || an.env_direct_at(i, j); });
  if (rel == "pfc") return collect(sys, [&](auto i, auto j) { return an.pfc_at(i, j); });
  ADD_FAILURE() << "unknown relation " << rel;
  return {};
}

Pairs oracle_relation(const AgentSystem& sys, const std::string& rel) {
  if (rel == "direct_stimuli") return collect(sys, [&](auto i, auto j) { return oracle_direct_stimuli(sys, i, j); });
  if (rel == "stimuli") return collect(sys, [&](auto i, auto j) { return oracle_stimuli(sys, i, j); });
  if (rel == "direct_env") return collect(sys, [&](auto i, auto j) { return oracle_direct_env(sys, i, j); });
  if (rel == "env") return collect(sys, [&](auto i, auto j) { return oracle_env(sys, i, j); });
  if (rel == "pfc_direct")
    return collect(sys, [&](auto i, auto j) { return oracle_direct_stimuli(sys, i, j) || oracle_direct_env(sys, i, j); });
  if (rel == "pfc") return collect(sys, [&](auto i, auto j) { return oracle_pfc(sys, i, j); });
  return {};
}

TEST(Fixtures, AllAreListedAndLoad) {
  const auto all = fixture_names();
  for (const char* n : {"C2KA-RELAY", "C2KA-ENV-RELAY", "LATTICE-3", "STIM-4", "CKA-R3"})
    EXPECT_NE(std::find(all.begin(), all.end(), n), all.end()) << n;
  for (const auto& n : all) EXPECT_NO_THROW(load_fixture(n)) << n;
  EXPECT_THROW(load_fixture("NO-SUCH-FIXTURE"), StructuralError);
}

TEST(Fixtures, RelayHasTheRequiredShape) {
  const Fixture f = fixture_relay();
  EXPECT_EQ(f.name, "C2KA-RELAY");
  EXPECT_EQ(f.doc.model.stim().size(), 4u);
  EXPECT_EQ(basic_stimuli(f.doc.model.stim()).size(), 3u);  // N and two more
  EXPECT_LE(f.doc.model.cka().size(), 6u);
  const AgentSystem sys = f.doc.system();
  EXPECT_TRUE(direct_stimuli_comm(sys, "A", "C").holds);
  EXPECT_TRUE(direct_env_comm(sys, "C", "B").holds);
  const CommVerdict v = pfc(sys, "A", "B");
  ASSERT_TRUE(v.holds);
  EXPECT_TRUE(v.path->kinds.front().stimuli);
  EXPECT_TRUE(v.path->kinds.back().environment);
}

TEST(Fixtures, AnnotationsReverifyAgainstEngineAndOracles) {
  for (const Fixture& f : testing::all_fixtures()) {
    const Json side = Json::parse(f.annotations);
    EXPECT_EQ(side.at("name"), f.name);
    const C2kaModel& m = f.doc.model;
    const bool has_agents = !f.doc.agents.empty();
    std::optional<Analysis> an;
    if (has_agents) an.emplace(f.doc.system());

    for (const Json& e : side.at("expect")) {
      const std::string check = e.at("check");
      SCOPED_TRACE(f.name + " " + e.dump());
      EXPECT_TRUE(e.contains("basis"));
      EXPECT_TRUE(e.contains("oracle"));
      if (check == "laws") {
        const bool strict = e.at("profile") == "strict";
        ValidationOptions v;
        v.enforce_cascade_output = strict;
        const AxiomReport r = has_agents ? validate_system(f.doc.system(), v) : validate_model(m, v);
        EXPECT_EQ(r.passed(), e.at("passed").get<bool>());
        EXPECT_EQ(oracle_certify(m, strict).empty(), e.at("passed").get<bool>());
        if (e.contains("failing")) {
          for (const auto& viol : r.violations) EXPECT_EQ(viol.law, e.at("failing"));
          EXPECT_EQ(oracle_certify(m, strict), "cascade output");
        }
      } else if (check == "basic_stimuli") {
        const auto expected = e.at("value").get<std::vector<std::string>>();
        EXPECT_EQ(names(m.stim().carrier(), basic_stimuli(m.stim())), expected);
        EXPECT_EQ(names(m.stim().carrier(), oracle_basic_stimuli(m.stim())), expected);
      } else if (check == "fixed_point_behaviours") {
        std::vector<std::string> fixed;
        for (Element a = 0; a < m.cka().size(); ++a)
          if (is_fixed_point_behaviour(m, a)) fixed.push_back(m.cka().carrier().name(a));
        EXPECT_EQ(fixed, e.at("value").get<std::vector<std::string>>());
      } else {
        ASSERT_TRUE(an.has_value());
        const AgentSystem& sys = an->system();
        if (check == "relation") {
          const Pairs expected = pairs_from(e.at("holds_for"));
          EXPECT_EQ(engine_relation(*an, e.at("relation")), expected);
          EXPECT_EQ(oracle_relation(sys, e.at("relation")), expected);
        } else if (check == "stimuli_connected") {
          EXPECT_EQ(an->stimuli_connected().holds, e.at("value").get<bool>());
          EXPECT_EQ(oracle_partition_connected(sys), e.at("value").get<bool>());
        } else if (check == "communication_fixed_points" || check == "universally_influential") {
          const auto expected = e.at("value").get<std::vector<std::string>>();
          const bool fixed = check == "communication_fixed_points";
          EXPECT_EQ(fixed ? an->communication_fixed_points() : an->universally_influential(), expected);
          std::vector<std::string> oracle;
          for (std::size_t i = 0; i < sys.size(); ++i) {
            std::size_t reached = 0;
            for (std::size_t j = 0; j < sys.size(); ++j) reached += j != i && oracle_stimuli(sys, i, j);
            if (fixed ? reached == 0 : reached + 1 == sys.size()) oracle.push_back(sys.name(i));
          }
          EXPECT_EQ(oracle, expected);
        } else {
          ADD_FAILURE() << "unknown check " << check;
        }
      }
    }
  }
}

TEST(Fixtures, EmbeddedCopiesMatchTheSourceTree) {
  const char* dir = std::getenv("C2KA_SOURCE_FIXTURES");
  if (dir == nullptr) GTEST_SKIP() << "C2KA_SOURCE_FIXTURES not set";
  for (const Fixture& f : testing::all_fixtures())
    EXPECT_EQ(read_text_file(std::string(dir) + "/" + f.file), f.source) << f.name;
}

class FixtureDirOverride : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("c2ka-fixtures-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override {
    ::unsetenv("C2KA_FIXTURE_DIR");
    std::filesystem::remove_all(dir_);
  }
  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  std::filesystem::path dir_;
};

TEST_F(FixtureDirOverride, FilesAreReadFromTheOverride) {
  const Fixture lattice = load_fixture("LATTICE-3");
  Json side = Json::parse(lattice.annotations);
  side["name"] = "LATTICE-COPY";
  write("copy.json", side.dump());
  write(lattice.file, lattice.source);
  ::setenv("C2KA_FIXTURE_DIR", dir_.c_str(), 1);
  EXPECT_EQ(fixture_names(), std::vector<std::string>{"LATTICE-COPY"});
  EXPECT_EQ(load_fixture("LATTICE-COPY").doc, lattice.doc);
  EXPECT_THROW(load_fixture("LATTICE-3"), StructuralError);
}

TEST_F(FixtureDirOverride, InvalidFixtureIsRejected) {
  const Fixture relay = fixture_relay();
  Json side = Json::parse(relay.annotations);
  side["profile"] = "strict";
  write("relay.json", side.dump());
  write(relay.file, relay.source);
  ::setenv("C2KA_FIXTURE_DIR", dir_.c_str(), 1);
  EXPECT_THROW(load_fixture("C2KA-RELAY"), StructuralError);
}

TEST(Families, LatticeStimuliAreChainsWithDBottomAndNTop) {
  for (std::size_t k = 2; k <= 6; ++k) {
    const StimulusStructure s = family_lattice_stimuli(k);
    EXPECT_EQ(s.size(), k);
    for (Element t = 0; t < k; ++t) {
      EXPECT_TRUE(sub_stimulus(s, s.deactivation(), t));
      EXPECT_TRUE(sub_stimulus(s, t, s.neutral()));
    }
  }
  EXPECT_THROW(family_lattice_stimuli(0), DomainError);
}

TEST(Families, TwoElementCkaPasses) {
  EXPECT_TRUE(check_cka(two_element_cka()).passed());
}

TEST(Sampler, SameSeedSameModels) {
  SamplerBounds b;
  b.relaxed = true;
  ModelSampler x(42, b), y(42, b);
  for (int i = 0; i < 10; ++i) {
    const auto mx = x.next();
    const auto my = y.next();
    ASSERT_EQ(mx.has_value(), my.has_value());
    if (mx) EXPECT_TRUE(*mx == *my);
  }
  EXPECT_EQ(x.candidates(), y.candidates());
}

TEST(Sampler, BoundsAreChecked) {
  SamplerBounds b;
  b.max_behaviours = 5;
  EXPECT_THROW(ModelSampler(1, b), DomainError);
  b = {};
  b.min_stimuli = 1;
  EXPECT_THROW(ModelSampler(1, b), DomainError);
  b = {};
  b.min_stimuli = 4;
  b.max_stimuli = 3;
  EXPECT_THROW(ModelSampler(1, b), DomainError);
}

TEST(Sampler, AcceptedModelsPassTheirProfileAndTheOracle) {
  for (bool relaxed : {false, true}) {
    SamplerBounds b;
    b.relaxed = relaxed;
    ModelSampler sampler(2026, b);
    ValidationOptions v;
    v.enforce_cascade_output = !relaxed;
    std::size_t n = 0;
    while (auto m = sampler.next()) {
      EXPECT_TRUE(validate_model(*m, v).passed());
      EXPECT_EQ(oracle_certify(*m, !relaxed), "");
      if (++n == 20) break;
    }
    EXPECT_EQ(n, 20u);
    EXPECT_GT(sampler.acceptance_ratio(), 0.0);
    EXPECT_LE(sampler.acceptance_ratio(), 1.0);
  }
}

TEST(Sampler, RelaxedProfileReachesLargerCarriers) {
  SamplerBounds b;
  b.relaxed = true;
  ModelSampler sampler(7, b);
  std::size_t largest = 0;
  for (int i = 0; i < 60; ++i)
    if (auto m = sampler.next()) largest = std::max(largest, m->cka().size());
  EXPECT_GE(largest, 3u);
}

TEST(RandomSystems, DependenceSatisfiesItsLaws) {
  std::mt19937_64 rng(5);
  for (const auto& [label, m] : testing::model_pool(3, 10)) {
    for (int i = 0; i < 5; ++i) {
      const AgentSystem sys = random_system(rng, m, 4);
      EXPECT_GE(sys.size(), 1u);
      EXPECT_LE(sys.size(), 4u);
      EXPECT_TRUE(verify_dependence(sys).passed()) << label;
    }
  }
}

TEST(RandomSystems, ArbitraryTablesHaveTheRequestedShape) {
  std::mt19937_64 rng(9);
  const AgentSystem sys = arbitrary_system(rng, 5, 6, 4);
  EXPECT_EQ(sys.model().stim().size(), 5u);
  EXPECT_EQ(sys.model().cka().size(), 6u);
  EXPECT_EQ(sys.size(), 4u);
}

}  // namespace
}  // namespace c2ka
