#include <gtest/gtest.h>

#include "c2ka/comm.hpp"
#include "c2ka/factory.hpp"
#include "c2ka/oracles.hpp"

namespace c2ka {
namespace {

AgentSystem relay() { return load_fixture("C2KA-RELAY").doc.system(); }
AgentSystem env_relay() { return load_fixture("C2KA-ENV-RELAY").doc.system(); }

Element beh(const AgentSystem& sys, std::string_view name) { return sys.model().cka().carrier().at(name); }

TEST(DirectStimuli, RelaySourceReachesRelayWithAWitness) {
  const AgentSystem sys = relay();
  const CommVerdict v = direct_stimuli_comm(sys, "A", "C");
  ASSERT_TRUE(v.holds);
  ASSERT_TRUE(v.stimulus.has_value());
  const Carrier& sc = sys.model().stim().carrier();
  EXPECT_EQ(sc.name(v.stimulus->s), "N");
  EXPECT_EQ(sc.name(v.stimulus->t), "x");
}

TEST(DirectStimuli, RelayTable) {
  const AgentSystem sys = relay();
  EXPECT_TRUE(direct_stimuli_comm(sys, "C", "B").holds);
  EXPECT_TRUE(direct_stimuli_comm(sys, "B", "C").holds);
  EXPECT_FALSE(direct_stimuli_comm(sys, "A", "B").holds);
  EXPECT_FALSE(direct_stimuli_comm(sys, "B", "A").holds);
  EXPECT_FALSE(direct_stimuli_comm(sys, "C", "A").holds);
}

TEST(DirectStimuli, FixedPointSinkAndInactiveSourceNeverCommunicate) {
  const AgentSystem base = relay();
  const AgentSystem sys = base.with_agent({"Z", beh(base, "0")});
  for (const auto& agent : sys.agents()) {
    if (agent.name == "Z") continue;
    EXPECT_FALSE(direct_stimuli_comm(sys, "Z", agent.name).holds);
    if (agent.name != "A") EXPECT_FALSE(direct_stimuli_comm(sys, agent.name, "A").holds);  // a is a fixed point
  }
}

TEST(DirectStimuli, PreconditionsAreEnforced) {
  const AgentSystem sys = relay();
  EXPECT_THROW(direct_stimuli_comm(sys, "A", "A"), DomainError);
  EXPECT_THROW(direct_stimuli_comm(sys, "A", "Q"), StructuralError);
}

TEST(StimuliN, BaseCaseIsDirectAndRelayNeedsTwoSteps) {
  const AgentSystem sys = relay();
  EXPECT_EQ(stimuli_comm_n(sys, "A", "C", 1), direct_stimuli_comm(sys, "A", "C").holds);
  EXPECT_FALSE(stimuli_comm_n(sys, "A", "B", 1));
  EXPECT_TRUE(stimuli_comm_n(sys, "A", "B", 2));
  EXPECT_THROW(stimuli_comm_n(sys, "A", "B", 0), DomainError);
}

TEST(Stimuli, RelayPathRunsThroughTheRelay) {
  const CommVerdict v = stimuli_comm(relay(), "A", "B");
  ASSERT_TRUE(v.holds);
  ASSERT_TRUE(v.path.has_value());
  EXPECT_EQ(v.path->hops, (std::vector<std::string>{"A", "C", "B"}));
  EXPECT_FALSE(stimuli_comm(relay(), "B", "A").holds);
}

TEST(Stimuli, SilentSourceReachesNobody) {
  // An agent bound to 1 emits only the stimulus it receives; under the
  // relay tables out(s, 1) = s and 1 is fixed, and no basic stimulus below s
  // moves a fixed point, so it influences only non-fixed agents.
  const AgentSystem base = relay();
  const AgentSystem sys = base.with_agent({"Z", beh(base, "0")});
  for (const auto& agent : sys.agents())
    if (agent.name != "Z") EXPECT_FALSE(stimuli_comm(sys, "Z", agent.name).holds);
}

TEST(Connectivity, SingletonIsConnected) {
  const AgentSystem base = relay();
  const AgentSystem one(base.model(), {{"A", beh(base, "a")}}, base.dep());
  EXPECT_TRUE(is_stimuli_connected(one).holds);
  EXPECT_EQ(universally_influential(one), std::vector<std::string>{"A"});
}

TEST(Connectivity, RelayIsConnectedWithAUniversallyInfluentialSource) {
  const AgentSystem sys = relay();
  EXPECT_TRUE(is_stimuli_connected(sys).holds);
  EXPECT_EQ(universally_influential(sys), std::vector<std::string>{"A"});
  EXPECT_TRUE(communication_fixed_points(sys).empty());
}

TEST(Connectivity, DisjointHalvesGiveAPartition) {
  // Two copies of A -> C, with nothing between the copies.
  const AgentSystem base = relay();
  const AgentSystem sys(base.model(),
                        {{"A", beh(base, "a")}, {"C", beh(base, "c")}, {"Z", beh(base, "0")}, {"Y", beh(base, "1")}},
                        DependenceRelation(base.model().cka().size()));
  const ConnectivityVerdict v = is_stimuli_connected(sys);
  ASSERT_FALSE(v.holds);
  EXPECT_FALSE(v.part.empty());
  EXPECT_FALSE(v.rest.empty());
  EXPECT_EQ(v.part.size() + v.rest.size(), sys.size());
  EXPECT_TRUE(universally_influential(sys).empty());
  EXPECT_FALSE(oracle_partition_connected(sys));
}

TEST(FixedPoints, InactiveAgentIsAlwaysACommunicationFixedPoint) {
  const AgentSystem base = relay();
  const AgentSystem sys = base.with_agent({"Z", beh(base, "0")});
  const auto fps = communication_fixed_points(sys);
  EXPECT_NE(std::find(fps.begin(), fps.end(), "Z"), fps.end());
}

TEST(Dependence, EmptyPassesAndIsolationIsEnforced) {
  const AgentSystem sys = relay();
  const CkaStructure& k = sys.model().cka();
  EXPECT_TRUE(check_dependence(k, DependenceRelation(k.size())).passed());
  DependenceRelation idle(k.size());
  idle.set(k.one(), beh(sys, "a"));
  EXPECT_TRUE(check_dependence(k, idle).violates("dependence.isolation"));
}

TEST(Dependence, RelayRelationIsValidAndMutationBreaksBilinearity) {
  const AgentSystem sys = relay();
  const CkaStructure& k = sys.model().cka();
  EXPECT_TRUE(verify_dependence(sys).passed());
  // a + b = b here, so b R c with a R c missing is fine; drop c R c instead:
  // c = c + b requires c R c whenever b R c.
  DependenceRelation broken = sys.dep();
  broken.set(beh(sys, "c"), beh(sys, "c"), false);
  AxiomReport r = check_dependence(k, broken);
  ASSERT_FALSE(r.passed());
  EXPECT_TRUE(r.violates("dependence.left-bilinearity"));
  EXPECT_FALSE(r.violations.front().witness.empty());
}

TEST(Closure, EmptyAndIdempotent) {
  const CkaStructure k = relay().model().cka();
  EXPECT_TRUE(bilinear_closure(k, {}).empty());
  const Element b = k.carrier().at("b"), c = k.carrier().at("c");
  const DependenceRelation once = bilinear_closure(k, {{b, c}});
  const DependenceRelation twice = bilinear_closure(k, once.pairs());
  EXPECT_EQ(once, twice);
}

TEST(Closure, OneStepAddsJoinsOnBothSides) {
  const CkaStructure k = relay().model().cka();
  const Element b = k.carrier().at("b"), c = k.carrier().at("c");
  const DependenceRelation r = bilinear_closure(k, {{b, b}});
  for (Element x = 0; x < k.size(); ++x) {
    const Element left = k.choice()(b, x);
    if (left != k.zero() && left != k.one()) EXPECT_TRUE(r.depends(left, b));
    const Element right = k.choice()(b, x);
    if (right != k.zero() && right != k.one()) EXPECT_TRUE(r.depends(b, right));
  }
  EXPECT_TRUE(r.depends(c, c));
  EXPECT_TRUE(check_dependence(k, r).passed());
}

TEST(Closure, GeneratorTouchingIdleIsADomainError) {
  const CkaStructure k = relay().model().cka();
  EXPECT_THROW(bilinear_closure(k, {{k.one(), k.carrier().at("b")}}), DomainError);
}

TEST(Closure, ConflictReportsItsChain) {
  // a R a forces (a + 1) R a = 1 R a, which isolation forbids.
  const CkaStructure k = relay().model().cka();
  const Element a = k.carrier().at("a");
  try {
    bilinear_closure(k, {{a, a}});
    FAIL() << "expected a conflict";
  } catch (const ClosureConflict& e) {
    ASSERT_GE(e.chain().size(), 2u);
    EXPECT_EQ(e.chain().front(), std::make_pair(a, a));
    const auto last = e.chain().back();
    EXPECT_TRUE(last.first == k.one() || last.second == k.one());
  }
}

TEST(DirectEnv, RelayAndIdleSink) {
  const AgentSystem sys = relay();
  EXPECT_TRUE(direct_env_comm(sys, "C", "B").holds);
  EXPECT_FALSE(direct_env_comm(sys, "B", "C").holds);
  EXPECT_FALSE(direct_env_comm(sys, "A", "C").holds);
  const AgentSystem idle = sys.with_agent({"I", sys.model().cka().one()});
  for (const auto& agent : idle.agents())
    if (agent.name != "I") EXPECT_FALSE(direct_env_comm(idle, agent.name, "I").holds);
}

TEST(DirectEnv, AddingAGeneratorCreatesTheEdge) {
  const AgentSystem sys = env_relay();
  const CkaStructure& k = sys.model().cka();
  // In the environment relay, c is depended upon by everything proper.
  EXPECT_TRUE(direct_env_comm(sys, "C", "A").holds);
  const Element a = sys.behaviour(sys.index_of("A")), b = sys.behaviour(sys.index_of("B"));
  auto pairs = sys.dep().pairs();
  pairs.emplace_back(b, a);
  const AgentSystem extended(sys.model(), sys.agents(), bilinear_closure(k, pairs));
  EXPECT_TRUE(direct_env_comm(extended, "A", "B").holds);
}

TEST(Env, ChainsThroughABehaviourNoAgentHolds) {
  // b R k and k R a with k bound to no agent.
  const AgentSystem base = relay();
  const CkaStructure& k = base.model().cka();
  const Element a = beh(base, "a"), b = beh(base, "b"), c = beh(base, "c");
  DependenceRelation dep(k.size());
  dep.set(b, c);
  dep.set(c, a);
  const AgentSystem sys(base.model(), {{"A", a}, {"B", b}}, dep);
  EXPECT_FALSE(direct_env_comm(sys, "A", "B").holds);
  const CommVerdict v = env_comm(sys, "A", "B");
  ASSERT_TRUE(v.holds);
  EXPECT_EQ(v.behaviour_chain, (std::vector<Element>{b, c, a}));
  EXPECT_TRUE(oracle_env(sys, 0, 1));
}

TEST(PfcDirect, OnePerDisjunctAndNeither) {
  const AgentSystem sys = relay();
  const CommVerdict ac = pfc_direct(sys, "A", "C");
  ASSERT_TRUE(ac.holds);
  EXPECT_TRUE(ac.direct->stimuli);
  EXPECT_FALSE(ac.direct->environment);
  const CommVerdict cb = pfc_direct(sys, "C", "B");
  EXPECT_TRUE(cb.direct->stimuli && cb.direct->environment);
  EXPECT_FALSE(pfc_direct(sys, "A", "B").holds);
  EXPECT_THROW(pfc_direct(sys, "A", "A"), DomainError);

  const CommVerdict env_only = pfc_direct(env_relay(), "C", "B");
  ASSERT_TRUE(env_only.holds);
  EXPECT_FALSE(env_only.direct->stimuli);
  EXPECT_TRUE(env_only.direct->environment);
}

TEST(Pfc, RelayMixedPathAndNoReversePath) {
  const AgentSystem sys = relay();
  const CommVerdict v = pfc(sys, "A", "B");
  ASSERT_TRUE(v.holds);
  EXPECT_EQ(v.path->hops, (std::vector<std::string>{"A", "C", "B"}));
  ASSERT_EQ(v.path->kinds.size(), 2u);
  EXPECT_TRUE(v.path->kinds[0].stimuli);
  EXPECT_TRUE(v.path->kinds[1].environment);
  EXPECT_FALSE(pfc(sys, "B", "A").holds);
}

TEST(Pfc, EnvironmentRelayNeedsBothKinds) {
  const AgentSystem sys = env_relay();
  const CommVerdict v = pfc(sys, "A", "B");
  ASSERT_TRUE(v.holds);
  EXPECT_TRUE(v.path->kinds.front().stimuli);
  EXPECT_TRUE(v.path->kinds.back().environment);
  EXPECT_FALSE(stimuli_comm(sys, "A", "B").holds);
  EXPECT_FALSE(pfc(sys, "B", "A").holds);
}

TEST(Pfc, SelfCommunicationNeedsTheFlag) {
  const AgentSystem sys = relay();
  EXPECT_THROW(pfc(sys, "C", "C"), DomainError);
  const CommVerdict loop = pfc(sys, "C", "C", AnalysisOptions{true});
  ASSERT_TRUE(loop.holds);  // C -> B -> C
  EXPECT_EQ(loop.path->hops.front(), "C");
  EXPECT_EQ(loop.path->hops.back(), "C");
  EXPECT_GE(loop.path->hops.size(), 3u);
  EXPECT_FALSE(pfc(sys, "A", "A", AnalysisOptions{true}).holds);
}

TEST(Oracles, AgreeOnTheRelayFixtures) {
  for (const AgentSystem& sys : {relay(), env_relay()}) {
    const Analysis an(sys);
    for (std::size_t i = 0; i < sys.size(); ++i)
      for (std::size_t j = 0; j < sys.size(); ++j) {
        if (i == j) continue;
        EXPECT_EQ(an.stimuli_direct_at(i, j), oracle_direct_stimuli(sys, i, j));
        EXPECT_EQ(an.stimuli_at(i, j), oracle_stimuli(sys, i, j));
        EXPECT_EQ(an.env_at(i, j), oracle_env(sys, i, j));
        EXPECT_EQ(an.pfc_at(i, j), oracle_pfc(sys, i, j));
      }
    EXPECT_EQ(an.stimuli_connected().holds, oracle_partition_connected(sys));
  }
}

TEST(Oracles, PartitionOracleRefusesLargeSystems) {
  AgentSystem sys = relay();
  for (char c = 'P'; c < 'S'; ++c) sys = sys.with_agent({std::string(1, c), beh(sys, "a")});
  EXPECT_THROW(oracle_partition_connected(sys), DomainError);
}

TEST(Oracles, ClosureOfEmptyIsEmpty) {
  const auto closure = oracle_closure(DependenceRelation(4));
  for (const auto& row : closure)
    for (bool bit : row) EXPECT_FALSE(bit);
}

TEST(AgentSystem, RejectsDuplicateNamesAndEmptySystems) {
  const AgentSystem sys = relay();
  EXPECT_THROW(sys.with_agent({"A", beh(sys, "b")}), StructuralError);
  EXPECT_THROW(AgentSystem(sys.model(), {}, sys.dep()), StructuralError);
  EXPECT_THROW(sys.with_agent({"Q", 42}), StructuralError);
}

}  // namespace
}  // namespace c2ka
