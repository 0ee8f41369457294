#ifndef C2KA_COMM_HPP
#define C2KA_COMM_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "c2ka/model.hpp"

namespace c2ka {

/// Relation over behaviours; depends(b, a) reads "b depends on a".
class DependenceRelation {
 public:
  explicit DependenceRelation(std::size_t behaviours = 0);
  /// Pairs are (dependent, dependee).
  DependenceRelation(std::size_t behaviours,
                     const std::vector<std::pair<Element, Element>>& pairs);

  std::size_t behaviours() const { return n_; }
  bool depends(Element b, Element a) const { return bits_[b * n_ + a] != 0; }
  void set(Element b, Element a, bool value = true);
  /// (dependent, dependee) pairs in lexicographic order.
  std::vector<std::pair<Element, Element>> pairs() const;
  bool empty() const;

  bool operator==(const DependenceRelation&) const = default;

 private:
  void require(Element e) const;

  std::size_t n_;
  std::vector<char> bits_;
};

/// (b+c) R a <=> b R a or c R a, c R (a+b) <=> c R a or c R b, and 0 and 1
/// related to nothing.
AxiomReport check_dependence(const CkaStructure& cka, const DependenceRelation& dep,
                             const CheckOptions& options = {});

/// Raised when closing a generator set relates 0 or 1.
class ClosureConflict : public DomainError {
 public:
  ClosureConflict(std::string message, std::vector<std::pair<Element, Element>> chain)
      : DomainError(std::move(message)), chain_(std::move(chain)) {}
  /// Derivation from a generator to the offending pair, (dependent, dependee).
  const std::vector<std::pair<Element, Element>>& chain() const { return chain_; }

 private:
  std::vector<std::pair<Element, Element>> chain_;
};

/// Least relation containing `generators` and closed under
/// b R a => (b+c) R a and b R a => b R (a+c).
DependenceRelation bilinear_closure(const CkaStructure& cka,
                                    const std::vector<std::pair<Element, Element>>& generators);

/// R+ over the whole behaviour carrier.
DependenceRelation transitive_closure(const DependenceRelation& dep);

struct Agent {
  std::string name;
  Element behaviour;

  bool operator==(const Agent&) const = default;
};

class AgentSystem {
 public:
  AgentSystem(C2kaModel model, std::vector<Agent> agents, DependenceRelation dep);

  const C2kaModel& model() const { return model_; }
  const std::vector<Agent>& agents() const { return agents_; }
  const DependenceRelation& dep() const { return dep_; }
  std::size_t size() const { return agents_.size(); }

  /// Throws StructuralError for an unknown name.
  std::size_t index_of(std::string_view name) const;
  const std::string& name(std::size_t i) const { return agents_.at(i).name; }
  Element behaviour(std::size_t i) const { return agents_.at(i).behaviour; }

  AgentSystem with_behaviour(std::size_t i, Element behaviour) const;
  AgentSystem with_agent(Agent agent) const;

  bool operator==(const AgentSystem&) const = default;

 private:
  C2kaModel model_;
  std::vector<Agent> agents_;
  DependenceRelation dep_;
};

/// Model laws plus the dependence laws.
AxiomReport validate_system(const AgentSystem& sys, const ValidationOptions& options = {});

enum class EdgeKind { stimuli, environment };

struct EdgeKinds {
  bool stimuli = false;
  bool environment = false;

  bool any() const { return stimuli || environment; }
  bool operator==(const EdgeKinds&) const = default;
};

/// Basic stimuli s, t with t <= out(s, a) and act(t, b) != b.
struct StimulusWitness {
  Element s;
  Element t;

  bool operator==(const StimulusWitness&) const = default;
};

struct PathWitness {
  std::vector<std::string> hops;
  /// kinds[i] labels the edge hops[i] -> hops[i+1].
  std::vector<EdgeKinds> kinds;

  bool operator==(const PathWitness&) const = default;
};

struct CommVerdict {
  bool holds = false;
  std::optional<StimulusWitness> stimulus;
  /// Which disjuncts of a direct relation hold.
  std::optional<EdgeKinds> direct;
  std::optional<PathWitness> path;
  /// b, ..., a with consecutive elements related by R, for env_comm.
  std::vector<Element> behaviour_chain;
};

struct ConnectivityVerdict {
  bool holds = false;
  /// A weak component and its complement when disconnected.
  std::vector<std::string> part;
  std::vector<std::string> rest;
};

struct AnalysisOptions {
  /// Admit A = B for the reachability relations, read as a cycle through A.
  bool allow_self = false;
};

/// All relations of one system, computed once.
class Analysis {
 public:
  explicit Analysis(AgentSystem sys, AnalysisOptions options = {});

  const AgentSystem& system() const { return sys_; }
  const std::vector<Element>& basic() const { return basic_; }
  const AnalysisOptions& options() const { return options_; }

  CommVerdict direct_stimuli(std::string_view a, std::string_view b) const;
  CommVerdict direct_env(std::string_view a, std::string_view b) const;
  CommVerdict pfc_direct(std::string_view a, std::string_view b) const;
  bool stimuli_n(std::string_view a, std::string_view b, std::size_t n) const;
  CommVerdict stimuli(std::string_view a, std::string_view b) const;
  CommVerdict env(std::string_view a, std::string_view b) const;
  CommVerdict pfc(std::string_view a, std::string_view b) const;

  ConnectivityVerdict stimuli_connected() const;
  std::vector<std::string> communication_fixed_points() const;
  std::vector<std::string> universally_influential() const;

  // Index-based access for matrix rendering; i != j.
  bool stimuli_direct_at(std::size_t i, std::size_t j) const { return sd_[i][j]; }
  bool env_direct_at(std::size_t i, std::size_t j) const { return ed_[i][j]; }
  bool stimuli_at(std::size_t i, std::size_t j) const { return sreach_[i][j]; }
  bool env_at(std::size_t i, std::size_t j) const;
  bool pfc_at(std::size_t i, std::size_t j) const { return preach_[i][j]; }

 private:
  using Matrix = std::vector<std::vector<bool>>;

  std::pair<std::size_t, std::size_t> pair_of(std::string_view a, std::string_view b,
                                              bool reachability) const;
  std::optional<StimulusWitness> stimulus_witness(std::size_t i, std::size_t j) const;
  std::optional<PathWitness> shortest_path(std::size_t from, std::size_t to,
                                           bool with_env) const;

  AgentSystem sys_;
  AnalysisOptions options_;
  std::vector<Element> basic_;
  DependenceRelation closure_;
  Matrix sd_, ed_, sreach_, preach_;
};

// Free-function forms; each builds a fresh Analysis.
CommVerdict direct_stimuli_comm(const AgentSystem& sys, std::string_view a, std::string_view b);
bool stimuli_comm_n(const AgentSystem& sys, std::string_view a, std::string_view b,
                    std::size_t n);
CommVerdict stimuli_comm(const AgentSystem& sys, std::string_view a, std::string_view b);
ConnectivityVerdict is_stimuli_connected(const AgentSystem& sys);
std::vector<std::string> communication_fixed_points(const AgentSystem& sys);
std::vector<std::string> universally_influential(const AgentSystem& sys);
AxiomReport verify_dependence(const AgentSystem& sys);
CommVerdict direct_env_comm(const AgentSystem& sys, std::string_view a, std::string_view b);
CommVerdict env_comm(const AgentSystem& sys, std::string_view a, std::string_view b);
CommVerdict pfc_direct(const AgentSystem& sys, std::string_view a, std::string_view b);
CommVerdict pfc(const AgentSystem& sys, std::string_view a, std::string_view b,
                const AnalysisOptions& options = {});

// What-if modifications of a relay agent.

enum class ReplacementKind { seq, choice, seq_star, inactive, idle, strong_orbit_member, fixed_point };

struct Replacement {
  ReplacementKind kind;
  /// d for seq/choice, c' for strong_orbit_member/fixed_point.
  std::optional<Element> arg;
};

/// "seq:d", "choice:d", "seqstar", "inactive", "idle", "orbit:c", "fixed:c".
Replacement parse_replacement(std::string_view text, const Carrier& behaviours);
std::string to_string(ReplacementKind kind);

enum class Claim {
  /// pfc survives only if the condition holds.
  only_if,
  preserved,
  not_preserved,
};

enum class WhatIfStatus {
  consistent,
  inconsistent,
  /// Some source-to-sink path avoids the relay, so the claim says nothing.
  bypassed,
  precondition_unmet,
};

struct ModificationReport {
  Replacement replacement;
  /// 1 to 6.
  int clause = 0;
  Claim claim = Claim::only_if;
  /// Set for the conditional clauses.
  std::optional<bool> condition;
  Element old_behaviour = 0;
  Element new_behaviour = 0;
  /// Every source-to-sink path of direct steps passes through the relay.
  bool relay_on_every_path = false;
  /// Absent when the precondition is unmet.
  std::optional<CommVerdict> recomputed;
  bool consistent = false;
  WhatIfStatus status = WhatIfStatus::precondition_unmet;
  std::string note;
};

/// Replaces the behaviour of `relay` and compares the clause's claim with a
/// recomputation of pfc(source, sink). Throws DomainError unless
/// pfcD(source, relay) and pfc(relay, sink) hold.
ModificationReport whatif_replace(const AgentSystem& sys, std::string_view source,
                                  std::string_view sink, std::string_view relay,
                                  const Replacement& replacement);

std::string to_string(Claim claim);
std::string to_string(WhatIfStatus status);

}  // namespace c2ka

#endif  // C2KA_COMM_HPP
