#ifndef C2KA_ORACLES_HPP
#define C2KA_ORACLES_HPP

#include <string>
#include <vector>

#include "c2ka/comm.hpp"

// Definition-literal reference implementations for differential testing.
// They read the model tables directly and share no helpers with comm.cpp.

namespace c2ka {

std::vector<Element> oracle_basic_stimuli(const StimulusStructure& s);
bool oracle_direct_stimuli(const AgentSystem& sys, std::size_t a, std::size_t b);
bool oracle_direct_env(const AgentSystem& sys, std::size_t a, std::size_t b);
/// The recursive definition, unrolled.
bool oracle_stimuli_n(const AgentSystem& sys, std::size_t a, std::size_t b, std::size_t n);
/// Exists n <= |agents| with oracle_stimuli_n.
bool oracle_stimuli(const AgentSystem& sys, std::size_t a, std::size_t b);
/// Least solution of pfc(A,B) <=> pfcD(A,B) or exists C: pfcD(A,C) and
/// pfc(C,B), by memoised recursion on path length.
bool oracle_pfc(const AgentSystem& sys, std::size_t a, std::size_t b);
/// Every bipartition into nonempty parts is crossed by stimuli_comm.
/// Throws DomainError above five agents.
bool oracle_partition_connected(const AgentSystem& sys);
/// R+ as the union of R, R;R, R;R;R, ... up to |K| compositions.
/// closure[b][a] reads "b depends on a".
std::vector<std::vector<bool>> oracle_closure(const DependenceRelation& dep);
/// Every law of the model evaluated from scratch: both semirings, the stars,
/// the exchange law, both semimodules and the three cascade axioms (the
/// second only when `cascade_output`). Returns the name of the first failing
/// law group, or an empty string.
std::string oracle_certify(const C2kaModel& m, bool cascade_output);
/// Depth-first search over dependence edges from b towards a.
bool oracle_env(const AgentSystem& sys, std::size_t a, std::size_t b);

}  // namespace c2ka

#endif  // C2KA_ORACLES_HPP
