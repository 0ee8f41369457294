#ifndef C2KA_TESTS_SUPPORT_HPP
#define C2KA_TESTS_SUPPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "c2ka/factory.hpp"

namespace c2ka::testing {

struct PoolEntry {
  std::string label;
  AgentSystem sys;
  /// Accepted under the relaxed profile only.
  bool relaxed;
};

/// Fixtures, the trivial lattice family and sampled models (strict and
/// relaxed) with random agent bindings of up to five agents. Deterministic.
std::vector<PoolEntry> system_pool(std::uint64_t seed = 20261016, std::size_t sampled = 60);

/// Every distinct model behind system_pool.
std::vector<std::pair<std::string, C2kaModel>> model_pool(std::uint64_t seed = 20261016,
                                                          std::size_t sampled = 60);

std::vector<Fixture> all_fixtures();

}  // namespace c2ka::testing

#endif  // C2KA_TESTS_SUPPORT_HPP
