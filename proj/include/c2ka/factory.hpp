#ifndef C2KA_FACTORY_HPP
#define C2KA_FACTORY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "c2ka/comm.hpp"
#include "c2ka/dsl.hpp"

namespace c2ka {

/// A shipped model file together with its expected verdicts.
struct Fixture {
  std::string name;
  std::string file;
  std::string source;
  /// Sidecar JSON: profile and expected verdicts with their basis.
  std::string annotations;
  ModelDocument doc;
  ValidationOptions validation;
};

std::vector<std::string> fixture_names();

/// Parses the named fixture and re-runs every law under its profile; throws
/// StructuralError if the document does not pass. Files are read from
/// $C2KA_FIXTURE_DIR when set, otherwise from the copies built into the
/// library.
Fixture load_fixture(std::string_view name);

/// "C2KA-RELAY": A -> C by stimuli, C -> B by stimuli and environment.
Fixture fixture_relay();
/// The relay document assembled table by table, independent of the parser.
ModelDocument relay_document();

/// k-element chain: (+) is join, (.) is meet, D bottom, N top.
StimulusStructure family_lattice_stimuli(std::size_t k);
/// The two-element CKA {0, 1}.
CkaStructure two_element_cka();
/// Lattice stimuli acting trivially on {0, 1}: act(s, a) = a off D and
/// out(s, 1) = s. Needs k >= 2.
C2kaModel family_trivial_model(std::size_t k);

struct SamplerBounds {
  std::size_t min_stimuli = 2;
  std::size_t max_stimuli = 4;
  std::size_t min_behaviours = 2;
  std::size_t max_behaviours = 4;
  /// Accept models that fail only the cascade-output axiom.
  bool relaxed = false;
  /// Full candidate models tried per call to next() before giving up.
  std::size_t attempts = 400;
};

/// Staged rejection sampling. Each stage draws the free cells of one table
/// family (stimulus operations, behaviour operations, act, out) with the
/// forced entries fixed, and keeps it only if the laws seen so far hold.
class ModelSampler {
 public:
  ModelSampler(std::uint64_t seed, SamplerBounds bounds);

  /// Next accepted model, or nullopt when the attempt budget runs out.
  std::optional<C2kaModel> next();

  std::size_t candidates() const { return candidates_; }
  std::size_t accepted() const { return accepted_; }
  double acceptance_ratio() const {
    return candidates_ == 0 ? 0.0 : static_cast<double>(accepted_) / candidates_;
  }

 private:
  std::optional<StimulusStructure> stimuli(std::size_t n);
  std::optional<CkaStructure> behaviours(std::size_t n);
  std::optional<C2kaModel> actions(const StimulusStructure& s, const CkaStructure& k);

  std::mt19937_64 rng_;
  SamplerBounds bounds_;
  ValidationOptions validation_;
  std::size_t candidates_ = 0;
  std::size_t accepted_ = 0;
};

/// Binds 1..max_agents agents to random behaviours and draws a dependence
/// relation that satisfies the dependence laws (possibly empty).
AgentSystem random_system(std::mt19937_64& rng, const C2kaModel& model, std::size_t max_agents);

/// Tables drawn uniformly with no laws imposed; relation queries are defined
/// on any tables, which makes these useful against the oracles.
AgentSystem arbitrary_system(std::mt19937_64& rng, std::size_t stimuli, std::size_t behaviours,
                             std::size_t agents);

}  // namespace c2ka

#endif  // C2KA_FACTORY_HPP
