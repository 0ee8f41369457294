#include "support.hpp"

#include <random>

namespace c2ka::testing {

std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out;
  for (const auto& name : fixture_names()) out.push_back(load_fixture(name));
  return out;
}

std::vector<std::pair<std::string, C2kaModel>> model_pool(std::uint64_t seed, std::size_t sampled) {
  std::vector<std::pair<std::string, C2kaModel>> out;
  for (const Fixture& f : all_fixtures()) out.emplace_back(f.name, f.doc.model);
  for (std::size_t k = 2; k <= 5; ++k) out.emplace_back("trivial-" + std::to_string(k), family_trivial_model(k));

  for (bool relaxed : {false, true}) {
    SamplerBounds bounds;
    bounds.relaxed = relaxed;
    ModelSampler sampler(seed + relaxed, bounds);
    for (std::size_t i = 0; i < sampled; ++i) {
      auto m = sampler.next();
      if (!m) break;
      out.emplace_back(std::string(relaxed ? "relaxed-" : "strict-") + std::to_string(i), std::move(*m));
    }
  }
  return out;
}

std::vector<PoolEntry> system_pool(std::uint64_t seed, std::size_t sampled) {
  std::vector<PoolEntry> out;
  for (const Fixture& f : all_fixtures()) {
    const bool relaxed = !f.validation.enforce_cascade_output;
    if (!f.doc.agents.empty()) out.push_back({f.name, f.doc.system(), relaxed});
  }
  std::mt19937_64 rng(seed);
  for (const auto& [label, model] : model_pool(seed, sampled)) {
    const bool relaxed = !validate_model(model).passed();
    for (int copy = 0; copy < 2; ++copy)
      out.push_back({label + "/" + std::to_string(copy), random_system(rng, model, 5), relaxed});
  }
  return out;
}

}  // namespace c2ka::testing
