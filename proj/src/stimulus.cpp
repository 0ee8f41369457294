#include "c2ka/stimulus.hpp"

namespace c2ka {

StimulusStructure::StimulusStructure(Carrier carrier, BinOpTable choice,
                                     BinOpTable compose, Element deactivation,
                                     Element neutral)
    : carrier_(std::move(carrier)),
      choice_(std::move(choice)),
      compose_(std::move(compose)),
      deactivation_(deactivation),
      neutral_(neutral) {
  if (choice_.size() != carrier_.size() || compose_.size() != carrier_.size())
    throw StructuralError("stimulus table size does not match its carrier");
  carrier_.require(deactivation_);
  carrier_.require(neutral_);
}

AxiomReport check_stimulus_structure(const StimulusStructure& s,
                                     const CheckOptions& options) {
  AxiomReport report =
      check_idempotent_semiring(s.carrier(), s.choice(), s.compose(),
                                s.deactivation(), s.neutral(), options, "stimuli");
  if (s.size() == 1)
    report.warnings.push_back(
        "degenerate stimulus structure: deactivation and neutral coincide");
  else if (s.deactivation() == s.neutral())
    report.warnings.push_back("deactivation and neutral stimuli coincide");
  return report;
}

bool divides(const StimulusStructure& s, Element x, Element y) {
  s.carrier().require(x);
  s.carrier().require(y);
  for (Element z = 0; z < s.size(); ++z)
    if (s.compose()(x, z) == y) return true;
  return false;
}

std::vector<Element> basic_stimuli(const StimulusStructure& s) {
  const std::size_t n = s.size();
  // divisibility matrix, computed once
  std::vector<char> div(n * n, 0);
  for (Element x = 0; x < n; ++x)
    for (Element z = 0; z < n; ++z) div[x * n + s.compose()(x, z)] = 1;
  auto d = [&](Element x, Element y) { return div[x * n + y] != 0; };

  std::vector<Element> basic;
  for (Element x = 0; x < n; ++x) {
    if (x == s.deactivation()) continue;
    bool ok = true;
    for (Element t = 0; t < n && ok; ++t)
      if (d(t, x) && t != s.neutral() && t != x) ok = false;
    for (Element t = 0; t < n && ok; ++t)
      for (Element r = 0; r < n && ok; ++r)
        if (d(x, s.compose()(t, r)) && !d(x, t) && !d(x, r)) ok = false;
    if (ok) basic.push_back(x);
  }
  return basic;
}

bool sub_stimulus(const StimulusStructure& s, Element a, Element b) {
  s.carrier().require(a);
  s.carrier().require(b);
  return s.choice()(a, b) == b;
}

}  // namespace c2ka
