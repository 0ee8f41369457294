#ifndef C2KA_STIMULUS_HPP
#define C2KA_STIMULUS_HPP

#include <vector>

#include "c2ka/algebra.hpp"

namespace c2ka {

/// Idempotent semiring of external stimuli.
///
/// `choice` is the stimulus sum, `compose` sequential stimulus composition,
/// `deactivation` the additive identity (absorbing for compose) and `neutral`
/// the compose identity.
class StimulusStructure {
 public:
  StimulusStructure(Carrier carrier, BinOpTable choice, BinOpTable compose,
                    Element deactivation, Element neutral);

  const Carrier& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }
  const BinOpTable& choice() const { return choice_; }
  const BinOpTable& compose() const { return compose_; }
  Element deactivation() const { return deactivation_; }
  Element neutral() const { return neutral_; }

  bool operator==(const StimulusStructure&) const = default;

 private:
  Carrier carrier_;
  BinOpTable choice_;
  BinOpTable compose_;
  Element deactivation_;
  Element neutral_;
};

/// Semiring laws with zero = deactivation and one = neutral, plus the
/// degenerate-structure warning.
AxiomReport check_stimulus_structure(const StimulusStructure& s,
                                     const CheckOptions& options = {});

/// x | y, i.e. y = x (.) z for some z.
bool divides(const StimulusStructure& s, Element x, Element y);

/// Indivisible stimuli in carrier order. Deactivation is never included.
std::vector<Element> basic_stimuli(const StimulusStructure& s);

/// s (+) t = t.
bool sub_stimulus(const StimulusStructure& s, Element a, Element b);

}  // namespace c2ka

#endif  // C2KA_STIMULUS_HPP
