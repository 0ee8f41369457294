#ifndef C2KA_MODEL_HPP
#define C2KA_MODEL_HPP

#include <vector>

#include "c2ka/algebra.hpp"
#include "c2ka/stimulus.hpp"

namespace c2ka {

/// Total table indexed by (stimulus, behaviour).
///
/// Used for both mappings of a model: the next-behaviour action, whose values
/// are behaviours, and the next-stimulus mapping, whose values are stimuli.
class ActionTable {
 public:
  ActionTable(std::size_t stimuli, std::size_t behaviours, std::size_t range,
              std::vector<Element> cells);

  template <class F>
  static ActionTable from_function(std::size_t stimuli, std::size_t behaviours,
                                   std::size_t range, F&& f) {
    std::vector<Element> cells(stimuli * behaviours);
    for (Element s = 0; s < stimuli; ++s)
      for (Element a = 0; a < behaviours; ++a) cells[s * behaviours + a] = f(s, a);
    return ActionTable(stimuli, behaviours, range, std::move(cells));
  }

  std::size_t stimuli() const { return grid_.rows(); }
  std::size_t behaviours() const { return grid_.cols(); }
  std::size_t range() const { return grid_.range(); }
  Element operator()(Element s, Element a) const { return grid_.at(s, a); }
  ActionTable with(Element s, Element a, Element value) const;
  std::span<const Element> cells() const { return grid_.cells(); }

  bool operator==(const ActionTable&) const = default;

 private:
  explicit ActionTable(Grid g) : grid_(std::move(g)) {}
  Grid grid_;
};

/// A CKA of behaviours and a stimulus structure acting on one another.
///
/// act(s, a) is the behaviour an agent behaving as `a` moves to under
/// stimulus `s`; out(s, a) is the stimulus it emits in response.
class C2kaModel {
 public:
  C2kaModel(CkaStructure cka, StimulusStructure stim, ActionTable act,
            ActionTable out);

  const CkaStructure& cka() const { return cka_; }
  const StimulusStructure& stim() const { return stim_; }
  const ActionTable& act_table() const { return act_; }
  const ActionTable& out_table() const { return out_; }

  Element act(Element s, Element a) const { return act_(s, a); }
  Element out(Element s, Element a) const { return out_(s, a); }

  bool operator==(const C2kaModel&) const = default;

 private:
  CkaStructure cka_;
  StimulusStructure stim_;
  ActionTable act_;
  ActionTable out_;
};

struct ValidationOptions {
  CheckOptions checks;
  /// Axiom (ii) of the definition: (s.a);(out(s,c).b) = 0 unless c <= a.
  /// Together with unitarity it forces the behaviour carrier into {0, 1};
  /// switching it off turns its violations into warnings.
  bool enforce_cascade_output = true;
};

AxiomReport check_left_semimodule(const C2kaModel& m, const CheckOptions& options = {});
AxiomReport check_right_semimodule(const C2kaModel& m, const CheckOptions& options = {});
/// The three compatibility axioms between the two mappings.
AxiomReport check_c2ka(const C2kaModel& m, const ValidationOptions& options = {});

/// Every law: CKA, stimulus structure, both semimodules and check_c2ka.
AxiomReport validate_model(const C2kaModel& m, const ValidationOptions& options = {});

/// { act(s, a) | s in S } in carrier order.
std::vector<Element> orbit(const C2kaModel& m, Element a);
/// Behaviours whose orbit equals the orbit of `a`, in carrier order.
std::vector<Element> strong_orbit(const C2kaModel& m, Element a);
bool is_fixed_point_behaviour(const C2kaModel& m, Element a);
bool is_without_reactivation(const C2kaModel& m);

}  // namespace c2ka

#endif  // C2KA_MODEL_HPP
