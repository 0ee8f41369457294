#include "c2ka/model.hpp"

#include <algorithm>

namespace c2ka {

ActionTable::ActionTable(std::size_t stimuli, std::size_t behaviours,
                         std::size_t range, std::vector<Element> cells)
    : grid_(stimuli, behaviours, range, std::move(cells)) {}

ActionTable ActionTable::with(Element s, Element a, Element value) const {
  return ActionTable(grid_.with(s, a, value));
}

C2kaModel::C2kaModel(CkaStructure cka, StimulusStructure stim, ActionTable act,
                     ActionTable out)
    : cka_(std::move(cka)), stim_(std::move(stim)), act_(std::move(act)), out_(std::move(out)) {
  const std::size_t ns = stim_.size(), nk = cka_.size();
  if (act_.stimuli() != ns || act_.behaviours() != nk || act_.range() != nk)
    throw StructuralError("next-behaviour table must be |S| x |K| with values in K");
  if (out_.stimuli() != ns || out_.behaviours() != nk || out_.range() != ns)
    throw StructuralError("next-stimulus table must be |S| x |K| with values in S");
}

namespace {

enum class Sort { stimulus, behaviour };

struct Var {
  const char* name;
  Sort sort;
  Element value;
};

class Recorder {
 public:
  Recorder(const C2kaModel& m, ViolationSink& sink) : m_(m), sink_(sink) {}

  bool wants(const std::string& law) const { return sink_.wants(law); }

  void add(const std::string& law, std::initializer_list<Var> vars, Sort sort,
           Element lhs, Element rhs) {
    Violation v{law, {}, name(sort, lhs), name(sort, rhs)};
    for (const Var& x : vars) v.witness.emplace_back(x.name, name(x.sort, x.value));
    sink_.add(std::move(v));
  }

 private:
  const std::string& name(Sort sort, Element e) const {
    return sort == Sort::stimulus ? m_.stim().carrier().name(e) : m_.cka().carrier().name(e);
  }

  const C2kaModel& m_;
  ViolationSink& sink_;
};

constexpr Sort S = Sort::stimulus;
constexpr Sort K = Sort::behaviour;

}  // namespace

AxiomReport check_left_semimodule(const C2kaModel& m, const CheckOptions& options) {
  ViolationSink sink(options);
  Recorder rec(m, sink);
  const auto& plus = m.cka().choice();
  const auto& oplus = m.stim().choice();
  const auto& odot = m.stim().compose();
  const std::size_t ns = m.stim().size(), nk = m.cka().size();

  for (Element s = 0; s < ns; ++s)
    for (Element a = 0; a < nk; ++a)
      for (Element b = 0; b < nk; ++b) {
        Element l = m.act(s, plus(a, b)), r = plus(m.act(s, a), m.act(s, b));
        if (l != r)
          rec.add("left-semimodule.behaviour-choice", {{"s", S, s}, {"a", K, a}, {"b", K, b}},
                  K, l, r);
      }
  for (Element s = 0; s < ns; ++s)
    for (Element t = 0; t < ns; ++t)
      for (Element a = 0; a < nk; ++a) {
        Element l = m.act(oplus(s, t), a), r = plus(m.act(s, a), m.act(t, a));
        if (l != r)
          rec.add("left-semimodule.stimulus-choice", {{"s", S, s}, {"t", S, t}, {"a", K, a}},
                  K, l, r);
        l = m.act(odot(s, t), a);
        r = m.act(s, m.act(t, a));
        if (l != r)
          rec.add("left-semimodule.stimulus-compose", {{"s", S, s}, {"t", S, t}, {"a", K, a}},
                  K, l, r);
      }
  for (Element a = 0; a < nk; ++a) {
    Element n = m.act(m.stim().neutral(), a);
    if (n != a) rec.add("left-semimodule.unitary", {{"a", K, a}}, K, n, a);
    Element d = m.act(m.stim().deactivation(), a);
    if (d != m.cka().zero())
      rec.add("left-semimodule.zero-preserving", {{"a", K, a}}, K, d, m.cka().zero());
  }
  return std::move(sink).finish();
}

AxiomReport check_right_semimodule(const C2kaModel& m, const CheckOptions& options) {
  ViolationSink sink(options);
  Recorder rec(m, sink);
  const auto& plus = m.cka().choice();
  const auto& oplus = m.stim().choice();
  const std::size_t ns = m.stim().size(), nk = m.cka().size();

  for (Element s = 0; s < ns; ++s)
    for (Element a = 0; a < nk; ++a)
      for (Element b = 0; b < nk; ++b) {
        Element l = m.out(s, plus(a, b)), r = oplus(m.out(s, a), m.out(s, b));
        if (l != r)
          rec.add("right-semimodule.behaviour-choice", {{"s", S, s}, {"a", K, a}, {"b", K, b}},
                  S, l, r);
      }
  for (Element s = 0; s < ns; ++s)
    for (Element t = 0; t < ns; ++t)
      for (Element a = 0; a < nk; ++a) {
        Element l = m.out(oplus(s, t), a), r = oplus(m.out(s, a), m.out(t, a));
        if (l != r)
          rec.add("right-semimodule.stimulus-choice", {{"s", S, s}, {"t", S, t}, {"a", K, a}},
                  S, l, r);
      }
  for (Element s = 0; s < ns; ++s) {
    Element u = m.out(s, m.cka().one());
    if (u != s) rec.add("right-semimodule.unitary", {{"s", S, s}}, S, u, s);
    Element z = m.out(s, m.cka().zero());
    if (z != m.stim().deactivation())
      rec.add("right-semimodule.zero-preserving", {{"s", S, s}}, S, z,
              m.stim().deactivation());
  }
  return std::move(sink).finish();
}

AxiomReport check_c2ka(const C2kaModel& m, const ValidationOptions& options) {
  ViolationSink sink(options.checks);
  Recorder rec(m, sink);
  const auto& plus = m.cka().choice();
  const auto& seq = m.cka().seq();
  const auto& odot = m.stim().compose();
  const Element zero = m.cka().zero();
  const std::size_t ns = m.stim().size(), nk = m.cka().size();

  // (i) act(s, a;b) = act(s,a) ; act(out(s,a), b)
  for (Element s = 0; s < ns; ++s)
    for (Element a = 0; a < nk; ++a)
      for (Element b = 0; b < nk; ++b) {
        Element l = m.act(s, seq(a, b));
        Element r = seq(m.act(s, a), m.act(m.out(s, a), b));
        if (l != r) rec.add("c2ka.cascade", {{"s", S, s}, {"a", K, a}, {"b", K, b}}, K, l, r);
      }

  // (ii) c <= a  or  act(s,a) ; act(out(s,c), b) = 0
  const std::string cascade_output = "c2ka.cascade-output";
  std::size_t relaxed_failures = 0;
  for (Element s = 0; s < ns; ++s)
    for (Element a = 0; a < nk; ++a)
      for (Element c = 0; c < nk; ++c) {
        if (plus(c, a) == a) continue;
        if (options.enforce_cascade_output && !rec.wants(cascade_output)) continue;
        for (Element b = 0; b < nk; ++b) {
          Element r = seq(m.act(s, a), m.act(m.out(s, c), b));
          if (r == zero) continue;
          if (options.enforce_cascade_output)
            rec.add(cascade_output, {{"s", S, s}, {"a", K, a}, {"b", K, b}, {"c", K, c}}, K,
                    r, zero);
          else
            ++relaxed_failures;
        }
      }
  if (relaxed_failures > 0)
    sink.warn("cascade-output law not enforced; it fails for " +
              std::to_string(relaxed_failures) + " instantiations");

  // (iii) out(s(.)t, a) = out(s, act(t,a)) (.) out(t,a)
  for (Element s = 0; s < ns; ++s)
    for (Element t = 0; t < ns; ++t)
      for (Element a = 0; a < nk; ++a) {
        Element l = m.out(odot(s, t), a);
        Element r = odot(m.out(s, m.act(t, a)), m.out(t, a));
        if (l != r)
          rec.add("c2ka.sequential-output", {{"s", S, s}, {"t", S, t}, {"a", K, a}}, S, l, r);
      }
  return std::move(sink).finish();
}

AxiomReport validate_model(const C2kaModel& m, const ValidationOptions& options) {
  AxiomReport report = check_cka(m.cka(), options.checks);
  report.merge(check_stimulus_structure(m.stim(), options.checks));
  report.merge(check_left_semimodule(m, options.checks));
  report.merge(check_right_semimodule(m, options.checks));
  report.merge(check_c2ka(m, options));
  return report;
}

std::vector<Element> orbit(const C2kaModel& m, Element a) {
  m.cka().carrier().require(a);
  std::vector<char> seen(m.cka().size(), 0);
  for (Element s = 0; s < m.stim().size(); ++s) seen[m.act(s, a)] = 1;
  std::vector<Element> out;
  for (Element b = 0; b < seen.size(); ++b)
    if (seen[b]) out.push_back(b);
  return out;
}

std::vector<Element> strong_orbit(const C2kaModel& m, Element a) {
  const auto target = orbit(m, a);
  std::vector<Element> out;
  for (Element b = 0; b < m.cka().size(); ++b)
    if (orbit(m, b) == target) out.push_back(b);
  return out;
}

bool is_fixed_point_behaviour(const C2kaModel& m, Element a) {
  m.cka().carrier().require(a);
  for (Element s = 0; s < m.stim().size(); ++s)
    if (s != m.stim().deactivation() && m.act(s, a) != a) return false;
  return true;
}

bool is_without_reactivation(const C2kaModel& m) {
  return is_fixed_point_behaviour(m, m.cka().one());
}

}  // namespace c2ka
