#include "c2ka/comm.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace c2ka {

// ---------------------------------------------------------------------------
// Dependence relation

DependenceRelation::DependenceRelation(std::size_t behaviours)
    : n_(behaviours), bits_(behaviours * behaviours, 0) {}

DependenceRelation::DependenceRelation(std::size_t behaviours,
                                       const std::vector<std::pair<Element, Element>>& pairs)
    : DependenceRelation(behaviours) {
  for (auto [b, a] : pairs) set(b, a);
}

void DependenceRelation::require(Element e) const {
  if (e >= n_)
    throw StructuralError("behaviour index " + std::to_string(e) + " outside carrier of size " +
                          std::to_string(n_));
}

void DependenceRelation::set(Element b, Element a, bool value) {
  require(b);
  require(a);
  bits_[b * n_ + a] = value ? 1 : 0;
}

std::vector<std::pair<Element, Element>> DependenceRelation::pairs() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element b = 0; b < n_; ++b)
    for (Element a = 0; a < n_; ++a)
      if (depends(b, a)) out.emplace_back(b, a);
  return out;
}

bool DependenceRelation::empty() const {
  return std::none_of(bits_.begin(), bits_.end(), [](char c) { return c != 0; });
}

AxiomReport check_dependence(const CkaStructure& cka, const DependenceRelation& dep,
                             const CheckOptions& options) {
  if (dep.behaviours() != cka.size())
    throw StructuralError("dependence relation is not over the behaviour carrier");
  ViolationSink sink(options);
  const auto& plus = cka.choice();
  const auto& names = cka.carrier();
  const std::size_t n = cka.size();
  auto truth = [](bool v) { return std::string(v ? "true" : "false"); };

  for (Element b = 0; b < n; ++b)
    for (Element c = 0; c < n; ++c)
      for (Element a = 0; a < n; ++a) {
        bool l = dep.depends(plus(b, c), a), r = dep.depends(b, a) || dep.depends(c, a);
        if (l != r && sink.wants("dependence.left-bilinearity"))
          sink.add({"dependence.left-bilinearity",
                    {{"b", names.name(b)}, {"c", names.name(c)}, {"a", names.name(a)}},
                    truth(l), truth(r)});
        l = dep.depends(a, plus(b, c));
        r = dep.depends(a, b) || dep.depends(a, c);
        if (l != r && sink.wants("dependence.right-bilinearity"))
          sink.add({"dependence.right-bilinearity",
                    {{"c", names.name(a)}, {"a", names.name(b)}, {"b", names.name(c)}},
                    truth(l), truth(r)});
      }
  for (Element fixed : {cka.zero(), cka.one()})
    for (Element a = 0; a < n; ++a) {
      if (dep.depends(fixed, a))
        sink.add({"dependence.isolation", {{"b", names.name(fixed)}, {"a", names.name(a)}},
                  "true", "false"});
      if (dep.depends(a, fixed))
        sink.add({"dependence.isolation", {{"b", names.name(a)}, {"a", names.name(fixed)}},
                  "true", "false"});
    }
  return std::move(sink).finish();
}

DependenceRelation bilinear_closure(const CkaStructure& cka,
                                    const std::vector<std::pair<Element, Element>>& generators) {
  const std::size_t n = cka.size();
  const auto& plus = cka.choice();
  auto isolated = [&](Element e) { return e == cka.zero() || e == cka.one(); };
  using Pair = std::pair<Element, Element>;

  DependenceRelation out(n);
  std::map<Pair, Pair> parent;
  std::deque<Pair> work;
  for (auto [b, a] : generators) {
    cka.carrier().require(b);
    cka.carrier().require(a);
    if (isolated(b) || isolated(a))
      throw DomainError("generator (" + cka.carrier().name(b) + ", " + cka.carrier().name(a) +
                        ") relates an inactive or idle behaviour");
    if (!out.depends(b, a)) {
      out.set(b, a);
      work.emplace_back(b, a);
    }
  }

  auto chain_to = [&](Pair p) {
    std::vector<Pair> chain{p};
    for (auto it = parent.find(p); it != parent.end(); it = parent.find(it->second))
      chain.push_back(it->second);
    std::reverse(chain.begin(), chain.end());
    return chain;
  };

  while (!work.empty()) {
    const Pair p = work.front();
    work.pop_front();
    for (Element c = 0; c < n; ++c) {
      for (Pair q : {Pair{plus(p.first, c), p.second}, Pair{p.first, plus(p.second, c)}}) {
        if (out.depends(q.first, q.second)) continue;
        if (isolated(q.first) || isolated(q.second)) {
          auto chain = chain_to(p);
          chain.push_back(q);
          throw ClosureConflict("closure relates " + cka.carrier().name(q.first) + " and " +
                                    cka.carrier().name(q.second) +
                                    ", which must depend on nothing",
                                std::move(chain));
        }
        out.set(q.first, q.second);
        parent.emplace(q, p);
        work.push_back(q);
      }
    }
  }
  return out;
}

DependenceRelation transitive_closure(const DependenceRelation& dep) {
  const std::size_t n = dep.behaviours();
  DependenceRelation out = dep;
  for (Element k = 0; k < n; ++k)
    for (Element i = 0; i < n; ++i)
      if (out.depends(i, k))
        for (Element j = 0; j < n; ++j)
          if (out.depends(k, j)) out.set(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Agent systems

AgentSystem::AgentSystem(C2kaModel model, std::vector<Agent> agents, DependenceRelation dep)
    : model_(std::move(model)), agents_(std::move(agents)), dep_(std::move(dep)) {
  if (agents_.empty()) throw StructuralError("an agent system needs at least one agent");
  if (dep_.behaviours() != model_.cka().size())
    throw StructuralError("dependence relation is not over the behaviour carrier");
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].name.empty()) throw StructuralError("empty agent name");
    model_.cka().carrier().require(agents_[i].behaviour);
    for (std::size_t j = 0; j < i; ++j)
      if (agents_[j].name == agents_[i].name)
        throw StructuralError("duplicate agent '" + agents_[i].name + "'");
  }
}

std::size_t AgentSystem::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i].name == name) return i;
  throw StructuralError("unknown agent '" + std::string(name) + "'");
}

AgentSystem AgentSystem::with_behaviour(std::size_t i, Element behaviour) const {
  auto agents = agents_;
  agents.at(i).behaviour = behaviour;
  return AgentSystem(model_, std::move(agents), dep_);
}

AgentSystem AgentSystem::with_agent(Agent agent) const {
  auto agents = agents_;
  agents.push_back(std::move(agent));
  return AgentSystem(model_, std::move(agents), dep_);
}

AxiomReport validate_system(const AgentSystem& sys, const ValidationOptions& options) {
  AxiomReport report = validate_model(sys.model(), options);
  report.merge(check_dependence(sys.model().cka(), sys.dep(), options.checks));
  return report;
}

// ---------------------------------------------------------------------------
// Analysis

namespace {

using Matrix = std::vector<std::vector<bool>>;

/// reach[i][j]: a path of one or more edges from i to j.
Matrix reachability(const Matrix& edge) {
  const std::size_t n = edge.size();
  Matrix reach = edge;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

}  // namespace

Analysis::Analysis(AgentSystem sys, AnalysisOptions options)
    : sys_(std::move(sys)),
      options_(options),
      basic_(basic_stimuli(sys_.model().stim())),
      closure_(transitive_closure(sys_.dep())) {
  const std::size_t n = sys_.size();
  sd_.assign(n, std::vector<bool>(n, false));
  ed_ = sd_;
  Matrix pd = sd_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      sd_[i][j] = stimulus_witness(i, j).has_value();
      ed_[i][j] = sys_.dep().depends(sys_.behaviour(j), sys_.behaviour(i));
      pd[i][j] = sd_[i][j] || ed_[i][j];
    }
  sreach_ = reachability(sd_);
  preach_ = reachability(pd);
}

std::optional<StimulusWitness> Analysis::stimulus_witness(std::size_t i, std::size_t j) const {
  const C2kaModel& m = sys_.model();
  const Element a = sys_.behaviour(i), b = sys_.behaviour(j);
  for (Element s : basic_)
    for (Element t : basic_)
      if (natural_leq(m.stim().choice(), t, m.out(s, a)) && m.act(t, b) != b)
        return StimulusWitness{s, t};
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> Analysis::pair_of(std::string_view a, std::string_view b,
                                                       bool reachability) const {
  const std::size_t i = sys_.index_of(a), j = sys_.index_of(b);
  if (i == j && !(reachability && options_.allow_self))
    throw DomainError("source and sink must be distinct agents ('" + std::string(a) + "')");
  return {i, j};
}

std::optional<PathWitness> Analysis::shortest_path(std::size_t from, std::size_t to,
                                                   bool with_env) const {
  const std::size_t n = sys_.size();
  auto edge = [&](std::size_t x, std::size_t y) {
    return x != y && (sd_[x][y] || (with_env && ed_[x][y]));
  };
  // BFS seeded with the successors of `from`, so from == to finds a cycle.
  std::vector<std::size_t> prev(n, n);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t y = 0; y < n; ++y)
    if (edge(from, y)) {
      seen[y] = true;
      prev[y] = from;
      queue.push_back(y);
    }
  while (!queue.empty() && !seen[to]) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y = 0; y < n; ++y)
      if (!seen[y] && edge(x, y)) {
        seen[y] = true;
        prev[y] = x;
        queue.push_back(y);
      }
  }
  if (!seen[to]) return std::nullopt;

  std::vector<std::size_t> nodes{to};
  for (std::size_t x = prev[to]; x != from; x = prev[x]) nodes.push_back(x);
  nodes.push_back(from);
  std::reverse(nodes.begin(), nodes.end());

  PathWitness w;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    w.hops.push_back(sys_.name(nodes[k]));
    if (k + 1 < nodes.size()) {
      const std::size_t x = nodes[k], y = nodes[k + 1];
      w.kinds.push_back(EdgeKinds{sd_[x][y], with_env && ed_[x][y]});
    }
  }
  return w;
}

CommVerdict Analysis::direct_stimuli(std::string_view a, std::string_view b) const {
  auto [i, j] = pair_of(a, b, false);
  CommVerdict v;
  v.stimulus = stimulus_witness(i, j);
  v.holds = v.stimulus.has_value();
  return v;
}

CommVerdict Analysis::direct_env(std::string_view a, std::string_view b) const {
  auto [i, j] = pair_of(a, b, false);
  CommVerdict v;
  v.holds = ed_[i][j];
  if (v.holds) v.behaviour_chain = {sys_.behaviour(j), sys_.behaviour(i)};
  return v;
}

CommVerdict Analysis::pfc_direct(std::string_view a, std::string_view b) const {
  auto [i, j] = pair_of(a, b, false);
  CommVerdict v;
  v.direct = EdgeKinds{sd_[i][j], ed_[i][j]};
  v.holds = v.direct->any();
  if (sd_[i][j]) v.stimulus = stimulus_witness(i, j);
  return v;
}

bool Analysis::stimuli_n(std::string_view a, std::string_view b, std::size_t n) const {
  auto [i, j] = pair_of(a, b, false);
  if (n < 1) throw DomainError("stimulus count must be at least 1");
  const std::size_t m = sys_.size();
  Matrix layer = sd_;
  for (std::size_t k = 2; k <= n; ++k) {
    Matrix next(m, std::vector<bool>(m, false));
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        if (x == y) continue;
        for (std::size_t c = 0; c < m && !next[x][y]; ++c)
          if (c != x && c != y && layer[x][c] && sd_[c][y]) next[x][y] = true;
      }
    if (next == layer) break;  // fixed point of the layer map
    layer = std::move(next);
  }
  return layer[i][j];
}

CommVerdict Analysis::stimuli(std::string_view a, std::string_view b) const {
  auto [i, j] = pair_of(a, b, true);
  CommVerdict v;
  v.holds = sreach_[i][j];
  if (v.holds) v.path = shortest_path(i, j, false);
  return v;
}

bool Analysis::env_at(std::size_t i, std::size_t j) const {
  return closure_.depends(sys_.behaviour(j), sys_.behaviour(i));
}

CommVerdict Analysis::env(std::string_view a, std::string_view b) const {
  auto [i, j] = pair_of(a, b, true);
  CommVerdict v;
  v.holds = env_at(i, j);
  if (!v.holds) return v;

  // shortest chain b R k1 R ... R a over the whole carrier
  const DependenceRelation& dep = sys_.dep();
  const std::size_t n = dep.behaviours();
  const Element start = sys_.behaviour(j), target = sys_.behaviour(i);
  std::vector<Element> prev(n, n);
  std::vector<bool> seen(n, false);
  std::deque<Element> queue;
  for (Element y = 0; y < n; ++y)
    if (dep.depends(start, y)) {
      seen[y] = true;
      prev[y] = start;
      queue.push_back(y);
    }
  while (!queue.empty() && !seen[target]) {
    const Element x = queue.front();
    queue.pop_front();
    for (Element y = 0; y < n; ++y)
      if (!seen[y] && dep.depends(x, y)) {
        seen[y] = true;
        prev[y] = x;
        queue.push_back(y);
      }
  }
  std::vector<Element> chain{target};
  for (Element x = prev[target]; x != start; x = prev[x]) chain.push_back(x);
  chain.push_back(start);
  std::reverse(chain.begin(), chain.end());
  v.behaviour_chain = std::move(chain);
  return v;
}

CommVerdict Analysis::pfc(std::string_view a, std::string_view b) const {
  auto [i, j] = pair_of(a, b, true);
  CommVerdict v;
  v.holds = preach_[i][j];
  if (v.holds) v.path = shortest_path(i, j, true);
  return v;
}

ConnectivityVerdict Analysis::stimuli_connected() const {
  const std::size_t n = sys_.size();
  std::vector<bool> in(n, false);
  std::deque<std::size_t> queue{0};
  in[0] = true;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y = 0; y < n; ++y)
      if (!in[y] && (sreach_[x][y] || sreach_[y][x])) {
        in[y] = true;
        queue.push_back(y);
      }
  }
  ConnectivityVerdict v;
  for (std::size_t x = 0; x < n; ++x) (in[x] ? v.part : v.rest).push_back(sys_.name(x));
  v.holds = v.rest.empty();
  if (v.holds) v.part.clear();
  return v;
}

std::vector<std::string> Analysis::communication_fixed_points() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sys_.size(); ++i) {
    bool fixed = true;
    for (std::size_t j = 0; j < sys_.size(); ++j)
      if (i != j && sreach_[i][j]) fixed = false;
    if (fixed) out.push_back(sys_.name(i));
  }
  return out;
}

std::vector<std::string> Analysis::universally_influential() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sys_.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < sys_.size(); ++j)
      if (i != j && !sreach_[i][j]) all = false;
    if (all) out.push_back(sys_.name(i));
  }
  return out;
}

CommVerdict direct_stimuli_comm(const AgentSystem& sys, std::string_view a, std::string_view b) {
  return Analysis(sys).direct_stimuli(a, b);
}
bool stimuli_comm_n(const AgentSystem& sys, std::string_view a, std::string_view b,
                    std::size_t n) {
  return Analysis(sys).stimuli_n(a, b, n);
}
CommVerdict stimuli_comm(const AgentSystem& sys, std::string_view a, std::string_view b) {
  return Analysis(sys).stimuli(a, b);
}
ConnectivityVerdict is_stimuli_connected(const AgentSystem& sys) {
  return Analysis(sys).stimuli_connected();
}
std::vector<std::string> communication_fixed_points(const AgentSystem& sys) {
  return Analysis(sys).communication_fixed_points();
}
std::vector<std::string> universally_influential(const AgentSystem& sys) {
  return Analysis(sys).universally_influential();
}
AxiomReport verify_dependence(const AgentSystem& sys) {
  return check_dependence(sys.model().cka(), sys.dep());
}
CommVerdict direct_env_comm(const AgentSystem& sys, std::string_view a, std::string_view b) {
  return Analysis(sys).direct_env(a, b);
}
CommVerdict env_comm(const AgentSystem& sys, std::string_view a, std::string_view b) {
  return Analysis(sys).env(a, b);
}
CommVerdict pfc_direct(const AgentSystem& sys, std::string_view a, std::string_view b) {
  return Analysis(sys).pfc_direct(a, b);
}
CommVerdict pfc(const AgentSystem& sys, std::string_view a, std::string_view b,
                const AnalysisOptions& options) {
  return Analysis(sys, options).pfc(a, b);
}

// ---------------------------------------------------------------------------
// What-if

std::string to_string(ReplacementKind kind) {
  switch (kind) {
    case ReplacementKind::seq: return "seq";
    case ReplacementKind::choice: return "choice";
    case ReplacementKind::seq_star: return "seqstar";
    case ReplacementKind::inactive: return "inactive";
    case ReplacementKind::idle: return "idle";
    case ReplacementKind::strong_orbit_member: return "orbit";
    case ReplacementKind::fixed_point: return "fixed";
  }
  return "?";
}

std::string to_string(Claim claim) {
  switch (claim) {
    case Claim::only_if: return "only-if";
    case Claim::preserved: return "preserved";
    case Claim::not_preserved: return "not-preserved";
  }
  return "?";
}

std::string to_string(WhatIfStatus status) {
  switch (status) {
    case WhatIfStatus::consistent: return "consistent";
    case WhatIfStatus::inconsistent: return "inconsistent";
    case WhatIfStatus::bypassed: return "bypassed";
    case WhatIfStatus::precondition_unmet: return "precondition-unmet";
  }
  return "?";
}

Replacement parse_replacement(std::string_view text, const Carrier& behaviours) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::optional<std::string_view> arg =
      colon == std::string_view::npos ? std::nullopt
                                      : std::optional<std::string_view>(text.substr(colon + 1));
  static const std::map<std::string_view, std::pair<ReplacementKind, bool>> kinds{
      {"seq", {ReplacementKind::seq, true}},
      {"choice", {ReplacementKind::choice, true}},
      {"seqstar", {ReplacementKind::seq_star, false}},
      {"inactive", {ReplacementKind::inactive, false}},
      {"idle", {ReplacementKind::idle, false}},
      {"orbit", {ReplacementKind::strong_orbit_member, true}},
      {"fixed", {ReplacementKind::fixed_point, true}},
  };
  const auto it = kinds.find(kind);
  if (it == kinds.end())
    throw StructuralError("unknown replacement '" + std::string(kind) + "'");
  const auto [k, takes_arg] = it->second;
  if (takes_arg && (!arg || arg->empty()))
    throw StructuralError("replacement '" + std::string(kind) + "' needs a behaviour argument");
  if (!takes_arg && arg)
    throw StructuralError("replacement '" + std::string(kind) + "' takes no argument");
  Replacement r{k, std::nullopt};
  if (arg) r.arg = behaviours.at(*arg);
  return r;
}

ModificationReport whatif_replace(const AgentSystem& sys, std::string_view source,
                                  std::string_view sink, std::string_view relay,
                                  const Replacement& replacement) {
  const std::size_t ia = sys.index_of(source), ib = sys.index_of(sink), ic = sys.index_of(relay);
  if (ia == ib || ia == ic || ib == ic)
    throw DomainError("source, sink and relay must be three distinct agents");
  const C2kaModel& m = sys.model();
  const CkaStructure& k = m.cka();
  if (replacement.arg) k.carrier().require(*replacement.arg);

  const Analysis before(sys);
  if (!before.pfc_direct(source, relay).holds || !before.pfc(relay, sink).holds)
    throw DomainError("hypothesis not established: need pfcD(" + std::string(source) + ", " +
                      std::string(relay) + ") and pfc(" + std::string(relay) + ", " +
                      std::string(sink) + ")");

  ModificationReport r;
  r.replacement = replacement;
  const Element a = sys.behaviour(ia), b = sys.behaviour(ib), c = sys.behaviour(ic);
  r.old_behaviour = c;

  // Is there a source-to-sink path that avoids the relay?
  {
    const std::size_t n = sys.size();
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{ia};
    seen[ia] = true;
    seen[ic] = true;  // blocked
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t y = 0; y < n; ++y)
        if (!seen[y] && (before.stimuli_direct_at(x, y) || before.env_direct_at(x, y))) {
          seen[y] = true;
          queue.push_back(y);
        }
    }
    r.relay_on_every_path = !seen[ib];
  }

  auto arg = [&]() {
    if (!replacement.arg) throw DomainError(to_string(replacement.kind) + " needs a behaviour");
    return *replacement.arg;
  };
  const DependenceRelation& dep = sys.dep();
  switch (replacement.kind) {
    case ReplacementKind::seq: {
      const Element cd = k.seq()(c, arg());
      r.clause = 1;
      r.claim = Claim::only_if;
      r.new_behaviour = cd;
      bool cond = dep.depends(cd, a) && dep.depends(b, cd);
      for (Element t = 0; t < m.stim().size() && !cond; ++t)
        if (m.act(m.out(t, cd), b) != b) cond = true;
      r.condition = cond;
      break;
    }
    case ReplacementKind::choice: {
      const Element d = arg(), cd = k.choice()(c, d);
      r.clause = 2;
      r.claim = Claim::only_if;
      r.new_behaviour = cd;
      bool cond = true;
      for (Element t : before.basic())
        if (natural_leq(k.choice(), m.act(t, d), cd)) cond = false;
      r.condition = cond;
      break;
    }
    case ReplacementKind::seq_star:
      r.clause = 3;
      r.claim = Claim::preserved;
      r.new_behaviour = k.seq_star()(c);
      break;
    case ReplacementKind::inactive:
    case ReplacementKind::idle:
      r.clause = 4;
      r.claim = Claim::not_preserved;
      r.new_behaviour = replacement.kind == ReplacementKind::inactive ? k.zero() : k.one();
      if (!is_without_reactivation(m)) {
        r.note = "the model has reactivation: some stimulus other than " +
                 m.stim().carrier().name(m.stim().deactivation()) + " moves the idle behaviour";
        return r;
      }
      break;
    case ReplacementKind::strong_orbit_member: {
      const Element c2 = arg();
      r.clause = 5;
      r.claim = Claim::preserved;
      r.new_behaviour = c2;
      const auto cls = strong_orbit(m, c);
      if (std::find(cls.begin(), cls.end(), c2) == cls.end()) {
        r.note = k.carrier().name(c2) + " is not in the strong orbit of " + k.carrier().name(c);
        return r;
      }
      break;
    }
    case ReplacementKind::fixed_point: {
      const Element c2 = arg();
      r.clause = 6;
      r.claim = Claim::only_if;
      r.new_behaviour = c2;
      if (!is_fixed_point_behaviour(m, c2)) {
        r.note = k.carrier().name(c2) + " is not a fixed point behaviour";
        return r;
      }
      r.condition = dep.depends(c2, a) && dep.depends(b, c2);
      break;
    }
  }

  r.recomputed = Analysis(sys.with_behaviour(ic, r.new_behaviour)).pfc(source, sink);
  const bool now = r.recomputed->holds;
  switch (r.claim) {
    case Claim::only_if: r.consistent = *r.condition || !now; break;
    case Claim::preserved: r.consistent = now; break;
    case Claim::not_preserved: r.consistent = !now; break;
  }
  if (r.consistent)
    r.status = WhatIfStatus::consistent;
  else if (!r.relay_on_every_path)
    r.status = WhatIfStatus::bypassed;
  else
    r.status = WhatIfStatus::inconsistent;
  return r;
}

}  // namespace c2ka
