#include "c2ka/oracles.hpp"

#include <map>
#include <tuple>

namespace c2ka {

std::vector<Element> oracle_basic_stimuli(const StimulusStructure& st) {
  const std::size_t n = st.size();
  auto divides = [&](Element x, Element y) {
    for (Element z = 0; z < n; ++z)
      if (st.compose()(x, z) == y) return true;
    return false;
  };
  std::vector<Element> out;
  for (Element s = 0; s < n; ++s) {
    if (s == st.deactivation()) continue;
    bool indivisible = true;
    for (Element t = 0; t < n; ++t)
      if (divides(t, s) && t != st.neutral() && t != s) indivisible = false;
    for (Element t = 0; t < n; ++t)
      for (Element r = 0; r < n; ++r)
        if (divides(s, st.compose()(t, r)) && !divides(s, t) && !divides(s, r)) indivisible = false;
    if (indivisible) out.push_back(s);
  }
  return out;
}

bool oracle_direct_stimuli(const AgentSystem& sys, std::size_t a, std::size_t b) {
  if (a == b) return false;
  const C2kaModel& m = sys.model();
  const Element ba = sys.agents()[a].behaviour, bb = sys.agents()[b].behaviour;
  const auto basic = oracle_basic_stimuli(m.stim());
  for (Element s : basic)
    for (Element t : basic) {
      const Element generated = m.out_table()(s, ba);
      const bool sub = m.stim().choice()(t, generated) == generated;
      if (sub && m.act_table()(t, bb) != bb) return true;
    }
  return false;
}

bool oracle_direct_env(const AgentSystem& sys, std::size_t a, std::size_t b) {
  if (a == b) return false;
  return sys.dep().depends(sys.agents()[b].behaviour, sys.agents()[a].behaviour);
}

bool oracle_stimuli_n(const AgentSystem& sys, std::size_t a, std::size_t b, std::size_t n) {
  if (n <= 1) return oracle_direct_stimuli(sys, a, b);
  for (std::size_t c = 0; c < sys.size(); ++c)
    if (c != a && c != b && oracle_stimuli_n(sys, a, c, n - 1) && oracle_direct_stimuli(sys, c, b))
      return true;
  return false;
}

bool oracle_stimuli(const AgentSystem& sys, std::size_t a, std::size_t b) {
  for (std::size_t n = 1; n <= sys.size(); ++n)
    if (oracle_stimuli_n(sys, a, b, n)) return true;
  return false;
}

namespace {

bool pfc_within(const AgentSystem& sys, std::size_t a, std::size_t b, std::size_t k,
                std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool>& memo) {
  auto direct = [&](std::size_t x, std::size_t y) {
    return oracle_direct_stimuli(sys, x, y) || oracle_direct_env(sys, x, y);
  };
  if (k == 0) return false;
  const auto key = std::make_tuple(a, b, k);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  bool holds = direct(a, b);
  for (std::size_t c = 0; c < sys.size() && !holds; ++c)
    if (direct(a, c) && pfc_within(sys, c, b, k - 1, memo)) holds = true;
  memo[key] = holds;
  return holds;
}

}  // namespace

bool oracle_pfc(const AgentSystem& sys, std::size_t a, std::size_t b) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> memo;
  return pfc_within(sys, a, b, sys.size(), memo);
}

bool oracle_partition_connected(const AgentSystem& sys) {
  const std::size_t n = sys.size();
  if (n > 5) throw DomainError("partition oracle is limited to five agents");
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    bool crossed = false;
    for (std::size_t a = 0; a < n && !crossed; ++a)
      for (std::size_t b = 0; b < n && !crossed; ++b) {
        const bool a_in = mask >> a & 1u, b_in = mask >> b & 1u;
        if (a_in && !b_in && (oracle_stimuli(sys, a, b) || oracle_stimuli(sys, b, a)))
          crossed = true;
      }
    if (!crossed) return false;
  }
  return true;
}

std::vector<std::vector<bool>> oracle_closure(const DependenceRelation& dep) {
  const std::size_t n = dep.behaviours();
  std::vector<std::vector<bool>> power(n, std::vector<bool>(n, false));
  for (Element b = 0; b < n; ++b)
    for (Element a = 0; a < n; ++a) power[b][a] = dep.depends(b, a);
  auto result = power;
  for (std::size_t k = 2; k <= n; ++k) {
    // power := power ; R
    std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
    for (Element b = 0; b < n; ++b)
      for (Element m = 0; m < n; ++m)
        if (power[b][m])
          for (Element a = 0; a < n; ++a)
            if (dep.depends(m, a)) next[b][a] = true;
    power = std::move(next);
    for (Element b = 0; b < n; ++b)
      for (Element a = 0; a < n; ++a)
        if (power[b][a]) result[b][a] = true;
  }
  return result;
}

namespace {

bool dfs(const DependenceRelation& dep, Element from, Element target, std::vector<bool>& visited) {
  for (Element next = 0; next < dep.behaviours(); ++next) {
    if (!dep.depends(from, next)) continue;
    if (next == target) return true;
    if (visited[next]) continue;
    visited[next] = true;
    if (dfs(dep, next, target, visited)) return true;
  }
  return false;
}

}  // namespace

bool oracle_env(const AgentSystem& sys, std::size_t a, std::size_t b) {
  std::vector<bool> visited(sys.dep().behaviours(), false);
  return dfs(sys.dep(), sys.agents()[b].behaviour, sys.agents()[a].behaviour, visited);
}

}  // namespace c2ka

namespace c2ka {

namespace {

struct Semiring {
  const BinOpTable& plus;
  const BinOpTable& times;
  Element zero;
  Element one;
};

bool leq(const BinOpTable& plus, Element a, Element b) { return plus(a, b) == b; }

bool semiring_holds(const Semiring& r, std::size_t n) {
  for (Element a = 0; a < n; ++a) {
    if (r.plus(a, a) != a || r.plus(a, r.zero) != a || r.plus(r.zero, a) != a) return false;
    if (r.times(a, r.one) != a || r.times(r.one, a) != a) return false;
    if (r.times(a, r.zero) != r.zero || r.times(r.zero, a) != r.zero) return false;
    for (Element b = 0; b < n; ++b) {
      if (r.plus(a, b) != r.plus(b, a)) return false;
      for (Element c = 0; c < n; ++c) {
        if (r.plus(r.plus(a, b), c) != r.plus(a, r.plus(b, c))) return false;
        if (r.times(r.times(a, b), c) != r.times(a, r.times(b, c))) return false;
        if (r.times(a, r.plus(b, c)) != r.plus(r.times(a, b), r.times(a, c))) return false;
        if (r.times(r.plus(a, b), c) != r.plus(r.times(a, c), r.times(b, c))) return false;
      }
    }
  }
  return true;
}

bool star_holds(const Semiring& r, const UnaryOpTable& star, std::size_t n) {
  for (Element a = 0; a < n; ++a) {
    const Element s = star(a);
    if (!leq(r.plus, r.plus(r.one, r.times(a, s)), s)) return false;
    if (!leq(r.plus, r.plus(r.one, r.times(s, a)), s)) return false;
    for (Element b = 0; b < n; ++b)
      for (Element x = 0; x < n; ++x) {
        if (leq(r.plus, r.plus(b, r.times(a, x)), x) && !leq(r.plus, r.times(s, b), x)) return false;
        if (leq(r.plus, r.plus(b, r.times(x, a)), x) && !leq(r.plus, r.times(b, s), x)) return false;
      }
  }
  return true;
}

}  // namespace

std::string oracle_certify(const C2kaModel& m, bool cascade_output) {
  const CkaStructure& k = m.cka();
  const StimulusStructure& st = m.stim();
  const std::size_t nk = k.size(), ns = st.size();
  const Semiring stim{st.choice(), st.compose(), st.deactivation(), st.neutral()};
  const Semiring seq{k.choice(), k.seq(), k.zero(), k.one()};
  const Semiring par{k.choice(), k.par(), k.zero(), k.one()};

  if (!semiring_holds(stim, ns)) return "stimulus semiring";
  if (!semiring_holds(seq, nk) || !star_holds(seq, k.seq_star(), nk)) return "sequential Kleene algebra";
  if (!semiring_holds(par, nk) || !star_holds(par, k.par_star(), nk)) return "parallel Kleene algebra";
  for (Element a = 0; a < nk; ++a)
    for (Element b = 0; b < nk; ++b) {
      if (k.par()(a, b) != k.par()(b, a)) return "parallel commutativity";
      for (Element c = 0; c < nk; ++c)
        for (Element d = 0; d < nk; ++d)
          if (!leq(k.choice(), k.seq()(k.par()(a, b), k.par()(c, d)),
                   k.par()(k.seq()(b, c), k.seq()(a, d))))
            return "exchange";
    }

  const Element D = st.deactivation(), N = st.neutral();
  for (Element s = 0; s < ns; ++s)
    for (Element a = 0; a < nk; ++a) {
      if (m.act(N, a) != a || m.act(D, a) != k.zero()) return "next-behaviour action";
      if (m.out(s, k.one()) != s || m.out(s, k.zero()) != D) return "next-stimulus action";
      for (Element b = 0; b < nk; ++b) {
        if (m.act(s, k.choice()(a, b)) != k.choice()(m.act(s, a), m.act(s, b))) return "next-behaviour action";
        if (m.out(s, k.choice()(a, b)) != st.choice()(m.out(s, a), m.out(s, b))) return "next-stimulus action";
        if (m.act(s, k.seq()(a, b)) != k.seq()(m.act(s, a), m.act(m.out(s, a), b))) return "cascade";
      }
      for (Element t = 0; t < ns; ++t) {
        if (m.act(st.choice()(s, t), a) != k.choice()(m.act(s, a), m.act(t, a))) return "next-behaviour action";
        if (m.act(st.compose()(s, t), a) != m.act(s, m.act(t, a))) return "next-behaviour action";
        if (m.out(st.choice()(s, t), a) != st.choice()(m.out(s, a), m.out(t, a))) return "next-stimulus action";
        if (m.out(st.compose()(s, t), a) != st.compose()(m.out(s, m.act(t, a)), m.out(t, a)))
          return "sequential output";
      }
      if (cascade_output)
        for (Element b = 0; b < nk; ++b)
          for (Element c = 0; c < nk; ++c)
            if (!leq(k.choice(), c, a) && k.seq()(m.act(s, a), m.act(m.out(s, c), b)) != k.zero())
              return "cascade output";
    }
  return "";
}

}  // namespace c2ka
