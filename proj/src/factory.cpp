#include "c2ka/factory.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "embedded.hpp"

namespace c2ka {

namespace {

namespace fs = std::filesystem;

std::optional<fs::path> fixture_dir() {
  const char* dir = std::getenv("C2KA_FIXTURE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return fs::path(dir);
}

/// (file name, contents) of every sidecar annotation file.
std::vector<std::pair<std::string, std::string>> sidecars() {
  std::vector<std::pair<std::string, std::string>> out;
  if (auto dir = fixture_dir()) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(*dir, ec))
      if (entry.path().extension() == ".json")
        out.emplace_back(entry.path().filename().string(), read_text_file(entry.path().string()));
    if (ec) throw IoError("cannot list '" + dir->string() + "': " + ec.message());
    std::sort(out.begin(), out.end());
    return out;
  }
  for (const auto& f : detail::embedded_fixture_files())
    if (f.name.ends_with(".json")) out.emplace_back(std::string(f.name), std::string(f.text));
  return out;
}

std::string fixture_file(const std::string& file) {
  if (auto dir = fixture_dir()) return read_text_file((*dir / file).string());
  for (const auto& f : detail::embedded_fixture_files())
    if (f.name == file) return std::string(f.text);
  throw IoError("no built-in fixture file '" + file + "'");
}

std::vector<Element> cells_of(const Carrier& c, std::initializer_list<std::string_view> rows) {
  std::vector<Element> cells;
  for (std::string_view row : rows) {
    std::istringstream in{std::string(row)};
    std::string word;
    while (in >> word) cells.push_back(c.at(word));
  }
  return cells;
}

std::vector<std::string> numbered(std::size_t n, std::vector<std::string> first, std::string_view stem) {
  for (std::size_t i = first.size(); i < n; ++i) first.push_back(std::string(stem) + std::to_string(i));
  first.resize(n);
  return first;
}

Carrier stimulus_carrier(std::size_t n) { return Carrier(numbered(n, {"D", "N"}, "s")); }
Carrier behaviour_carrier(std::size_t n) { return Carrier(numbered(n, {"0", "1"}, "k")); }

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Join table of a random lattice on n elements with index 0 at the bottom.
/// Index 1 lands anywhere above it.
BinOpTable random_lattice(std::mt19937_64& rng, std::size_t n) {
  // Node order: chain, or for four elements possibly the diamond.
  const bool diamond = n == 4 && uniform(rng, 0, 1) == 1;
  auto leq = [&](std::size_t i, std::size_t j) {
    if (i == j || i == 0 || j == n - 1) return true;
    if (diamond) return false;
    return i < j;
  };
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), 0);
  std::shuffle(node.begin() + 1, node.end(), rng);
  std::vector<Element> index_of(n);
  for (Element e = 0; e < n; ++e) index_of[node[e]] = e;
  return BinOpTable::from_function(n, [&](Element a, Element b) {
    const std::size_t x = node[a], y = node[b];
    std::size_t best = n - 1;
    for (std::size_t z = 0; z < n; ++z)
      if (leq(x, z) && leq(y, z) && leq(z, best)) best = z;
    return index_of[best];
  });
}

/// Random table with `zero` absorbing and `one` the identity.
BinOpTable random_product(std::mt19937_64& rng, std::size_t n, Element zero, Element one,
                          bool symmetric) {
  std::vector<Element> cells(n * n);
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      Element& cell = cells[a * n + b];
      if (a == zero || b == zero)
        cell = zero;
      else if (a == one)
        cell = b;
      else if (b == one)
        cell = a;
      else if (symmetric && b < a)
        cell = cells[b * n + a];
      else
        cell = static_cast<Element>(uniform(rng, 0, n - 1));
    }
  return BinOpTable(n, std::move(cells));
}

/// Least x with 1 + a.x <= x and 1 + x.a <= x, if there is a least one.
std::optional<UnaryOpTable> least_stars(const BinOpTable& plus, const BinOpTable& times, Element one) {
  const std::size_t n = plus.size();
  std::vector<Element> cells(n);
  for (Element a = 0; a < n; ++a) {
    std::vector<Element> solutions;
    for (Element x = 0; x < n; ++x) {
      const bool left = natural_leq(plus, plus(one, times(a, x)), x);
      const bool right = natural_leq(plus, plus(one, times(x, a)), x);
      if (left && right) solutions.push_back(x);
    }
    auto least = std::find_if(solutions.begin(), solutions.end(), [&](Element x) {
      return std::all_of(solutions.begin(), solutions.end(),
                         [&](Element y) { return natural_leq(plus, x, y); });
    });
    if (least == solutions.end()) return std::nullopt;
    cells[a] = *least;
  }
  return UnaryOpTable(n, std::move(cells));
}

constexpr std::size_t kStageTries = 24;

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& [file, text] : sidecars()) {
    const auto meta = nlohmann::json::parse(text, nullptr, false);
    if (meta.is_discarded() || !meta.contains("name"))
      throw StructuralError("fixture annotations '" + file + "' have no name");
    names.push_back(meta["name"].get<std::string>());
  }
  return names;
}

Fixture load_fixture(std::string_view name) {
  for (const auto& [file, text] : sidecars()) {
    const auto meta = nlohmann::json::parse(text, nullptr, false);
    if (meta.is_discarded()) throw StructuralError("fixture annotations '" + file + "' are not JSON");
    if (meta.value("name", "") != name) continue;

    ValidationOptions validation;
    validation.enforce_cascade_output = meta.value("profile", "strict") != "relaxed";
    const auto file_name = meta.at("file").get<std::string>();
    std::string source = fixture_file(file_name);
    ModelDocument doc = parse_model(source);
    Fixture fx{std::string(name), file_name, std::move(source), text, std::move(doc), validation};

    AxiomReport report = fx.doc.agents.empty() ? validate_model(fx.doc.model, fx.validation)
                                               : validate_system(fx.doc.system(), fx.validation);
    if (!report.passed())
      throw StructuralError("fixture " + fx.name + " violates " + report.violations.front().law);
    return fx;
  }
  throw StructuralError("unknown fixture '" + std::string(name) + "'");
}

Fixture fixture_relay() { return load_fixture("C2KA-RELAY"); }

ModelDocument relay_document() {
  Carrier s({"D", "N", "x", "y"});
  Carrier k({"0", "1", "a", "c", "b"});
  StimulusStructure stim(s,
                         BinOpTable(4, cells_of(s, {"D N x y", "N N N y", "x N x y", "y y y y"})),
                         BinOpTable(4, cells_of(s, {"D D D D", "D N x y", "D x x x", "D y y y"})),
                         s.at("D"), s.at("N"));
  CkaStructure cka(
      k,
      BinOpTable(5, cells_of(k, {"0 1 a c b", "1 1 1 c b", "a 1 a c b", "c c c c c", "b b b c b"})),
      BinOpTable(5, cells_of(k, {"0 0 0 0 0", "0 1 a c b", "0 a a a a", "0 c a c c", "0 b a c b"})),
      BinOpTable(5, cells_of(k, {"0 0 0 0 0", "0 1 a c b", "0 a a a a", "0 c a c c", "0 b a c c"})),
      UnaryOpTable(5, cells_of(k, {"1 1 1 c b"})), UnaryOpTable(5, cells_of(k, {"1 1 1 c c"})),
      k.at("0"), k.at("1"));
  ActionTable act(4, 5, 5, cells_of(k, {"0 0 0 0 0", "0 1 a c b", "0 1 a b b", "0 1 a c c"}));
  ActionTable out(4, 5, 4, cells_of(s, {"D D D D D", "D N x y N", "D x x x x", "D y x y y"}));

  ModelDocument doc{C2kaModel(std::move(cka), std::move(stim), std::move(act), std::move(out)),
                    {{"A", k.at("a")}, {"C", k.at("c")}, {"B", k.at("b")}},
                    {{k.at("c"), k.at("c")}, {k.at("b"), k.at("c")}},
                    false};
  return doc;
}

StimulusStructure family_lattice_stimuli(std::size_t k) {
  if (k == 0) throw DomainError("a stimulus structure needs at least one element");
  // Carrier order D, N, then the chain from just above D upwards; rank 0 is
  // the bottom and rank k-1 the top.
  std::vector<std::string> names{"D"};
  if (k > 1) names.push_back("N");
  for (std::size_t i = 1; i + 1 < k; ++i) names.push_back("m" + std::to_string(i));
  auto rank = [k](Element e) -> std::size_t {
    if (e == 0) return 0;
    if (e == 1) return k - 1;
    return e - 1;
  };
  auto at_rank = [k](std::size_t r) -> Element {
    if (r == 0) return 0;
    if (r == k - 1) return 1;
    return r + 1;
  };
  const Element top = k > 1 ? 1 : 0;
  return StimulusStructure(
      Carrier(names),
      BinOpTable::from_function(k, [&](Element a, Element b) { return at_rank(std::max(rank(a), rank(b))); }),
      BinOpTable::from_function(k, [&](Element a, Element b) { return at_rank(std::min(rank(a), rank(b))); }),
      0, top);
}

CkaStructure two_element_cka() {
  auto join = BinOpTable(2, {0, 1, 1, 1});
  auto meet = BinOpTable(2, {0, 0, 0, 1});
  auto star = UnaryOpTable(2, {1, 1});
  return CkaStructure(Carrier({"0", "1"}), join, meet, meet, star, star, 0, 1);
}

C2kaModel family_trivial_model(std::size_t k) {
  if (k < 2) throw DomainError("a trivial model needs distinct D and N (k >= 2)");
  StimulusStructure stim = family_lattice_stimuli(k);
  const Element d = stim.deactivation();
  auto act = ActionTable::from_function(k, 2, 2, [&](Element s, Element a) -> Element {
    return s == d ? 0 : a;
  });
  auto out = ActionTable::from_function(k, 2, k, [&](Element s, Element a) -> Element {
    return a == 0 ? d : s;
  });
  return C2kaModel(two_element_cka(), std::move(stim), std::move(act), std::move(out));
}

ModelSampler::ModelSampler(std::uint64_t seed, SamplerBounds bounds)
    : rng_(seed), bounds_(bounds) {
  if (bounds_.min_stimuli < 2 || bounds_.min_behaviours < 2 || bounds_.max_stimuli > 4 ||
      bounds_.max_behaviours > 4 || bounds_.min_stimuli > bounds_.max_stimuli ||
      bounds_.min_behaviours > bounds_.max_behaviours)
    throw DomainError("sampler bounds must lie within 2..4 elements per carrier");
  validation_.enforce_cascade_output = !bounds_.relaxed;
}

std::optional<StimulusStructure> ModelSampler::stimuli(std::size_t n) {
  for (std::size_t i = 0; i < kStageTries; ++i) {
    ++candidates_;
    StimulusStructure s(stimulus_carrier(n), random_lattice(rng_, n), random_product(rng_, n, 0, 1, false),
                        0, 1);
    if (check_stimulus_structure(s, validation_.checks).passed()) return s;
  }
  return std::nullopt;
}

std::optional<CkaStructure> ModelSampler::behaviours(std::size_t n) {
  for (std::size_t i = 0; i < kStageTries; ++i) {
    ++candidates_;
    BinOpTable plus = random_lattice(rng_, n);
    BinOpTable seq = random_product(rng_, n, 0, 1, false);
    BinOpTable par = random_product(rng_, n, 0, 1, true);
    auto seq_star = least_stars(plus, seq, 1);
    auto par_star = least_stars(plus, par, 1);
    if (!seq_star || !par_star) continue;
    CkaStructure k(behaviour_carrier(n), std::move(plus), std::move(seq), std::move(par),
                   std::move(*seq_star), std::move(*par_star), 0, 1);
    if (check_cka(k, validation_.checks).passed()) return k;
  }
  return std::nullopt;
}

std::optional<C2kaModel> ModelSampler::actions(const StimulusStructure& s, const CkaStructure& k) {
  const std::size_t ns = s.size(), nk = k.size();
  const Element d = s.deactivation(), neutral = s.neutral(), zero = k.zero(), one = k.one();

  auto forced_out = [&](Element st, Element a) -> std::optional<Element> {
    if (st == d || a == zero) return d;
    if (a == one) return st;
    return std::nullopt;
  };

  for (std::size_t i = 0; i < kStageTries; ++i) {
    ++candidates_;
    auto act = ActionTable::from_function(ns, nk, nk, [&](Element st, Element a) -> Element {
      if (st == d || a == zero) return zero;
      if (st == neutral) return a;
      return static_cast<Element>(uniform(rng_, 0, nk - 1));
    });
    auto placeholder = ActionTable::from_function(ns, nk, ns, [&](Element st, Element a) {
      return forced_out(st, a).value_or(d);
    });
    if (!check_left_semimodule(C2kaModel(k, s, act, placeholder), validation_.checks).passed()) continue;

    for (std::size_t j = 0; j < kStageTries; ++j) {
      ++candidates_;
      auto out = ActionTable::from_function(ns, nk, ns, [&](Element st, Element a) -> Element {
        if (auto f = forced_out(st, a)) return *f;
        return static_cast<Element>(uniform(rng_, 0, ns - 1));
      });
      C2kaModel m(k, s, act, std::move(out));
      if (check_right_semimodule(m, validation_.checks).passed() &&
          check_c2ka(m, validation_).passed())
        return m;
    }
  }
  return std::nullopt;
}

std::optional<C2kaModel> ModelSampler::next() {
  for (std::size_t attempt = 0; attempt < bounds_.attempts; ++attempt) {
    const std::size_t ns = uniform(rng_, bounds_.min_stimuli, bounds_.max_stimuli);
    const std::size_t nk = uniform(rng_, bounds_.min_behaviours, bounds_.max_behaviours);
    auto s = stimuli(ns);
    if (!s) continue;
    auto k = behaviours(nk);
    if (!k) continue;
    if (auto m = actions(*s, *k)) {
      ++accepted_;
      return m;
    }
  }
  return std::nullopt;
}

AgentSystem random_system(std::mt19937_64& rng, const C2kaModel& model, std::size_t max_agents) {
  if (max_agents == 0) throw DomainError("a system needs at least one agent");
  const CkaStructure& k = model.cka();
  const std::size_t nk = k.size();

  std::vector<Agent> agents;
  const std::size_t count = uniform(rng, 1, max_agents);
  for (std::size_t i = 0; i < count; ++i)
    agents.push_back({std::string(1, static_cast<char>('A' + i)),
                      static_cast<Element>(uniform(rng, 0, nk - 1))});

  // Generators avoid 0 and 1, which the dependence laws keep unrelated.
  DependenceRelation dep(nk);
  std::vector<Element> proper;
  for (Element e = 0; e < nk; ++e)
    if (e != k.zero() && e != k.one()) proper.push_back(e);
  if (!proper.empty()) {
    for (int tries = 0; tries < 10; ++tries) {
      std::vector<std::pair<Element, Element>> gens;
      const std::size_t g = uniform(rng, 0, 2);
      for (std::size_t i = 0; i < g; ++i)
        gens.emplace_back(proper[uniform(rng, 0, proper.size() - 1)],
                          proper[uniform(rng, 0, proper.size() - 1)]);
      try {
        DependenceRelation closed = bilinear_closure(k, gens);
        if (check_dependence(k, closed).passed()) {
          dep = std::move(closed);
          break;
        }
      } catch (const ClosureConflict&) {
      }
    }
  }
  return AgentSystem(model, std::move(agents), std::move(dep));
}

AgentSystem arbitrary_system(std::mt19937_64& rng, std::size_t stimuli, std::size_t behaviours,
                             std::size_t agents) {
  if (stimuli < 2 || behaviours < 2 || agents == 0)
    throw DomainError("arbitrary systems need two stimuli, two behaviours and one agent");
  const std::size_t ns = stimuli, nk = behaviours;
  auto any = [&](std::size_t range) { return static_cast<Element>(uniform(rng, 0, range - 1)); };
  auto table = [&](std::size_t n) { return BinOpTable::from_function(n, [&](Element, Element) { return any(n); }); };
  auto unary = [&](std::size_t n) {
    std::vector<Element> cells(n);
    for (auto& c : cells) c = any(n);
    return UnaryOpTable(n, std::move(cells));
  };

  StimulusStructure s(stimulus_carrier(ns), table(ns), table(ns), 0, 1);
  CkaStructure k(behaviour_carrier(nk), table(nk), table(nk), table(nk), unary(nk), unary(nk), 0, 1);
  auto act = ActionTable::from_function(ns, nk, nk, [&](Element, Element) { return any(nk); });
  auto out = ActionTable::from_function(ns, nk, ns, [&](Element, Element) { return any(ns); });

  DependenceRelation dep(nk);
  for (Element b = 0; b < nk; ++b)
    for (Element a = 0; a < nk; ++a)
      if (uniform(rng, 0, 3) == 0) dep.set(b, a);

  std::vector<Agent> list;
  for (std::size_t i = 0; i < agents; ++i)
    list.push_back({std::string(1, static_cast<char>('A' + i)), any(nk)});
  return AgentSystem(C2kaModel(std::move(k), std::move(s), std::move(act), std::move(out)),
                     std::move(list), std::move(dep));
}

}  // namespace c2ka
