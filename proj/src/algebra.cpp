#include "c2ka/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace c2ka {

Carrier::Carrier(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw StructuralError("carrier must not be empty");
  for (Element i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw StructuralError("carrier symbol must not be empty");
    if (!index_.emplace(names_[i], i).second)
      throw StructuralError("duplicate carrier symbol '" + names_[i] + "'");
  }
}

const std::string& Carrier::name(Element e) const {
  require(e);
  return names_[e];
}

std::optional<Element> Carrier::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Element Carrier::at(std::string_view name) const {
  if (auto e = find(name)) return *e;
  throw StructuralError("unknown element '" + std::string(name) + "'");
}

void Carrier::require(Element e) const {
  if (!contains(e))
    throw StructuralError("element index " + std::to_string(e) +
                          " outside carrier of size " + std::to_string(size()));
}

Grid::Grid(std::size_t rows, std::size_t cols, std::size_t range,
           std::vector<Element> cells)
    : rows_(rows), cols_(cols), range_(range), cells_(std::move(cells)) {
  if (cells_.size() != rows_ * cols_)
    throw StructuralError("table is not total: expected " +
                          std::to_string(rows_ * cols_) + " entries, got " +
                          std::to_string(cells_.size()));
  for (Element v : cells_)
    if (v >= range_)
      throw StructuralError("table entry " + std::to_string(v) +
                            " is outside the carrier");
}

Grid Grid::with(Element r, Element c, Element value) const {
  if (r >= rows_ || c >= cols_ || value >= range_)
    throw StructuralError("table mutation out of range");
  Grid copy = *this;
  copy.cells_[r * cols_ + c] = value;
  return copy;
}

BinOpTable::BinOpTable(std::size_t n, std::vector<Element> cells)
    : grid_(n, n, n, std::move(cells)) {}

BinOpTable BinOpTable::with(Element a, Element b, Element value) const {
  return BinOpTable(grid_.with(a, b, value));
}

UnaryOpTable::UnaryOpTable(std::size_t n, std::vector<Element> cells)
    : grid_(1, n, n, std::move(cells)) {}

UnaryOpTable UnaryOpTable::with(Element a, Element value) const {
  return UnaryOpTable(grid_.with(0, a, value));
}

CkaStructure::CkaStructure(Carrier carrier, BinOpTable choice, BinOpTable seq,
                           BinOpTable par, UnaryOpTable seq_star,
                           UnaryOpTable par_star, Element zero, Element one)
    : carrier_(std::move(carrier)),
      choice_(std::move(choice)),
      seq_(std::move(seq)),
      par_(std::move(par)),
      seq_star_(std::move(seq_star)),
      par_star_(std::move(par_star)),
      zero_(zero),
      one_(one) {
  const std::size_t n = carrier_.size();
  if (choice_.size() != n || seq_.size() != n || par_.size() != n ||
      seq_star_.size() != n || par_star_.size() != n)
    throw StructuralError("CKA table size does not match its carrier");
  carrier_.require(zero_);
  carrier_.require(one_);
}

bool AxiomReport::violates(std::string_view law) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.law == law; });
}

void AxiomReport::merge(AxiomReport other) {
  violations.insert(violations.end(),
                    std::make_move_iterator(other.violations.begin()),
                    std::make_move_iterator(other.violations.end()));
  std::stable_sort(violations.begin(), violations.end(),
                   [](const Violation& a, const Violation& b) { return a.law < b.law; });
  warnings.insert(warnings.end(), std::make_move_iterator(other.warnings.begin()),
                  std::make_move_iterator(other.warnings.end()));
}

bool ViolationSink::wants(const std::string& law) const {
  if (options_.collect_all) return true;
  auto it = by_law_.find(law);
  return it == by_law_.end() || it->second.empty();
}

void ViolationSink::add(Violation v) {
  if (!wants(v.law)) return;
  by_law_[v.law].push_back(std::move(v));
}

AxiomReport ViolationSink::finish() && {
  AxiomReport report;
  for (auto& [law, list] : by_law_)
    for (auto& v : list) report.violations.push_back(std::move(v));
  report.warnings = std::move(warnings_);
  return report;
}

bool natural_leq(const BinOpTable& plus, Element a, Element b) {
  if (a >= plus.size() || b >= plus.size())
    throw StructuralError("natural_leq: element outside the carrier");
  return plus(a, b) == b;
}

namespace {

std::string law_name(std::string_view prefix, std::string_view law) {
  std::string out(prefix);
  out += '.';
  out += law;
  return out;
}

void require_square(const Carrier& carrier, const BinOpTable& op) {
  if (op.size() != carrier.size())
    throw StructuralError("table size " + std::to_string(op.size()) +
                          " does not match carrier size " +
                          std::to_string(carrier.size()));
}

Violation make(const Carrier& c, std::string law,
               std::initializer_list<std::pair<const char*, Element>> vars,
               Element lhs, Element rhs) {
  Violation v{std::move(law), {}, c.name(lhs), c.name(rhs)};
  for (auto& [var, e] : vars) v.witness.emplace_back(var, c.name(e));
  return v;
}

void sweep_associativity(const Carrier& c, const BinOpTable& op,
                         const std::string& law, ViolationSink& sink) {
  const std::size_t n = c.size();
  for (Element a = 0; a < n && sink.wants(law); ++a)
    for (Element b = 0; b < n; ++b)
      for (Element x = 0; x < n; ++x) {
        Element lhs = op(op(a, b), x), rhs = op(a, op(b, x));
        if (lhs != rhs) sink.add(make(c, law, {{"a", a}, {"b", b}, {"c", x}}, lhs, rhs));
      }
}

void sweep_identity(const Carrier& c, const BinOpTable& op, Element id,
                    const std::string& left, const std::string& right,
                    ViolationSink& sink) {
  for (Element a = 0; a < c.size(); ++a) {
    if (op(id, a) != a) sink.add(make(c, left, {{"a", a}}, op(id, a), a));
    if (op(a, id) != a) sink.add(make(c, right, {{"a", a}}, op(a, id), a));
  }
}

bool is_commutative(const BinOpTable& op) {
  for (Element a = 0; a < op.size(); ++a)
    for (Element b = a + 1; b < op.size(); ++b)
      if (op(a, b) != op(b, a)) return false;
  return true;
}

bool is_idempotent(const BinOpTable& op) {
  for (Element a = 0; a < op.size(); ++a)
    if (op(a, a) != a) return false;
  return true;
}

void sweep_semiring(const Carrier& c, const BinOpTable& plus,
                    const BinOpTable& times, Element zero, Element one,
                    std::string_view prefix, ViolationSink& sink) {
  const std::size_t n = c.size();
  sweep_associativity(c, plus, law_name(prefix, "plus-associativity"), sink);
  sweep_identity(c, plus, zero, law_name(prefix, "plus-left-identity"),
                 law_name(prefix, "plus-right-identity"), sink);
  const std::string comm = law_name(prefix, "plus-commutativity");
  const std::string idem = law_name(prefix, "plus-idempotence");
  for (Element a = 0; a < n; ++a) {
    if (plus(a, a) != a) sink.add(make(c, idem, {{"a", a}}, plus(a, a), a));
    for (Element b = 0; b < n; ++b)
      if (plus(a, b) != plus(b, a))
        sink.add(make(c, comm, {{"a", a}, {"b", b}}, plus(a, b), plus(b, a)));
  }
  sweep_associativity(c, times, law_name(prefix, "times-associativity"), sink);
  sweep_identity(c, times, one, law_name(prefix, "times-left-identity"),
                 law_name(prefix, "times-right-identity"), sink);
  const std::string ldist = law_name(prefix, "left-distributivity");
  const std::string rdist = law_name(prefix, "right-distributivity");
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element x = 0; x < n; ++x) {
        Element l = times(a, plus(b, x)), r = plus(times(a, b), times(a, x));
        if (l != r) sink.add(make(c, ldist, {{"a", a}, {"b", b}, {"c", x}}, l, r));
        l = times(plus(b, x), a);
        r = plus(times(b, a), times(x, a));
        if (l != r) sink.add(make(c, rdist, {{"a", a}, {"b", b}, {"c", x}}, l, r));
      }
  const std::string lann = law_name(prefix, "left-annihilation");
  const std::string rann = law_name(prefix, "right-annihilation");
  for (Element a = 0; a < n; ++a) {
    if (times(zero, a) != zero) sink.add(make(c, lann, {{"a", a}}, times(zero, a), zero));
    if (times(a, zero) != zero) sink.add(make(c, rann, {{"a", a}}, times(a, zero), zero));
  }
}

void sweep_star(const Carrier& c, const BinOpTable& plus, const BinOpTable& times,
                const UnaryOpTable& star, Element one, std::string_view prefix,
                ViolationSink& sink) {
  const std::size_t n = c.size();
  auto leq = [&](Element a, Element b) { return plus(a, b) == b; };
  const std::string unfold_l = law_name(prefix, "star-unfold-left");
  const std::string unfold_r = law_name(prefix, "star-unfold-right");
  for (Element a = 0; a < n; ++a) {
    Element l = plus(one, times(a, star(a)));
    if (!leq(l, star(a))) sink.add(make(c, unfold_l, {{"a", a}}, plus(l, star(a)), star(a)));
    l = plus(one, times(star(a), a));
    if (!leq(l, star(a))) sink.add(make(c, unfold_r, {{"a", a}}, plus(l, star(a)), star(a)));
  }
  // Horn clauses: the premise must hold before the conclusion is demanded.
  const std::string ind_l = law_name(prefix, "star-induction-left");
  const std::string ind_r = law_name(prefix, "star-induction-right");
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      for (Element x = 0; x < n; ++x) {
        if (leq(plus(b, times(a, x)), x) && !leq(times(star(a), b), x))
          sink.add(make(c, ind_l, {{"a", a}, {"b", b}, {"x", x}},
                        plus(times(star(a), b), x), x));
        if (leq(plus(b, times(x, a)), x) && !leq(times(b, star(a)), x))
          sink.add(make(c, ind_r, {{"a", a}, {"b", b}, {"x", x}},
                        plus(times(b, star(a)), x), x));
      }
}

}  // namespace

MonoidReport check_monoid(const Carrier& carrier, const BinOpTable& op,
                          Element identity, const CheckOptions& options,
                          std::string_view prefix) {
  require_square(carrier, op);
  carrier.require(identity);
  ViolationSink sink(options);
  sweep_associativity(carrier, op, law_name(prefix, "associativity"), sink);
  sweep_identity(carrier, op, identity, law_name(prefix, "left-identity"),
                 law_name(prefix, "right-identity"), sink);
  MonoidReport report;
  report.axioms = std::move(sink).finish();
  report.commutative = is_commutative(op);
  report.idempotent = is_idempotent(op);
  return report;
}

AxiomReport check_idempotent_semiring(const Carrier& carrier,
                                      const BinOpTable& plus,
                                      const BinOpTable& times, Element zero,
                                      Element one, const CheckOptions& options,
                                      std::string_view prefix) {
  require_square(carrier, plus);
  require_square(carrier, times);
  carrier.require(zero);
  carrier.require(one);
  ViolationSink sink(options);
  sweep_semiring(carrier, plus, times, zero, one, prefix, sink);
  return std::move(sink).finish();
}

AxiomReport check_kleene_algebra(const Carrier& carrier, const BinOpTable& plus,
                                 const BinOpTable& times,
                                 const UnaryOpTable& star, Element zero,
                                 Element one, const CheckOptions& options,
                                 std::string_view prefix) {
  require_square(carrier, plus);
  require_square(carrier, times);
  if (star.size() != carrier.size())
    throw StructuralError("star table size does not match carrier size");
  carrier.require(zero);
  carrier.require(one);
  ViolationSink sink(options);
  sweep_semiring(carrier, plus, times, zero, one, prefix, sink);
  sweep_star(carrier, plus, times, star, one, prefix, sink);
  return std::move(sink).finish();
}

AxiomReport check_cka(const CkaStructure& cka, const CheckOptions& options) {
  const Carrier& c = cka.carrier();
  AxiomReport report = check_kleene_algebra(c, cka.choice(), cka.seq(), cka.seq_star(),
                                            cka.zero(), cka.one(), options, "seq-ka");
  report.merge(check_kleene_algebra(c, cka.choice(), cka.par(), cka.par_star(),
                                    cka.zero(), cka.one(), options, "par-ka"));

  ViolationSink sink(options);
  const std::size_t n = c.size();
  const BinOpTable& plus = cka.choice();
  const BinOpTable& seq = cka.seq();
  const BinOpTable& par = cka.par();

  for (Element a = 0; a < n; ++a)
    for (Element b = a + 1; b < n; ++b)
      if (par(a, b) != par(b, a)) {
        if (options.require_par_commutative) {
          sink.add(make(c, "cka.par-commutativity", {{"a", a}, {"b", b}}, par(a, b),
                        par(b, a)));
        } else {
          sink.warn("parallel composition is not commutative: " + c.name(a) + " * " +
                    c.name(b) + " = " + c.name(par(a, b)) + " but " + c.name(b) +
                    " * " + c.name(a) + " = " + c.name(par(b, a)));
          a = n;
          break;
        }
      }

  // (a*b);(c*d) <= (b;c)*(a;d)
  const std::string exchange = "cka.exchange";
  for (Element a = 0; a < n && sink.wants(exchange); ++a)
    for (Element b = 0; b < n; ++b)
      for (Element x = 0; x < n; ++x)
        for (Element d = 0; d < n; ++d) {
          Element lhs = seq(par(a, b), par(x, d));
          Element rhs = par(seq(b, x), seq(a, d));
          if (plus(lhs, rhs) != rhs)
            sink.add(make(c, exchange, {{"a", a}, {"b", b}, {"c", x}, {"d", d}}, lhs, rhs));
        }

  if (n == 1)
    sink.warn("degenerate CKA: the carrier has one element, so 0 = 1");
  report.merge(std::move(sink).finish());
  return report;
}

}  // namespace c2ka
