#ifndef C2KA_ALGEBRA_HPP
#define C2KA_ALGEBRA_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace c2ka {

/// Index of an element inside its Carrier.
using Element = std::size_t;

/// Malformed input: unknown element, table of the wrong shape, value outside
/// the carrier. Never used for law violations, which go into an AxiomReport.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed request that the operation's preconditions exclude.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered finite set of named symbols.
class Carrier {
 public:
  explicit Carrier(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Element e) const;
  const std::vector<std::string>& names() const { return names_; }

  std::optional<Element> find(std::string_view name) const;
  /// Throws StructuralError for an unknown name.
  Element at(std::string_view name) const;
  bool contains(Element e) const { return e < names_.size(); }
  void require(Element e) const;

  bool operator==(const Carrier& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Element> index_;
};

/// Dense rows x cols table with values in [0, range).
class Grid {
 public:
  Grid(std::size_t rows, std::size_t cols, std::size_t range,
       std::vector<Element> cells);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t range() const { return range_; }
  std::span<const Element> cells() const { return cells_; }

  Element at(Element r, Element c) const { return cells_[r * cols_ + c]; }
  Grid with(Element r, Element c, Element value) const;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t range_;
  std::vector<Element> cells_;
};

/// Total binary operation on an n-element carrier.
class BinOpTable {
 public:
  BinOpTable(std::size_t n, std::vector<Element> cells);

  template <class F>
  static BinOpTable from_function(std::size_t n, F&& f) {
    std::vector<Element> cells(n * n);
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) cells[a * n + b] = f(a, b);
    return BinOpTable(n, std::move(cells));
  }

  std::size_t size() const { return grid_.rows(); }
  Element operator()(Element a, Element b) const { return grid_.at(a, b); }
  BinOpTable with(Element a, Element b, Element value) const;
  std::span<const Element> cells() const { return grid_.cells(); }

  bool operator==(const BinOpTable&) const = default;

 private:
  explicit BinOpTable(Grid g) : grid_(std::move(g)) {}
  Grid grid_;
};

/// Total unary operation on an n-element carrier.
class UnaryOpTable {
 public:
  UnaryOpTable(std::size_t n, std::vector<Element> cells);

  std::size_t size() const { return grid_.cols(); }
  Element operator()(Element a) const { return grid_.at(0, a); }
  UnaryOpTable with(Element a, Element value) const;
  std::span<const Element> cells() const { return grid_.cells(); }

  bool operator==(const UnaryOpTable&) const = default;

 private:
  explicit UnaryOpTable(Grid g) : grid_(std::move(g)) {}
  Grid grid_;
};

/// Concurrent Kleene algebra given by explicit tables.
class CkaStructure {
 public:
  CkaStructure(Carrier carrier, BinOpTable choice, BinOpTable seq,
               BinOpTable par, UnaryOpTable seq_star, UnaryOpTable par_star,
               Element zero, Element one);

  const Carrier& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }
  const BinOpTable& choice() const { return choice_; }
  const BinOpTable& seq() const { return seq_; }
  const BinOpTable& par() const { return par_; }
  const UnaryOpTable& seq_star() const { return seq_star_; }
  const UnaryOpTable& par_star() const { return par_star_; }
  Element zero() const { return zero_; }
  Element one() const { return one_; }

  bool operator==(const CkaStructure&) const = default;

 private:
  Carrier carrier_;
  BinOpTable choice_;
  BinOpTable seq_;
  BinOpTable par_;
  UnaryOpTable seq_star_;
  UnaryOpTable par_star_;
  Element zero_;
  Element one_;
};

/// One instantiation of a law that does not hold.
struct Violation {
  std::string law;
  /// (variable, element name) pairs in the order the law quantifies them.
  std::vector<std::pair<std::string, std::string>> witness;
  std::string lhs;
  std::string rhs;
};

struct AxiomReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool passed() const { return violations.empty(); }
  bool violates(std::string_view law) const;
  /// Appends another report, keeping law-name order.
  void merge(AxiomReport other);
};

struct CheckOptions {
  /// Report every violating instantiation instead of the first per law.
  bool collect_all = false;
  /// When false, a non-commutative parallel composition is a warning.
  bool require_par_commutative = true;
};

/// Accumulates violations in sweep order; finish() sorts them by law name.
class ViolationSink {
 public:
  explicit ViolationSink(const CheckOptions& options) : options_(options) {}

  /// False once the law already has a violation and collect_all is off, so
  /// callers can skip the remaining instantiations.
  bool wants(const std::string& law) const;
  void add(Violation v);
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  AxiomReport finish() &&;

 private:
  const CheckOptions& options_;
  std::map<std::string, std::vector<Violation>> by_law_;
  std::vector<std::string> warnings_;
};

struct MonoidReport {
  AxiomReport axioms;
  bool commutative = false;
  bool idempotent = false;
};

/// a <= b in the natural order of an idempotent `plus`.
bool natural_leq(const BinOpTable& plus, Element a, Element b);

MonoidReport check_monoid(const Carrier& carrier, const BinOpTable& op,
                          Element identity, const CheckOptions& options = {},
                          std::string_view prefix = "monoid");

AxiomReport check_idempotent_semiring(const Carrier& carrier,
                                      const BinOpTable& plus,
                                      const BinOpTable& times, Element zero,
                                      Element one,
                                      const CheckOptions& options = {},
                                      std::string_view prefix = "semiring");

AxiomReport check_kleene_algebra(const Carrier& carrier, const BinOpTable& plus,
                                 const BinOpTable& times,
                                 const UnaryOpTable& star, Element zero,
                                 Element one, const CheckOptions& options = {},
                                 std::string_view prefix = "kleene");

/// Both Kleene algebras, commutativity of par, and the exchange law.
AxiomReport check_cka(const CkaStructure& cka, const CheckOptions& options = {});

}  // namespace c2ka

#endif  // C2KA_ALGEBRA_HPP
