#ifndef C2KA_DSL_HPP
#define C2KA_DSL_HPP

#include <string>
#include <utility>
#include <vector>

#include "c2ka/comm.hpp"
#include "c2ka/model.hpp"

namespace c2ka {

/// Everything a model file describes, fully resolved.
struct ModelDocument {
  C2kaModel model;
  std::vector<Agent> agents;
  /// (dependent, dependee) pairs, sorted and without repeats. With `closure`
  /// set they are generators for bilinear_closure.
  std::vector<std::pair<Element, Element>> dependence;
  bool closure = false;

  DependenceRelation relation() const;
  /// Throws StructuralError when the document declares no agents.
  AgentSystem system() const;

  bool operator==(const ModelDocument&) const = default;
};

class ParseError : public StructuralError {
 public:
  ParseError(std::size_t line, std::size_t column, std::string message, std::string token,
             std::vector<std::string> expected);

  /// 1-based; columns count code points.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  /// Empty at end of input.
  const std::string& token() const { return token_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
  std::string token_;
  std::vector<std::string> expected_;
};

/// Throws ParseError at the earliest offending position.
ModelDocument parse_model(std::string_view text);
/// Canonical text: fixed section order, full rows in carrier order.
std::string serialize_model(const ModelDocument& doc);

class JsonError : public StructuralError {
 public:
  JsonError(std::string pointer, const std::string& message)
      : StructuralError(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

ModelDocument import_json(std::string_view text);
std::string export_json(const ModelDocument& doc);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Whole file as bytes; throws IoError when it cannot be read.
std::string read_text_file(const std::string& path);

}  // namespace c2ka

#endif  // C2KA_DSL_HPP
