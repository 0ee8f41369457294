#ifndef C2KA_REPORT_HPP
#define C2KA_REPORT_HPP

#include <string>

#include <json.hpp>

#include "c2ka/comm.hpp"
#include "c2ka/dsl.hpp"

namespace c2ka {

struct ReportOptions {
  ValidationOptions validation;
  AnalysisOptions analysis;
};

/// Complete analysis of one model file. The JSON value is the single source;
/// text and DOT are renderings of it.
class ReportDocument {
 public:
  /// Runs every check and every relation. A model that fails its checks is
  /// still analysed; verified() then reports false. Throws StructuralError
  /// when the document declares no agents.
  static ReportDocument build(const ModelDocument& doc, const ReportOptions& options = {});

  bool verified() const { return json_.at("verified").get<bool>(); }
  const nlohmann::ordered_json& json() const { return json_; }

  std::string to_json() const;
  std::string to_text() const;
  /// The direct potential-for-communication digraph.
  std::string to_dot() const;

 private:
  explicit ReportDocument(nlohmann::ordered_json json) : json_(std::move(json)) {}
  nlohmann::ordered_json json_;
};

/// JSON form of a single verdict, as used inside report matrices.
nlohmann::ordered_json verdict_json(const AgentSystem& sys, const CommVerdict& v);

}  // namespace c2ka

#endif  // C2KA_REPORT_HPP
