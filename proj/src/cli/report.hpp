#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fts/hilbert.hpp"
#include "fts/montecarlo.hpp"
#include "fts/stats.hpp"

namespace fts::cli::detail {

using Json = nlohmann::ordered_json;

Json operator_json(const LinOperator& op);
Json vector_json(const FunctionVector& v);
Json complex_json(Complex z);
Json diagnostics_json(const NormalityDiagnostics& d);
Json fit_json(const GeometricFit& fit);

/// Accumulates JSON Lines records; written in one go so a failed run never
/// leaves a half report behind.
class ReportWriter {
 public:
  void add(Json record) { records_.push_back(std::move(record)); }
  void write(const std::string& path) const;

 private:
  std::vector<Json> records_;
};

}  // namespace fts::cli::detail
