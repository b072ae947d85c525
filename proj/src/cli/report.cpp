#include "report.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fts::cli::detail {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json operator_json(const LinOperator& op) {
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t r = 0; r < op.dim(); ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (std::size_t c = 0; c < op.dim(); ++c) {
      re_row.push_back(op(r, c).real());
      im_row.push_back(op(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  Json out;
  out["dim"] = op.dim();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

Json vector_json(const FunctionVector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (std::size_t j = 0; j < v.dim(); ++j) {
    re.push_back(v[j].real());
    im.push_back(v[j].imag());
  }
  Json out;
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

Json diagnostics_json(const NormalityDiagnostics& d) {
  Json out;
  out["count"] = d.count;
  out["standardized_mean"] = d.standardized_mean;
  out["variance_ratio"] = d.variance_ratio;
  out["skewness"] = d.skewness;
  out["excess_kurtosis"] = d.excess_kurtosis;
  out["ks"] = d.ks;
  out["degenerate"] = d.degenerate;
  return out;
}

Json fit_json(const GeometricFit& fit) {
  Json out;
  out["slope"] = fit.slope;
  out["intercept"] = fit.intercept;
  out["rate"] = fit.rate;
  out["points"] = fit.points;
  return out;
}

void ReportWriter::write(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report '" + path + "'");
  for (const auto& record : records_) out << record.dump() << '\n';
  if (!out) throw std::runtime_error("error writing report '" + path + "'");
}

}  // namespace fts::cli::detail
