#pragma once

// Config-driven experiment runner behind the fts-spectra tool.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fts/models.hpp"
#include "fts/spectral.hpp"

namespace fts::cli {

/// Malformed or invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Clt, Theta0, CrossFreq, Spectrum, InverseFourier, A3, Decomposition, MApproxDecay };

std::string to_string(ExperimentKind kind);

/// A frequency given either as a Fourier-grid index j (theta = 2 pi j / n)
/// or as a literal value.
struct FrequencySpec {
  std::optional<long> index;
  std::optional<double> value;

  double resolve(std::size_t n) const;
  bool operator==(const FrequencySpec&) const = default;
};

struct Parameters {
  std::optional<FrequencySpec> theta;
  std::optional<FrequencySpec> theta_prime;
  std::optional<std::size_t> n;
  std::optional<std::size_t> replications;  // "R"
  std::optional<std::size_t> max_lag;       // "H"
  std::optional<std::size_t> grid_size;     // "G"
  std::optional<std::size_t> horizon;       // "T"
  std::optional<std::size_t> m_max;
  std::optional<std::vector<std::size_t>> n_values;
  std::optional<std::vector<std::size_t>> a2_n_values;
  std::optional<nlohmann::json> u;          // list of test-vector specs
  std::optional<Provenance> provenance;
  std::optional<std::string> path_file;

  bool operator==(const Parameters&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Clt;
  nlohmann::json model;  // inline model spec, as written
  Parameters parameters;
  std::map<std::string, double> thresholds;
  std::uint64_t seed = 0;
  std::string output;
  std::optional<std::string> table_output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and fully validates (including building the model). Throws
/// ConfigError, or NumericalError for a model that violates an invariant.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

ProcessModel build_model(const nlohmann::json& spec);
std::vector<FunctionVector> build_test_vectors(const nlohmann::json& specs, std::size_t dim, std::uint64_t seed);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  std::optional<std::string> out;
};

struct ThresholdResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct RunResult {
  std::vector<ThresholdResult> thresholds;
  std::string report_path;
  bool all_pass() const;
};

/// Runs a validated config and writes its report.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Plot table of F_theta on the periodic grid of size G (>= 8).
SpectralEstimate spectrum_for(const ExperimentConfig& config, const RunOptions& options);

/// Whole commands; return the process exit status (0 pass, 1 threshold
/// failure, 2 configuration or invariant error).
int run_command(const std::string& config_path, const RunOptions& options, std::ostream& out, std::ostream& err);
int spectrum_command(const std::string& config_path, const RunOptions& options, std::ostream& out,
                     std::ostream& err);
int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace fts::cli
