#pragma once

#include "hinge/analysis_harness.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hinge {

/// Raised for any invalid configuration; key() names the offending entry
/// using dotted paths ("f2.floor", "initial.y.id").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct CatalogRef {
  std::string id = "zero";
  std::vector<double> params;
};

struct RestoringRef {
  std::string id = "zero";
  std::vector<double> params;
  std::optional<double> anchor;
  std::optional<double> floor;
};

/// Run: every catalog parameter must be admissible. Audit: negative
/// nonlinearity parameters are let through for the hypothesis validator.
enum class ConfigMode { Run, Audit };

/// Fully validated run configuration with every default applied.
struct RunConfig {
  Interval interval;
  double T = 1.0;
  int k = 1;
  double dt = 1e-3;
  Method method = Method::Splitting;
  int output_every = 1;
  int quadrature_nodes = 128;
  CatalogRef f1;
  RestoringRef f2;
  CatalogRef forcing;
  CatalogRef y;
  CatalogRef z;
  std::string out_directory = ".";
  std::string out_prefix = "run";
  ConfigMode mode = ConfigMode::Run;  // not serialized
};

/// JSON schema (unknown keys are rejected at every level):
/// {
///   "interval": [a, b] | {"a": a, "b": b},      required
///   "T": number > 0,                            required
///   "k": integer >= 1,                          required
///   "dt": number > 0,                           default min(1e-3, 0.1/lambda_k)
///   "method": "splitting" | "rk4",              default "splitting"
///   "output_every": integer >= 1,               default round(0.01/dt)
///   "quadrature": {"nodes": integer >= 10},     default max(128, 6k)
///   "f1": {"id", "params"},
///   "f2": {"id", "params", "anchor", "floor"},
///   "forcing": {"id", "params"},
///   "initial": {"y": {"id", "params"}, "z": {"id", "params"}},
///   "outputs": {"directory", "prefix"}
/// }
RunConfig parse_config(const std::filesystem::path& path, ConfigMode mode = ConfigMode::Run);
RunConfig parse_config_text(std::string_view json_text, ConfigMode mode = ConfigMode::Run);

/// Normalized JSON text for a config; parse_config_text of the result
/// reproduces the same RunConfig.
std::string config_to_json(const RunConfig& config);

ProblemSetup to_setup(const RunConfig& config);

}  // namespace hinge
