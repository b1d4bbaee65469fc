#pragma once

#include "wtoda/core_algebra.hpp"
#include "wtoda/matrix_groups.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wtoda {

enum ExitCode : int { kExitPass = 0, kExitConfig = 2, kExitRefusal = 3, kExitTolerance = 4 };

/// Raised for anything the schema or a cross-field rule rejects.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates `doc` against the subset of JSON Schema used by the shipped
/// schema (type, enum, required, properties, additionalProperties, items,
/// minimum, exclusiveMinimum). Returns the list of violations.
std::vector<std::string> validate_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                                         const std::string& path = "$");

/// The run-config schema compiled into the binary.
const nlohmann::json& run_config_schema();

struct RunConfig {
  nlohmann::json raw;
  RootSystem rs;
  CharacterData chi;
  OracleQuadrature quad;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";

  /// Parses and validates; throws ConfigError.
  static RunConfig parse(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
  /// The couplings q_alpha = xi_alpha^2.
  std::vector<double> couplings() const;
  nlohmann::json section(const std::string& name) const;
};

/// Subcommands. Each writes its files under config.out_dir and returns an exit code.
int cmd_density(const RunConfig& config);
int cmd_whittaker(const RunConfig& config);
int cmd_transform(const RunConfig& config);
int cmd_toda(const RunConfig& config);
int cmd_verify(const RunConfig& config);

/// Suites known to cmd_verify, in run order.
const std::vector<std::string>& verify_suite_names();

/// Runs one verify suite; the result has "suite", "passed" and the numbers.
nlohmann::json run_verify_suite(const RunConfig& config, const std::string& suite);

/// Generic matplotlib script for the CSV files written by the subcommands.
std::string plot_script();

/// Entry point used by tools/wtoda.cpp.
int run_cli(int argc, char** argv);

}  // namespace wtoda
