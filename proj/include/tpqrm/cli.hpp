#pragma once

// Batch front-end. A run is one JSON config file plus a subcommand; results
// are written atomically to the output directory with a manifest.json.
// The config schema is documented in README.md.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tpqrm/circuit.hpp"
#include "tpqrm/scattering.hpp"
#include "tpqrm/spectra.hpp"

namespace tpqrm::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kVersion = "0.1.0";

enum class Command { spectrum, coupling_scan, transmission_scan, blockade_scan, collapse, circuit_params };

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

enum class OutputFormat { csv, json };

struct RunConfig {
  Command command = Command::spectrum;
  ModelSpec model;
  DriveConfig drive;
  std::vector<double> coupling_grid;
  std::vector<double> omega_d_grid;
  std::vector<double> D_grid;
  std::optional<double> omega_d;  // blockade-scan drive frequency override
  int cutoff = 0;
  int k_levels = 10;
  double level_tol = kLevelConvergenceTol;
  double observable_tol = kObservableConvergenceTol;
  bool refine_peaks = false;
  double collapse_lo = 0.0;
  double collapse_hi = 0.0;
  CollapseOptions collapse;
  circuit::CircuitParams circuit;
  std::string out_dir;
  OutputFormat format = OutputFormat::csv;
};

/// Validates the whole document against the schema for `command` (unknown
/// keys rejected) and returns the typed config. Errors name the offending
/// key as a dotted path, e.g. "drive.gamma".
RunConfig parse_config(const nlohmann::json& doc, Command command);

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides output.directory
  int workers = 0;
  std::optional<long long> seed;
};

struct RunResult {
  std::vector<std::string> files;  // written, relative to the output directory
  bool all_converged = true;
  std::size_t unconverged_rows = 0;
};

/// Computes everything first, then writes each file through a temp file and rename.
RunResult run(const RunConfig& config, const nlohmann::json& raw_config, const RunOptions& opts);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) config dump, as hex.
std::string config_hash(const nlohmann::json& doc);

/// Formats with 17 significant digits.
std::string format_number(double v);

/// Process entry point: returns the exit status (0 ok, 2 validation,
/// 3 numerical failure, 4 IO). Errors go to stderr as one JSON object.
int main(int argc, char** argv);

}  // namespace tpqrm::cli
