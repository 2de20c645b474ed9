#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/params.hpp"
#include "optomech/squeezing.hpp"

namespace optomech::cli {

/// start:stop:n, n points from start to stop inclusive.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t n = 0;

  std::vector<double> points() const;
  std::string to_string() const;
};

struct SweepSpec {
  CouplingAxis axis = CouplingAxis::Lambda;
  GridSpec grid;

  std::string to_string() const;
};

GridSpec parse_grid(std::string_view text);
SweepSpec parse_sweep(std::string_view text);

/// Which key set the parameters were given in.
enum class ParamForm { Linearized, System };

struct RunConfig {
  std::string subcommand;
  std::string source;  // "preset:<name>" or "config:<path>"

  ParamForm form = ParamForm::Linearized;
  SystemParams system;
  MeanFields mean_fields;
  LinearizedParams params;

  std::optional<SweepSpec> sweep;
  std::optional<GridSpec> grid;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t trajectories = 16;
  std::size_t steps = std::size_t{1} << 20;
  std::size_t segment = std::size_t{1} << 16;
  double overlap = 0.5;
  double dt = 0.0;
  double band = 2.5;
  std::size_t decimation = 1;
  bool write_trajectory = false;
  bool allow_unstable = false;

  /// Assumptions attached by presets, echoed into the sidecar.
  std::map<std::string, std::string> notes;

  /// Flat key/value form that reproduces this run through --config.
  std::map<std::string, std::string> to_keys() const;
};

/// Parses flat "key = value" text ('#' starts a comment).  Either the
/// system key set (omega1, g1, ..., alpha1_re, beta_re, ...) or the
/// linearized one (Omega1, G1, lambda, ...) may be used, not both.
/// Run keys (sweep, grid, seed, ...) are accepted alongside either.
void apply_config_text(std::string_view text, RunConfig& cfg);

/// Reads a config file.  A JSON sidecar written by this tool is accepted
/// too; its "config" object is used.
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);

/// Applies a named preset; throws Error(Config) for unknown names.
void apply_preset(std::string_view name, RunConfig& cfg);

std::vector<std::string> preset_names();

/// Rebuilds cfg.params from the system form (no-op for linearized form).
void resolve_params(RunConfig& cfg);

/// Formats a double so that it round-trips exactly.
std::string format_double(double v);

}  // namespace optomech::cli
