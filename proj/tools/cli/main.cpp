#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "optomech/error.hpp"
#include "run_config.hpp"

namespace {

using namespace optomech;
using namespace optomech::cli;

enum Exit { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kInstability = 4 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NonPositiveEffectiveFrequency:
    case ErrorCode::InvalidStep:
    case ErrorCode::TooShort:
      return kConfigError;
    case ErrorCode::Unstable:
      return kInstability;
    default:
      return kNumericalFailure;
  }
}

struct Flags {
  std::optional<std::string> config, preset, sweep, grid, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trajectories, steps, segment, decimation;
  std::optional<double> dt, band, overlap;
  bool trajectory = false;
  bool allow_unstable = false;
};

void add_common(CLI::App& sub, Flags& f) {
  auto* src = sub.add_option_group("source");
  src->add_option("--config", f.config, "key = value file, or a .meta.json sidecar to rerun");
  src->add_option("--preset", f.preset, "named parameter set");
  src->require_option(1);
  sub.add_option("--out", f.out, "output directory (default .)");
  sub.add_flag("--allow-unstable", f.allow_unstable, "report instead of refusing unstable parameters");
}

RunConfig build(const std::string& name, const Flags& f) {
  RunConfig cfg;
  cfg.subcommand = name;
  if (f.preset) {
    apply_preset(*f.preset, cfg);
    cfg.source = "preset:" + *f.preset;
  } else {
    apply_config_file(*f.config, cfg);
    cfg.source = "config:" + *f.config;
  }
  if (f.sweep) cfg.sweep = parse_sweep(*f.sweep);
  if (f.grid) cfg.grid = parse_grid(*f.grid);
  if (f.out) cfg.out_dir = *f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.trajectories) cfg.trajectories = *f.trajectories;
  if (f.steps) cfg.steps = *f.steps;
  if (f.segment) cfg.segment = *f.segment;
  if (f.decimation) cfg.decimation = *f.decimation;
  if (f.dt) cfg.dt = *f.dt;
  if (f.band) cfg.band = *f.band;
  if (f.overlap) cfg.overlap = *f.overlap;
  if (f.trajectory) cfg.write_trajectory = true;
  if (f.allow_unstable) cfg.allow_unstable = true;
  resolve_params(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal modes, squeezing and spectra of a two-cavity optomechanical system"};
  app.set_version_flag("--version", std::string(OPTOMECH_VERSION));
  app.require_subcommand(1);

  Flags modes_f, squeeze_f, spectrum_f, simulate_f;

  auto* modes = app.add_subcommand("modes", "excitation energies along a coupling sweep");
  add_common(*modes, modes_f);
  modes->add_option("--sweep", modes_f.sweep, "axis=start:stop:n, axis in lambda, G1, G2");

  auto* squeeze = app.add_subcommand("squeeze", "quadrature variances along a coupling sweep");
  add_common(*squeeze, squeeze_f);
  squeeze->add_option("--sweep", squeeze_f.sweep, "axis=start:stop:n, axis in lambda, G1, G2");

  auto* spectrum = app.add_subcommand("spectrum", "mechanical displacement spectrum");
  add_common(*spectrum, spectrum_f);
  spectrum->add_option("--grid", spectrum_f.grid, "start:stop:n frequency grid");

  auto* simulate = app.add_subcommand("simulate", "stochastic ensemble and Welch PSD");
  add_common(*simulate, simulate_f);
  simulate->add_option("--seed", simulate_f.seed, "RNG seed");
  simulate->add_option("--trajectories", simulate_f.trajectories, "ensemble size");
  simulate->add_option("--steps", simulate_f.steps, "integration steps per trajectory");
  simulate->add_option("--segment", simulate_f.segment, "Welch segment length");
  simulate->add_option("--overlap", simulate_f.overlap, "Welch segment overlap fraction");
  simulate->add_option("--dt", simulate_f.dt, "time step (default from the drift spectrum)");
  simulate->add_option("--band", simulate_f.band, "upper frequency of the peak comparison");
  simulate->add_option("--decimation", simulate_f.decimation, "trajectory.csv keeps every n-th sample");
  simulate->add_flag("--trajectory", simulate_f.trajectory, "also write trajectory 0 to trajectory.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*modes) {
      cmd_modes(build("modes", modes_f));
    } else if (*squeeze) {
      cmd_squeeze(build("squeeze", squeeze_f));
    } else if (*spectrum) {
      cmd_spectrum(build("spectrum", spectrum_f));
    } else {
      cmd_simulate(build("simulate", simulate_f));
    }
  } catch (const Error& e) {
    std::cerr << "optomech-cli: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "optomech-cli: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
