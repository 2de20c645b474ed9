#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "optomech/error.hpp"
#include "optomech/langevin.hpp"
#include "optomech/normal_modes.hpp"
#include "optomech/simd/dispatch.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/squeezing.hpp"
#include "optomech/symplectic_oracle.hpp"
#include "output.hpp"

namespace optomech::cli {

namespace {

using nlohmann::json;
using Row = std::vector<std::string>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return format_double(v); }

json params_json(const LinearizedParams& lp) {
  return {{"Omega1", lp.Omega1},     {"Omega2", lp.Omega2},     {"omega_m", lp.omega_m},
          {"G1", lp.G1},             {"G2", lp.G2},             {"lambda", lp.lambda},
          {"G_cross", lp.G_cross},   {"Delta1", lp.Delta1()},   {"Delta2", lp.Delta2()},
          {"gamma_c1", lp.gamma_c1}, {"gamma_c2", lp.gamma_c2}, {"gamma_m", lp.gamma_m},
          {"T_dim", lp.T_dim},       {"imaginary_coupling_dropped", lp.imaginary_coupling_dropped}};
}

json sidecar(const RunConfig& cfg, const std::string& data_file) {
  json j;
  j["tool"] = "optomech-cli";
  j["version"] = OPTOMECH_VERSION;
  j["subcommand"] = cfg.subcommand;
  j["source"] = cfg.source;
  j["data_file"] = data_file;
  j["seed"] = cfg.seed;
  j["kernel_isa"] = std::string(simd::to_string(simd::active_isa()));
  j["rng_algorithm"] = std::string(kRngAlgorithm);
  j["parameters"] = params_json(cfg.params);
  if (cfg.form == ParamForm::System) {
    const SystemParams& s = cfg.system;
    j["system_parameters"] = {{"omega1", s.omega1},     {"omega2", s.omega2},     {"omega_m", s.omega_m},
                              {"g1", s.g1},             {"g2", s.g2},             {"G_cross", s.G_cross},
                              {"gamma_c1", s.gamma_c1}, {"gamma_c2", s.gamma_c2}, {"gamma_m", s.gamma_m},
                              {"T_dim", s.T_dim}};
    const MeanFields& m = cfg.mean_fields;
    j["mean_fields"] = {{"alpha1", {m.alpha1.real(), m.alpha1.imag()}},
                        {"alpha2", {m.alpha2.real(), m.alpha2.imag()}},
                        {"beta", {m.beta_mf.real(), m.beta_mf.imag()}}};
  }
  j["config"] = cfg.to_keys();
  if (!cfg.notes.empty()) j["notes"] = cfg.notes;
  return j;
}

const SweepSpec& require_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw Error(ErrorCode::Config, cfg.subcommand + " needs --sweep axis=start:stop:n");
  return *cfg.sweep;
}

// Closed-form value or null when the threshold is complex.
template <class F>
json threshold(F&& f, const LinearizedParams& lp) {
  try {
    return f(lp);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ComplexThreshold) return nullptr;
    throw;
  }
}

}  // namespace

void cmd_modes(const RunConfig& cfg) {
  const SweepSpec& sweep = require_sweep(cfg);
  const std::vector<double> grid = sweep.grid.points();
  cfg.params.require_positive_frequencies();

  std::vector<Row> rows;
  rows.reserve(grid.size());
  double max_discrepancy = 0.0;
  for (double c : grid) {
    const LinearizedParams lp = with_coupling(cfg.params, sweep.axis, c);
    const NormalModeResult nm = excitation_energies(lp);
    const SymplecticSpectrum oracle = symplectic_eigenvalues(hessian(lp));

    std::array<double, 3> eigs{kNaN, kNaN, kNaN};
    double discrepancy = kNaN;
    if (!oracle.unstable) {
      eigs = oracle.eigs;
      if (nm.phase == Phase::Normal) {
        std::array<double, 3> closed{nm.eps_X.real(), nm.eps_Y.real(), nm.eps_Z.real()};
        std::sort(closed.begin(), closed.end());
        discrepancy = 0.0;
        for (int i = 0; i < 3; ++i) discrepancy = std::max(discrepancy, std::abs(closed[i] - eigs[i]));
        max_discrepancy = std::max(max_discrepancy, discrepancy);
      }
    }
    rows.push_back({num(c), num(nm.eps_X.real()), num(nm.eps_X.imag()), num(nm.eps_Y.real()),
                    num(nm.eps_Y.imag()), num(nm.eps_Z.real()), num(nm.eps_Z.imag()),
                    std::string(to_string(nm.phase)) + (nm.boundary ? "(boundary)" : ""), num(eigs[0]),
                    num(eigs[1]), num(eigs[2]), num(discrepancy)});
  }

  json meta = sidecar(cfg, "modes.csv");
  meta["sweep"] = sweep.to_string();
  meta["rows"] = grid.size();
  meta["lambda_c"] = critical_lambda(cfg.params);
  meta["lambda_us"] = threshold(lambda_unstable, cfg.params);
  meta["G1_crit"] = threshold(g1_critical, cfg.params);
  meta["max_discrepancy"] = max_discrepancy;

  OutputSet out(cfg.out_dir);
  out.add_csv("modes.csv",
              {"coupling", "re_eps_X", "im_eps_X", "re_eps_Y", "im_eps_Y", "re_eps_Z", "im_eps_Z", "phase",
               "oracle_eig1", "oracle_eig2", "oracle_eig3", "discrepancy"},
              rows);
  out.add_json("modes.meta.json", meta);
  out.commit();
}

void cmd_squeeze(const RunConfig& cfg) {
  const SweepSpec& sweep = require_sweep(cfg);
  const std::vector<double> grid = sweep.grid.points();
  cfg.params.require_positive_frequencies();
  const std::vector<SweepPoint> pts = variance_sweep(cfg.params, sweep.axis, grid);

  std::vector<Row> rows;
  rows.reserve(pts.size());
  std::size_t outside = 0, divergent = 0;
  for (const SweepPoint& p : pts) {
    Row r{num(p.coupling)};
    const bool have = p.status != PointStatus::OutsideNormalPhase;
    for (std::size_t i = 0; i < 6; ++i) r.push_back(num(have ? p.variances.values[i] : kNaN));
    for (std::size_t i = 0; i < 6; ++i) r.push_back(have && p.variances.squeezed[i] ? "1" : "0");
    r.push_back(std::string(to_string(p.status)));
    r.push_back(std::string(to_string(p.phase)));
    r.push_back(p.status == PointStatus::Divergent ? p.variances.divergent_denominator : "");
    outside += p.status == PointStatus::OutsideNormalPhase;
    divergent += p.status == PointStatus::Divergent;
    rows.push_back(std::move(r));
  }

  json meta = sidecar(cfg, "squeeze.csv");
  meta["sweep"] = sweep.to_string();
  meta["rows"] = pts.size();
  meta["coherent_variance"] = kCoherentVariance;
  meta["outside_normal_phase_rows"] = outside;
  meta["divergent_rows"] = divergent;
  meta["lambda_c"] = critical_lambda(cfg.params);

  OutputSet out(cfg.out_dir);
  out.add_csv("squeeze.csv",
              {"coupling", "var_x", "var_y", "var_z", "var_px", "var_py", "var_pz", "squeezed_x",
               "squeezed_y", "squeezed_z", "squeezed_px", "squeezed_py", "squeezed_pz", "status", "phase",
               "divergent_denominator"},
              rows);
  out.add_json("squeeze.meta.json", meta);
  out.commit();
}

namespace {

json peaks_json(const std::vector<Peak>& peaks) {
  json arr = json::array();
  for (const Peak& p : peaks) {
    arr.push_back({{"omega_peak", p.omega_peak}, {"height", p.height}, {"prominence", p.prominence}});
  }
  return arr;
}

}  // namespace

void cmd_spectrum(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.grid ? cfg.grid->points() : default_grid();
  const SpectrumResult sr = displacement_spectrum(
      cfg.params, grid, cfg.allow_unstable ? StabilityPolicy::ReportOnly : StabilityPolicy::Enforce);

  std::vector<Row> rows;
  rows.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) rows.push_back({num(sr.omega_grid[k]), num(sr.s_values[k])});

  const DriftMatrix dm = drift_matrix(cfg.params);
  json meta = sidecar(cfg, "spectrum.csv");
  meta["grid"] = cfg.grid ? cfg.grid->to_string() : "default: k * 2.5 / 10000, k = 1..10000";
  meta["rows"] = grid.size();
  meta["prominence_fraction"] = kDefaultProminenceFraction;
  meta["peaks"] = peaks_json(sr.peaks);
  meta["stable"] = sr.stable;
  meta["spectral_abscissa"] = sr.spectral_abscissa;
  meta["leading_eigenvalue"] = {dm.leading_eigenvalue.real(), dm.leading_eigenvalue.imag()};

  OutputSet out(cfg.out_dir);
  out.add_csv("spectrum.csv", {"omega", "s_q"}, rows);
  out.add_json("spectrum.meta.json", meta);
  out.commit();
}

void cmd_simulate(const RunConfig& cfg) {
  if (cfg.trajectories == 0) throw Error(ErrorCode::Config, "--trajectories must be at least 1");
  if (cfg.segment > cfg.steps) throw Error(ErrorCode::Config, "segment length exceeds the number of steps");
  if (cfg.decimation == 0) throw Error(ErrorCode::Config, "decimation must be at least 1");

  EnsembleOptions opts;
  opts.dt = cfg.dt;
  opts.n_steps = cfg.steps;
  opts.trajectories = cfg.trajectories;
  opts.seed = cfg.seed;
  opts.segment_len = cfg.segment;
  opts.overlap_frac = cfg.overlap;
  const PsdEstimate psd = simulate_psd(cfg.params, opts);
  const PsdComparison cmp = compare_with_analytic(cfg.params, psd, cfg.band, kDefaultProminenceFraction);

  std::vector<Row> rows;
  rows.reserve(psd.omega.size());
  for (std::size_t k = 0; k < psd.omega.size(); ++k) {
    rows.push_back({num(psd.omega[k]), num(psd.psd[k]), num(displacement_spectrum_at(cfg.params, psd.omega[k]))});
  }

  const DriftMatrix dm = drift_matrix(cfg.params);
  json meta = sidecar(cfg, "simulate.csv");
  meta["dt"] = cfg.dt == 0.0 ? default_dt(dm) : cfg.dt;
  meta["steps"] = cfg.steps;
  meta["trajectories"] = cfg.trajectories;
  meta["segment"] = cfg.segment;
  meta["overlap"] = cfg.overlap;
  meta["welch_segments"] = psd.segments;
  meta["bin_width"] = psd.bin_width;
  meta["spectral_abscissa"] = dm.spectral_abscissa;
  json report;
  report["band_max"] = cmp.band_max;
  report["analytic_peaks"] = peaks_json(cmp.analytic_peaks);
  report["simulated_peaks"] = peaks_json(cmp.simulated_peaks);
  json matches = json::array();
  for (const PeakMatch& m : cmp.matches) {
    matches.push_back({{"omega_analytic", m.omega_analytic},
                       {"omega_simulated", m.omega_simulated},
                       {"delta_bins", m.delta_bins},
                       {"height_analytic", m.height_analytic},
                       {"height_simulated", m.height_simulated},
                       {"height_ratio", m.height_simulated / m.height_analytic},
                       {"height_rel_error", m.height_rel_error}});
  }
  report["matches"] = matches;
  report["max_delta_bins"] = cmp.max_delta_bins;
  report["max_height_rel_error"] = cmp.max_height_rel_error;
  meta["comparison"] = report;

  OutputSet out(cfg.out_dir);
  out.add_csv("simulate.csv", {"omega", "psd", "s_q"}, rows);
  out.add_json("simulate.meta.json", meta);

  if (cfg.write_trajectory) {
    SimulationOptions so;
    so.dt = cfg.dt;
    so.n_steps = cfg.steps;
    so.seed = cfg.seed;
    so.stream = 0;
    so.decimation = cfg.decimation;
    const Trajectory t = simulate(cfg.params, so);
    std::vector<Row> trows;
    trows.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      Row r{num(static_cast<double>(i) * t.sample_dt())};
      for (std::size_t c = 0; c < 6; ++c) r.push_back(num(t.at(i, c)));
      trows.push_back(std::move(r));
    }
    out.add_csv("trajectory.csv", {"t", "X1", "Y1", "X2", "Y2", "Q", "P"}, trows);
    json tmeta = sidecar(cfg, "trajectory.csv");
    tmeta["dt"] = t.dt;
    tmeta["decimation"] = t.decimation;
    tmeta["stream"] = t.stream;
    out.add_json("trajectory.meta.json", tmeta);
  }
  out.commit();
}

}  // namespace optomech::cli
