#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "optomech/params.hpp"
#include "optomech/simd/dispatch.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/symplectic_oracle.hpp"

namespace optomech {

/// State order of the quadrature equations of motion.
enum StateIndex : std::size_t { kX1 = 0, kY1, kX2, kY2, kQ, kP };

inline constexpr std::size_t kNumInputs = 5;  // X_in1, Y_in1, X_in2, Y_in2, W

/// Linear generator of the damped quadrature dynamics, d/dt s = A s + noise.
struct DriftMatrix {
  Matrix6 A = Matrix6::Zero();
  /// Input amplitudes (sqrt of white-noise intensity) of X_in1, Y_in1,
  /// X_in2, Y_in2 and the thermal force W, driving rows X1, Y1, X2, Y2, P.
  std::array<double, kNumInputs> noise_map{};
  std::array<std::size_t, kNumInputs> noise_rows{kX1, kY1, kX2, kY2, kP};
  std::array<cdouble, 6> eigenvalues{};
  double spectral_abscissa = 0.0;
  cdouble leading_eigenvalue{};
  double spectral_radius = 0.0;
};

/// Two-sided intensity of the thermal force in the white (high-temperature)
/// limit: (gamma_m / omega_m) * 2 T_dim.
double thermal_intensity(const LinearizedParams& lp);

DriftMatrix drift_matrix(const LinearizedParams& lp);

/// Default step 2 pi / (400 omega_max), omega_max the spectral radius of A.
double default_dt(const DriftMatrix& dm);

/// Upper bound on dt * max|A_ij| accepted by the integrator.
inline constexpr double kMaxStepProduct = 0.1;
/// State magnitude treated as divergence.
inline constexpr double kOverflowGuard = 1e150;

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/seed_seq{seed_lo,seed_hi,stream}/box-muller";

/// Explicitly seeded standard-normal stream.  Uniforms are built from the
/// top 53 bits of mt19937_64 so the sequence is fixed by the algorithm, not
/// by the standard library's distribution implementation.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SimulationOptions {
  double dt = 0.0;  // 0 selects default_dt
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::array<double, 6> initial_state{};
  bool noise = true;
  /// Keep every decimation-th sample in the trajectory.
  std::size_t decimation = 1;
  simd::Isa isa = simd::active_isa();
};

struct Trajectory {
  double dt = 0.0;           // integration step
  std::size_t decimation = 1;  // samples are dt * decimation apart
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  LinearizedParams params;
  /// Row-major [sample][6], sample 0 is the initial state.
  std::vector<double> samples;

  std::size_t size() const { return samples.size() / 6; }
  double sample_dt() const { return dt * static_cast<double>(decimation); }
  double at(std::size_t i, std::size_t component) const { return samples[i * 6 + component]; }
  std::vector<double> component(std::size_t c) const;
};

/// Euler-Maruyama integration.  Throws InvalidStep when dt * max|A_ij| >
/// kMaxStepProduct or n_steps == 0, Unstable when the drift matrix has a
/// growing mode or the state overflows.
Trajectory simulate(const LinearizedParams& lp, const SimulationOptions& opts);

Trajectory simulate(const LinearizedParams& lp, double dt, std::size_t n_steps, std::uint64_t seed);

struct PsdEstimate {
  std::vector<double> omega;
  std::vector<double> psd;
  std::size_t segments = 0;
  double bin_width = 0.0;
};

/// Welch average of Hann-windowed, mean-removed periodograms.  Returns the
/// two-sided density (integral over all omega / 2 pi = variance) on
/// omega_k = 2 pi k / (segment_len dt), k = 0..segment_len/2.
PsdEstimate welch_psd(std::span<const double> x, double dt, std::size_t segment_len,
                      double overlap_frac);

/// Welch PSD of the Q component of a trajectory.
PsdEstimate estimate_psd(const Trajectory& traj, std::size_t segment_len, double overlap_frac);

struct EnsembleOptions {
  double dt = 0.0;
  std::size_t n_steps = 1u << 20;
  std::size_t trajectories = 16;
  std::uint64_t seed = 0;
  std::size_t segment_len = 1u << 16;
  double overlap_frac = 0.5;
  simd::Isa isa = simd::active_isa();
};

/// Runs independent trajectories (stream index = trajectory index) and
/// averages their Q periodograms.  The reduction runs in trajectory order.
PsdEstimate simulate_psd(const LinearizedParams& lp, const EnsembleOptions& opts);

struct PeakMatch {
  double omega_analytic = 0.0;
  double omega_simulated = 0.0;
  double delta_bins = 0.0;
  double height_analytic = 0.0;   // normalized to the band maximum
  double height_simulated = 0.0;  // normalized to the band maximum
  double height_rel_error = 0.0;
};

struct PsdComparison {
  std::vector<Peak> analytic_peaks;
  std::vector<Peak> simulated_peaks;
  std::vector<PeakMatch> matches;
  double band_max = 0.0;
  double bin_width = 0.0;
  double max_delta_bins = 0.0;
  double max_height_rel_error = 0.0;
};

/// Evaluates the closed-form S_Q on the Welch bins inside (0, band_max],
/// normalizes both curves to their band maxima, detects peaks in each at
/// prominence_frac and pairs every analytic peak with the nearest simulated one.
PsdComparison compare_with_analytic(const LinearizedParams& lp, const PsdEstimate& psd,
                                    double band_max, double prominence_frac);

}  // namespace optomech
