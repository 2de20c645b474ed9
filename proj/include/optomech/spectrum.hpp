#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "optomech/params.hpp"
#include "optomech/simd/dispatch.hpp"

namespace optomech {

/// Closed-form frequency-domain coefficients of the mechanical quadrature,
/// Q(w) = (f_W W + f_X1 X_in1 + f_Y1 Y_in1 + f_X2 X_in2 + f_Y2 Y_in2) / B.
/// The f's include the sqrt(gamma) input couplings.
struct TransferCoefficients {
  cdouble C1, C2, C3, C4, C5;
  cdouble f_W, f_X1, f_Y1, f_X2, f_Y2;
  cdouble B;
};

TransferCoefficients coefficients(const LinearizedParams& lp, double omega);

/// omega coth(omega / 2T), continuous through omega = 0 (value 2T) and T = 0 (|omega|).
double thermal_kernel(double omega, double T_dim);

/// Contributions to S_Q at one frequency, split by noise source.  The
/// ordered/reversed entries are the X_in-Y_in cross correlators for
/// <Q(w) Q(w')> and <Q(w') Q(w)>; they cancel in the symmetrized sum.
struct SpectrumTerms {
  double thermal = 0.0;
  double optical = 0.0;
  double cross_ordered = 0.0;
  double cross_reversed = 0.0;
  double total = 0.0;
};

SpectrumTerms spectrum_terms(const LinearizedParams& lp, double omega);

/// S_Q at one frequency via the coefficient layer (reference path).
double displacement_spectrum_at(const LinearizedParams& lp, double omega);

struct Peak {
  double omega_peak = 0.0;
  double height = 0.0;
  double prominence = 0.0;
  std::size_t index = 0;
};

enum class StabilityPolicy {
  Enforce,     // throw Unstable when the drift matrix has a growing mode
  ReportOnly,  // evaluate anyway and flag the result
};

struct SpectrumResult {
  std::vector<double> omega_grid;
  std::vector<double> s_values;
  std::vector<Peak> peaks;
  double spectral_abscissa = 0.0;
  bool stable = true;
  simd::Isa isa = simd::Isa::Scalar;
};

inline constexpr double kDefaultGridMax = 2.5;
inline constexpr std::size_t kDefaultGridPoints = 10000;
inline constexpr double kDefaultProminenceFraction = 0.01;

/// points frequencies k * max / points, k = 1..points: the half-open band (0, max].
std::vector<double> default_grid(double max = kDefaultGridMax,
                                 std::size_t points = kDefaultGridPoints);

/// Evaluates S_Q on the grid with the selected kernel and detects peaks at
/// kDefaultProminenceFraction.
SpectrumResult displacement_spectrum(const LinearizedParams& lp, std::span<const double> omega_grid,
                                     StabilityPolicy policy = StabilityPolicy::Enforce,
                                     simd::Isa isa = simd::active_isa());

/// Strict local maxima whose topographic prominence is at least
/// prominence_frac times the global maximum, ordered by frequency.  Grid
/// endpoints are never peaks.  Features must span several grid points to be
/// resolved; that is the caller's responsibility.
std::vector<Peak> find_peaks(std::span<const double> omega, std::span<const double> values,
                             double prominence_frac);

inline std::vector<Peak> find_peaks(const SpectrumResult& sr, double prominence_frac) {
  return find_peaks(sr.omega_grid, sr.s_values, prominence_frac);
}

}  // namespace optomech
