#pragma once

#include <complex>

namespace optomech {

using cdouble = std::complex<double>;

/// Bare physical configuration. Frequencies and rates are in units of the
/// mechanical frequency, so omega_m is pinned to 1; temperature is k_B T / (hbar omega_m).
struct SystemParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double omega_m = 1.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double G_cross = 0.0;
  double gamma_c1 = 0.0;
  double gamma_c2 = 0.0;
  double gamma_m = 0.0;
  double T_dim = 0.0;

  /// Throws Error(InvalidArgument) on a violated invariant.
  void validate() const;
};

/// Complex steady-state amplitudes of the two optical modes and the mechanical mode.
struct MeanFields {
  cdouble alpha1{};
  cdouble alpha2{};
  cdouble beta_mf{};
};

/// Parameters of the bilinear fluctuation Hamiltonian and its damped dynamics.
///
/// Detunings are not stored: Delta_i = -Omega_i identically.  G_cross is the
/// bare inter-mode coupling carried through for the closed-form spectrum
/// coefficients, which reference it directly.
struct LinearizedParams {
  double Omega1 = 1.0;
  double Omega2 = 1.0;
  double omega_m = 1.0;
  double G1 = 0.0;
  double G2 = 0.0;
  double lambda = 0.0;
  double G_cross = 0.0;
  double gamma_c1 = 0.0;
  double gamma_c2 = 0.0;
  double gamma_m = 0.0;
  double T_dim = 0.0;
  /// Set by linearize() when a dropped imaginary coupling part exceeded 1e-12 relative.
  bool imaginary_coupling_dropped = false;

  double Delta1() const noexcept { return -Omega1; }
  double Delta2() const noexcept { return -Omega2; }

  /// Throws NonPositiveEffectiveFrequency unless Omega1, Omega2, omega_m > 0.
  void require_positive_frequencies() const;
};

}  // namespace optomech
