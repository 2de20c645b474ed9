#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "optomech/simd/dispatch.hpp"

namespace optomech::kernels {

/// Flattened inputs of the closed-form S_Q evaluation.
struct SpectrumInputs {
  double Delta1, Delta2;
  double gamma_c1, gamma_c2, gamma_m;
  double omega_m;
  double lambda, G1, G2, G_cross;
  double sqrt_gamma_c1, sqrt_gamma_c2;
  double thermal_scale;  // gamma_m / omega_m
};

/// out[k] = S_Q(omega[k]); thermal[k] holds omega coth(omega / 2T) at omega[k].
/// All spans must have equal length.
void displacement_spectrum(simd::Isa isa, const SpectrumInputs& in, std::span<const double> omega,
                           std::span<const double> thermal, std::span<double> out);

/// Trajectories advanced together by one Euler-Maruyama call.
inline constexpr std::size_t kBatch = 4;
inline constexpr std::size_t kStateDim = 6;
inline constexpr std::size_t kNoiseChannels = 5;

/// One explicit step x <- (I + dt A) x + scale .* xi, state order
/// (X1, Y1, X2, Y2, Q, P).  Noise channel c drives row kNoiseRow[c].
struct EulerStep {
  std::array<double, kStateDim * kStateDim> propagator;  // row-major I + dt A
  std::array<double, kNoiseChannels> noise_scale;        // sqrt(dt * intensity)
};

inline constexpr std::array<std::size_t, kNoiseChannels> kNoiseRow{0, 1, 2, 3, 5};

/// Advances kBatch trajectories by `steps` steps.  state is
/// [kStateDim][kBatch] and noise is [step][channel][kBatch].  After every
/// step Q is written to q_out as [step][kBatch] and the full state to
/// state_out as [step][kStateDim][kBatch]; either may be empty.
void euler_maruyama(simd::Isa isa, const EulerStep& step, std::span<double> state,
                    std::span<const double> noise, std::size_t steps, std::span<double> q_out,
                    std::span<double> state_out = {});

}  // namespace optomech::kernels
