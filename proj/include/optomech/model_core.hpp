#pragma once

#include <cstddef>

#include "optomech/params.hpp"

namespace optomech {

/// Effective frequencies and couplings of the fluctuation Hamiltonian about
/// the mean fields mf.  (beta + beta^dagger) is taken as 2 Re(beta); the
/// couplings are reduced to their real parts.
LinearizedParams linearize(const SystemParams& params, const MeanFields& mf);

/// Max-norm of the three steady-state defects, written with denominators
/// cleared:
///   d1 = alpha1 [i g1 s - (i omega1 + gamma_c1/2)] - i G alpha2 s
///   d2 = alpha2 [i g2 s - (i omega2 + gamma_c2/2)] - i G alpha1 s
///   d3 = beta (i omega_m + gamma_m) - i (g1 |alpha1|^2 + g2 |alpha2|^2 - 2 G Re(alpha1 alpha2*))
/// with s = 2 Re(beta).
double residual_mean_fields(const SystemParams& params, const MeanFields& mf);

struct MeanFieldSolution {
  MeanFields fields;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr double kMeanFieldDamping = 0.5;
inline constexpr std::size_t kMeanFieldMaxIter = 10000;

/// Damped fixed-point iteration of the steady-state equations.  On
/// non-convergence the last iterate is returned with converged = false.
MeanFieldSolution solve_mean_fields(const SystemParams& params, const MeanFields& initial_guess,
                                    double tol, std::size_t max_iter = kMeanFieldMaxIter);

}  // namespace optomech
