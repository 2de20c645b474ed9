#pragma once

#include <string_view>

#include "optomech/params.hpp"

namespace optomech {

enum class Phase { Normal, Superradiant, Unstable };

std::string_view to_string(Phase phase) noexcept;

/// Angles of the composite coordinate rotation and the momentum rotation.
struct RotationAngles {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double beta_p = 0.0;
};

/// Closed-form diagonalization of the bilinear Hamiltonian.  The energies
/// are kept as squares because they go negative past the phase boundaries;
/// the final energies are complex for the same reason.
struct NormalModeResult {
  RotationAngles angles;
  double eps_x2 = 0.0;
  double eps_y2 = 0.0;
  double eps_z2 = 0.0;
  double eps_p1 = 1.0;
  double eps_p2 = 1.0;
  cdouble eps_X{};
  cdouble eps_Y{};
  cdouble eps_Z{};
  Phase phase = Phase::Normal;
  /// A product entering the classification was exactly zero.
  bool boundary = false;
};

RotationAngles rotation_angles(const LinearizedParams& lp);

NormalModeResult excitation_energies(const LinearizedParams& lp);

/// sqrt(Omega1 Omega2): the momentum-coupling critical point.
double critical_lambda(const LinearizedParams& lp);

/// lambda above which eps_x^2 and eps_p1 are both negative.  Throws
/// ComplexThreshold when the radicand is negative.
double lambda_unstable(const LinearizedParams& lp);

/// G1 above which eps_Z turns imaginary.  Throws ComplexThreshold when the
/// radicand is negative.
double g1_critical(const LinearizedParams& lp);

/// Sets nm.phase and nm.boundary from the signs of the squared energies.
void classify_phase(NormalModeResult& nm);

}  // namespace optomech
