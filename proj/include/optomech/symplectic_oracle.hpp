#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "optomech/params.hpp"

namespace optomech {

using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// H = 1/2 v^T M v over v = (x, y, z, p_x, p_y, p_z), quadratures scaled so
/// that a free mode reads 1/2 (Omega^2 x^2 + p^2).
struct QuadraticForm {
  Matrix6 M = Matrix6::Zero();
};

struct SymplecticSpectrum {
  /// Exact normal-mode frequencies, ascending; meaningful when !unstable.
  std::array<double, 3> eigs{};
  bool unstable = false;
  /// All six eigenvalues of J M, sorted by (real, imag).
  std::vector<cdouble> dynamical;
  double min_hessian_eig = 0.0;
};

/// Standard symplectic form J = [[0, I], [-I, 0]] in (positions; momenta) order.
Matrix6 symplectic_form();

QuadraticForm hessian(const LinearizedParams& lp);

SymplecticSpectrum symplectic_eigenvalues(const QuadraticForm& q);

/// Symmetrized ground-state covariance sigma_ij = <{v_i, v_j}>/2 of H.
/// Throws Unstable unless M is positive definite.
Matrix6 ground_state_covariance(const QuadraticForm& q);

/// Symplectic eigenvalues of a covariance matrix (1/2 for a pure state).
std::array<double, 3> covariance_symplectic_eigenvalues(const Matrix6& sigma);

struct LambdaBracket {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kBoundaryTolerance = 1e-9;

/// Root of lambda -> min eig M(lambda) inside the bracket, by bisection.
/// Throws NoSignChange when the endpoints do not straddle zero.
double stability_boundary_lambda(const LinearizedParams& lp, LambdaBracket bracket);

}  // namespace optomech
