#include "optomech/symplectic_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "optomech/error.hpp"

namespace optomech {

namespace {

constexpr double kPairTolerance = 1e-9;

double min_eigenvalue(const Matrix6& m) {
  Eigen::SelfAdjointEigenSolver<Matrix6> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigensolver did not converge");
  }
  return es.eigenvalues().minCoeff();
}

Matrix6 symmetric_sqrt(const Matrix6& m, bool inverse) {
  Eigen::SelfAdjointEigenSolver<Matrix6> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "symmetric eigensolver did not converge");
  }
  Eigen::Matrix<double, 6, 1> d = es.eigenvalues().cwiseSqrt();
  if (inverse) d = d.cwiseInverse();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Matrix6 symplectic_form() {
  Matrix6 j = Matrix6::Zero();
  j.topRightCorner<3, 3>().setIdentity();
  j.bottomLeftCorner<3, 3>() = -Eigen::Matrix3d::Identity();
  return j;
}

QuadraticForm hessian(const LinearizedParams& lp) {
  lp.require_positive_frequencies();
  enum { X, Y, Z, PX, PY, PZ };
  const double root12 = std::sqrt(lp.Omega1 * lp.Omega2);

  QuadraticForm q;
  Matrix6& m = q.M;
  m(X, X) = lp.Omega1 * lp.Omega1;
  m(Y, Y) = lp.Omega2 * lp.Omega2;
  m(Z, Z) = lp.omega_m * lp.omega_m;
  m(PX, PX) = m(PY, PY) = m(PZ, PZ) = 1.0;
  m(X, Z) = m(Z, X) = -2.0 * lp.G1 * std::sqrt(lp.Omega1 * lp.omega_m);
  m(Y, Z) = m(Z, Y) = -2.0 * lp.G2 * std::sqrt(lp.Omega2 * lp.omega_m);
  m(X, Y) = m(Y, X) = lp.lambda * root12;
  m(PX, PY) = m(PY, PX) = lp.lambda / root12;
  return q;
}

SymplecticSpectrum symplectic_eigenvalues(const QuadraticForm& q) {
  SymplecticSpectrum out;
  out.min_hessian_eig = min_eigenvalue(q.M);

  const Matrix6 k = symplectic_form() * q.M;
  Eigen::EigenSolver<Matrix6> es(k, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "dynamical-matrix eigensolver did not converge");
  }
  out.dynamical.assign(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(out.dynamical.begin(), out.dynamical.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  out.unstable = !(out.min_hessian_eig > 0.0);
  if (out.unstable) return out;

  // Positive definite M: the spectrum is {+-i eps}.  Keep the upper half
  // plane and check each one has a partner at its negative.
  std::vector<double> upper;
  for (const cdouble& ev : out.dynamical) {
    if (ev.imag() > 0.0) upper.push_back(ev.imag());
  }
  if (upper.size() != 3) {
    throw Error(ErrorCode::NumericalFailure,
                "expected three +i eps eigenvalues, found " + std::to_string(upper.size()));
  }
  for (double eps : upper) {
    const bool paired = std::any_of(out.dynamical.begin(), out.dynamical.end(), [&](cdouble ev) {
      return std::abs(ev + cdouble(0.0, eps)) <= kPairTolerance * std::max(1.0, eps);
    });
    if (!paired) throw Error(ErrorCode::NumericalFailure, "unpaired dynamical eigenvalue");
  }
  std::sort(upper.begin(), upper.end());
  std::copy(upper.begin(), upper.end(), out.eigs.begin());
  return out;
}

Matrix6 ground_state_covariance(const QuadraticForm& q) {
  const double min_eig = min_eigenvalue(q.M);
  if (!(min_eig > 0.0)) {
    throw Error(ErrorCode::Unstable,
                "Hessian not positive definite (min eigenvalue " + std::to_string(min_eig) + ")");
  }
  // sigma = 1/2 M^{-1/2} |M^{1/2} J M^{1/2}| M^{-1/2}, |A| = (A^T A)^{1/2}.
  const Matrix6 root = symmetric_sqrt(q.M, false);
  const Matrix6 inv_root = symmetric_sqrt(q.M, true);
  const Matrix6 a = root * symplectic_form() * root;
  const Matrix6 abs_a = symmetric_sqrt(a.transpose() * a, false);
  Matrix6 sigma = 0.5 * inv_root * abs_a * inv_root;
  return 0.5 * (sigma + sigma.transpose());
}

std::array<double, 3> covariance_symplectic_eigenvalues(const Matrix6& sigma) {
  const Matrix6 k = symplectic_form() * sigma;
  Eigen::EigenSolver<Matrix6> es(k, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "covariance eigensolver did not converge");
  }
  std::vector<double> upper;
  for (const cdouble& ev : es.eigenvalues()) {
    if (ev.imag() > 0.0) upper.push_back(ev.imag());
  }
  if (upper.size() != 3) {
    throw Error(ErrorCode::NumericalFailure, "covariance is not positive definite");
  }
  std::sort(upper.begin(), upper.end());
  return {upper[0], upper[1], upper[2]};
}

double stability_boundary_lambda(const LinearizedParams& lp, LambdaBracket bracket) {
  auto min_eig_at = [&](double lambda) {
    LinearizedParams p = lp;
    p.lambda = lambda;
    return min_eigenvalue(hessian(p).M);
  };

  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = min_eig_at(lo);
  const double f_hi = min_eig_at(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw Error(ErrorCode::NoSignChange, "min Hessian eigenvalue has the same sign at " +
                                             std::to_string(lo) + " and " + std::to_string(hi));
  }
  // Tighter than the advertised tolerance so the midpoint is well inside it.
  while (hi - lo > 0.25 * kBoundaryTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = min_eig_at(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace optomech
