#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "optomech/error.hpp"
#include "optomech/normal_modes.hpp"
#include "optomech/symplectic_oracle.hpp"

using namespace optomech;

namespace {

LinearizedParams modes(double O1, double O2, double wm, double G1, double G2, double lam) {
  LinearizedParams lp;
  lp.Omega1 = O1;
  lp.Omega2 = O2;
  lp.omega_m = wm;
  lp.G1 = G1;
  lp.G2 = G2;
  lp.lambda = lam;
  return lp;
}

enum { X, Y, Z, PX, PY, PZ };

// Random point well inside the positive-definite region.
LinearizedParams random_stable(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> om(0.6, 2.0), c(0.0, 0.25);
  for (;;) {
    const LinearizedParams lp = modes(om(rng), om(rng), 1.0, c(rng), c(rng), c(rng));
    if (symplectic_eigenvalues(hessian(lp)).min_hessian_eig > 0.05) return lp;
  }
}

}  // namespace

TEST_CASE("hessian: entries") {
  const QuadraticForm zero = hessian(modes(1.3, 1.5, 1.0, 0, 0, 0));
  Matrix6 d = Matrix6::Zero();
  d.diagonal() << 1.3 * 1.3, 1.5 * 1.5, 1.0, 1.0, 1.0, 1.0;
  CHECK((zero.M - d).cwiseAbs().maxCoeff() == 0.0);

  CHECK(hessian(modes(1, 1, 1, 0.3, 0, 0)).M(X, Z) == doctest::Approx(-0.6));

  const LinearizedParams lp = modes(1.3, 0.8, 1.1, 0.2, 0.35, 0.4);
  const Matrix6 m = hessian(lp).M;
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(m(Y, Z) == doctest::Approx(-2 * 0.35 * std::sqrt(0.8 * 1.1)));
  CHECK(m(X, Y) == doctest::Approx(0.4 * std::sqrt(1.3 * 0.8)));
  CHECK(m(PX, PY) == doctest::Approx(0.4 / std::sqrt(1.3 * 0.8)));
  CHECK(m(X, PX) == 0.0);
  CHECK(m(Z, PZ) == 0.0);
}

TEST_CASE("hessian: momentum block determinant") {
  for (double lam : {0.0, 0.3, 0.9, 1.0, 1.4}) {
    const Matrix6 m = hessian(modes(1.0, 1.0, 1.0, 0.1, 0.1, lam)).M;
    const double det = m(PX, PX) * m(PY, PY) - m(PX, PY) * m(PY, PX);
    CHECK(det == doctest::Approx(1.0 - lam * lam));
  }
  CHECK(hessian(modes(1.0, 1.0, 1.0, 0, 0, 1.0)).M.block<2, 2>(PX, PX).determinant() == 0.0);
}

TEST_CASE("hessian: rejects non-positive frequencies") {
  CHECK_THROWS_AS(hessian(modes(1, 0, 1, 0, 0, 0)), Error);
}

TEST_CASE("symplectic_eigenvalues: decoupled") {
  const SymplecticSpectrum s = symplectic_eigenvalues(hessian(modes(1.3, 1.5, 1.0, 0, 0, 0)));
  REQUIRE_FALSE(s.unstable);
  CHECK(std::abs(s.eigs[0] - 1.0) <= 1e-12);
  CHECK(std::abs(s.eigs[1] - 1.3) <= 1e-12);
  CHECK(std::abs(s.eigs[2] - 1.5) <= 1e-12);
  CHECK(s.min_hessian_eig == doctest::Approx(1.0));
}

TEST_CASE("symplectic_eigenvalues: decoupled y mode") {
  const SymplecticSpectrum s = symplectic_eigenvalues(hessian(modes(1.0, 1.7, 1.0, 0.2, 0, 0)));
  CHECK(std::any_of(s.eigs.begin(), s.eigs.end(), [](double e) { return std::abs(e - 1.7) <= 1e-12; }));
}

TEST_CASE("symplectic_eigenvalues: two-mode block against a 4x4 eigensolve") {
  const SymplecticSpectrum s = symplectic_eigenvalues(hessian(modes(1.0, 1.0, 1.0, 0.2, 0, 0)));
  // Golden values from an independent numpy eigensolve of the full matrix.
  CHECK(s.eigs[0] == doctest::Approx(0.7745966692414834).epsilon(1e-12));
  CHECK(s.eigs[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.eigs[2] == doctest::Approx(1.1832159566199243).epsilon(1e-12));

  // (x, z) block alone: [[0, I], [-Mq, 0]] with Mq = [[1, -0.4], [-0.4, 1]].
  Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
  k.topRightCorner<2, 2>().setIdentity();
  k.bottomLeftCorner<2, 2>() << -1.0, 0.4, 0.4, -1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(k);
  std::vector<double> up;
  for (auto ev : es.eigenvalues()) {
    if (ev.imag() > 0) up.push_back(ev.imag());
  }
  std::sort(up.begin(), up.end());
  REQUIRE(up.size() == 2);
  CHECK(s.eigs[0] == doctest::Approx(up[0]).epsilon(1e-12));
  CHECK(s.eigs[2] == doctest::Approx(up[1]).epsilon(1e-12));
}

TEST_CASE("symplectic_eigenvalues: spectrum closed under negation and conjugation") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> om(0.5, 2.0), c(0.0, 1.2);
  for (int i = 0; i < 300; ++i) {
    const SymplecticSpectrum s = symplectic_eigenvalues(hessian(modes(om(rng), om(rng), 1.0, c(rng), c(rng), c(rng))));
    REQUIRE(s.dynamical.size() == 6);
    for (const cdouble& ev : s.dynamical) {
      auto near = [&](cdouble target) {
        return std::any_of(s.dynamical.begin(), s.dynamical.end(),
                           [&](cdouble o) { return std::abs(o - target) <= 1e-8 * std::max(1.0, std::abs(ev)); });
      };
      CHECK(near(-ev));
      CHECK(near(std::conj(ev)));
    }
    if (!s.unstable) {
      for (double e : s.eigs) CHECK(e > 0.0);
    }
  }
}

TEST_CASE("symplectic_eigenvalues: relabeling invariance") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> om(0.5, 2.0), c(0.0, 0.3);
  for (int i = 0; i < 200; ++i) {
    const double O1 = om(rng), O2 = om(rng), G1 = c(rng), G2 = c(rng), lam = c(rng);
    const SymplecticSpectrum a = symplectic_eigenvalues(hessian(modes(O1, O2, 1.0, G1, G2, lam)));
    const SymplecticSpectrum b = symplectic_eigenvalues(hessian(modes(O2, O1, 1.0, G2, G1, lam)));
    CHECK(a.unstable == b.unstable);
    if (a.unstable) continue;
    for (int k = 0; k < 3; ++k) CHECK(a.eigs[k] == doctest::Approx(b.eigs[k]).epsilon(1e-10));
  }
}

TEST_CASE("symplectic_eigenvalues: unstable region flagged") {
  const SymplecticSpectrum s = symplectic_eigenvalues(hessian(modes(1, 1, 1, 0, 0, 1.2)));
  CHECK(s.unstable);
  CHECK(s.min_hessian_eig < 0.0);
}

TEST_CASE("ground_state_covariance: decoupled") {
  const Matrix6 s = ground_state_covariance(hessian(modes(1.0, 1.3, 1.0, 0, 0, 0)));
  CHECK(s(X, X) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s(PX, PX) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s(Y, Y) == doctest::Approx(1.0 / 2.6).epsilon(1e-14));
  CHECK(s(PY, PY) == doctest::Approx(0.65).epsilon(1e-14));
}

TEST_CASE("ground_state_covariance: golden (1, 1, 1, 0.01, 0.01, 0.5)") {
  // Matrix-sign-function evaluation in numpy/scipy.
  const Matrix6 s = ground_state_covariance(hessian(modes(1, 1, 1, 0.01, 0.01, 0.5)));
  const double expected[6] = {0.5000426827162945, 0.500042682716294,  0.5001120444784051,
                              0.4999893317400201, 0.4999893317400195, 0.49995199154958253};
  for (int i = 0; i < 6; ++i) CHECK(s(i, i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("ground_state_covariance: purity and uncertainty") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    const Matrix6 s = ground_state_covariance(hessian(random_stable(rng)));
    for (double nu : covariance_symplectic_eigenvalues(s)) CHECK(std::abs(nu - 0.5) <= 1e-9);
    for (int q = 0; q < 3; ++q) CHECK(s(q, q) * s(q + 3, q + 3) >= 0.25 - 1e-12);
  }
}

TEST_CASE("ground_state_covariance: rejects indefinite forms") {
  try {
    ground_state_covariance(hessian(modes(1, 1, 1, 0, 0, 1.5)));
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unstable);
  }
}

TEST_CASE("stability_boundary_lambda") {
  CHECK(std::abs(stability_boundary_lambda(modes(1, 1, 1, 0, 0, 0), {0.0, 2.0}) - 1.0) <= 1e-9);
  const LinearizedParams lp = modes(4, 1, 1, 1e-4, 1e-4, 0);
  CHECK(std::abs(stability_boundary_lambda(lp, {0.0, 3.0}) - critical_lambda(lp)) <= 1e-6);

  // Strong optomechanical coupling: the position block goes indefinite
  // first, where its determinant 1 - lambda^2 - 4 G1^2 vanishes.
  const LinearizedParams strong = modes(1, 1, 1, 0.4, 0, 0);
  const double root = stability_boundary_lambda(strong, {0.0, 1.5});
  CHECK(root < critical_lambda(strong) - 1e-3);
  CHECK(std::abs(root - 0.6) <= 1e-9);
  LinearizedParams p = strong;
  p.lambda = root - 1e-8;
  CHECK(symplectic_eigenvalues(hessian(p)).min_hessian_eig > 0.0);
  p.lambda = root + 1e-8;
  CHECK(symplectic_eigenvalues(hessian(p)).min_hessian_eig < 0.0);
}

TEST_CASE("stability_boundary_lambda: no sign change") {
  try {
    stability_boundary_lambda(modes(1, 1, 1, 0, 0, 0), {0.0, 0.5});
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSignChange);
  }
}

TEST_CASE("oracle agrees with closed forms in the decoupled limit") {
  const LinearizedParams lp = modes(1.3, 1.5, 1.0, 0, 0, 0);
  const NormalModeResult nm = excitation_energies(lp);
  CHECK(nm.eps_p1 == 1.0);
  CHECK(nm.eps_p2 == 1.0);
  const SymplecticSpectrum s = symplectic_eigenvalues(hessian(lp));
  CHECK(s.eigs[0] == doctest::Approx(1.0));
  CHECK(s.eigs[1] == doctest::Approx(1.3));
  CHECK(s.eigs[2] == doctest::Approx(1.5));
}
