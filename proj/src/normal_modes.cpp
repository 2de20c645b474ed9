#include "optomech/normal_modes.hpp"

#include <cmath>
#include <numbers>

#include "optomech/error.hpp"

namespace optomech {

namespace {

double half_atan2(double num, double den) {
  if (num == 0.0 && den == 0.0) return 0.0;
  return 0.5 * std::atan2(num, den);
}

// The three square-root terms that recur in the closed forms.
struct Radicals {
  double g1;      // sqrt((Omega1^2 - wm^2)^2 + 16 G1^2 Omega1 wm)
  double g2;      // sqrt((Omega2^2 - wm^2)^2 + 16 G2^2 Omega2 wm)
  double lambda;  // sqrt((Omega2^2 - Omega1^2)^2 + 4 lambda^2 Omega1 Omega2)
};

Radicals radicals(const LinearizedParams& lp) {
  const double o1 = lp.Omega1 * lp.Omega1;
  const double o2 = lp.Omega2 * lp.Omega2;
  const double wm = lp.omega_m * lp.omega_m;
  return {std::sqrt((o1 - wm) * (o1 - wm) + 16.0 * lp.G1 * lp.G1 * lp.Omega1 * lp.omega_m),
          std::sqrt((o2 - wm) * (o2 - wm) + 16.0 * lp.G2 * lp.G2 * lp.Omega2 * lp.omega_m),
          std::sqrt((o2 - o1) * (o2 - o1) + 4.0 * lp.lambda * lp.lambda * lp.Omega1 * lp.Omega2)};
}

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Normal: return "Normal";
    case Phase::Superradiant: return "Superradiant";
    case Phase::Unstable: return "Unstable";
  }
  return "Unknown";
}

RotationAngles rotation_angles(const LinearizedParams& lp) {
  const double o1 = lp.Omega1 * lp.Omega1;
  const double o2 = lp.Omega2 * lp.Omega2;
  const double wm = lp.omega_m * lp.omega_m;
  RotationAngles a;
  a.gamma1 = half_atan2(2.0 * lp.lambda * std::sqrt(lp.Omega1 * lp.Omega2), o2 - o1);
  a.gamma2 = half_atan2(4.0 * lp.G1 * std::sqrt(lp.Omega1 * lp.omega_m), o1 - wm);
  a.gamma3 = half_atan2(4.0 * lp.G2 * std::sqrt(lp.Omega2 * lp.omega_m), o2 - wm);
  a.beta_p = std::numbers::pi / 4.0;
  return a;
}

NormalModeResult excitation_energies(const LinearizedParams& lp) {
  lp.require_positive_frequencies();
  const double o1 = lp.Omega1 * lp.Omega1;
  const double o2 = lp.Omega2 * lp.Omega2;
  const double wm = lp.omega_m * lp.omega_m;
  const Radicals r = radicals(lp);

  NormalModeResult nm;
  nm.angles = rotation_angles(lp);
  nm.eps_x2 = 0.5 * ((2.0 * o1 + o2 + wm) + (r.g1 - r.lambda));
  nm.eps_y2 = 0.5 * ((o1 + 2.0 * o2 + wm) + (r.lambda + r.g2));
  nm.eps_z2 = 0.5 * ((o1 + o2 + 2.0 * wm) - (r.g1 + r.g2));

  const double ratio = lp.lambda / std::sqrt(lp.Omega1 * lp.Omega2);
  nm.eps_p1 = 1.0 - ratio;
  nm.eps_p2 = 1.0 + ratio;

  // Principal roots of each factor: a pair of imaginary factors multiplies
  // out to a negative real energy, which is how the unstable branch shows up.
  nm.eps_X = std::sqrt(cdouble(nm.eps_x2)) * std::sqrt(cdouble(nm.eps_p1));
  nm.eps_Y = std::sqrt(cdouble(nm.eps_y2)) * std::sqrt(cdouble(nm.eps_p2));
  nm.eps_Z = std::sqrt(cdouble(nm.eps_z2));

  classify_phase(nm);
  return nm;
}

double critical_lambda(const LinearizedParams& lp) {
  lp.require_positive_frequencies();
  return std::sqrt(lp.Omega1 * lp.Omega2);
}

double lambda_unstable(const LinearizedParams& lp) {
  lp.require_positive_frequencies();
  const double o1 = lp.Omega1 * lp.Omega1;
  const double o2 = lp.Omega2 * lp.Omega2;
  const double wm = lp.omega_m * lp.omega_m;
  const double outer = 2.0 * o1 + o2 + wm + radicals(lp).g1;
  const double radicand = outer * outer - (o2 - o1) * (o2 - o1);
  if (radicand < 0.0) {
    throw Error(ErrorCode::ComplexThreshold, "lambda_us radicand " + std::to_string(radicand));
  }
  return std::sqrt(radicand) / (2.0 * std::sqrt(lp.Omega1 * lp.Omega2));
}

double g1_critical(const LinearizedParams& lp) {
  lp.require_positive_frequencies();
  const double o1 = lp.Omega1 * lp.Omega1;
  const double o2 = lp.Omega2 * lp.Omega2;
  const double wm = lp.omega_m * lp.omega_m;
  const double outer = o1 + o2 + 2.0 * wm - radicals(lp).g2;
  const double radicand = outer * outer - (o1 - wm) * (o1 - wm);
  if (radicand < 0.0) {
    throw Error(ErrorCode::ComplexThreshold, "G1 threshold radicand " + std::to_string(radicand));
  }
  return std::sqrt(radicand) / (4.0 * std::sqrt(lp.Omega1 * lp.omega_m));
}

void classify_phase(NormalModeResult& nm) {
  const double x_product = nm.eps_x2 * nm.eps_p1;
  const double y_product = nm.eps_y2 * nm.eps_p2;
  nm.boundary = false;

  if (nm.eps_p1 < 0.0 && nm.eps_x2 < 0.0) {
    nm.phase = Phase::Unstable;
    return;
  }
  if (x_product < 0.0 || nm.eps_z2 < 0.0 || y_product < 0.0) {
    nm.phase = Phase::Superradiant;
    return;
  }
  if (x_product == 0.0 || nm.eps_z2 == 0.0 || y_product == 0.0) {
    nm.phase = Phase::Superradiant;
    nm.boundary = true;
    return;
  }
  nm.phase = Phase::Normal;
}

}  // namespace optomech
