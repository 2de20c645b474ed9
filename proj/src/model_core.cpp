#include "optomech/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/error.hpp"

namespace optomech {

namespace {

constexpr cdouble kI{0.0, 1.0};

bool finite(double v) { return std::isfinite(v); }

struct Defects {
  cdouble d1, d2, d3;
};

Defects defects(const SystemParams& p, const MeanFields& mf) {
  const double s = 2.0 * mf.beta_mf.real();
  const cdouble a1 = mf.alpha1;
  const cdouble a2 = mf.alpha2;
  const cdouble den1 = kI * p.g1 * s - (kI * p.omega1 + p.gamma_c1 / 2.0);
  const cdouble den2 = kI * p.g2 * s - (kI * p.omega2 + p.gamma_c2 / 2.0);
  const double source = p.g1 * std::norm(a1) + p.g2 * std::norm(a2) -
                        2.0 * p.G_cross * (a1 * std::conj(a2)).real();
  return {a1 * den1 - kI * p.G_cross * a2 * s, a2 * den2 - kI * p.G_cross * a1 * s,
          mf.beta_mf * (kI * p.omega_m + p.gamma_m) - kI * source};
}

double max_abs(const Defects& d) {
  return std::max({std::abs(d.d1), std::abs(d.d2), std::abs(d.d3)});
}

}  // namespace

void SystemParams::validate() const {
  for (double v : {omega1, omega2, omega_m, g1, g2, G_cross, gamma_c1, gamma_c2, gamma_m, T_dim}) {
    if (!finite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite system parameter");
  }
  if (omega1 <= 0.0 || omega2 <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "optical frequencies must be positive");
  }
  if (omega_m != 1.0) {
    throw Error(ErrorCode::InvalidArgument,
                "omega_m must be exactly 1 (frequencies are in units of omega_m)");
  }
  if (gamma_c1 < 0.0 || gamma_c2 < 0.0 || gamma_m < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "decay rates must be non-negative");
  }
  if (T_dim < 0.0) throw Error(ErrorCode::InvalidArgument, "temperature must be non-negative");
}

void LinearizedParams::require_positive_frequencies() const {
  if (!(Omega1 > 0.0) || !(Omega2 > 0.0) || !(omega_m > 0.0)) {
    throw Error(ErrorCode::NonPositiveEffectiveFrequency,
                "Omega1=" + std::to_string(Omega1) + " Omega2=" + std::to_string(Omega2) +
                    " omega_m=" + std::to_string(omega_m));
  }
}

LinearizedParams linearize(const SystemParams& params, const MeanFields& mf) {
  params.validate();
  const double beta_re = mf.beta_mf.real();

  LinearizedParams lp;
  lp.Omega1 = params.omega1 - 2.0 * beta_re * params.g1;
  lp.Omega2 = params.omega2 - 2.0 * beta_re * params.g2;
  lp.omega_m = params.omega_m;

  const cdouble G1 = params.g1 * mf.alpha1 - params.G_cross * mf.alpha2;
  const cdouble G2 = params.g2 * mf.alpha2 - params.G_cross * mf.alpha1;
  const cdouble lambda = 2.0 * params.G_cross * mf.beta_mf;
  lp.G1 = G1.real();
  lp.G2 = G2.real();
  lp.lambda = lambda.real();

  auto significant_imag = [](cdouble c) {
    return std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c));
  };
  lp.imaginary_coupling_dropped =
      significant_imag(G1) || significant_imag(G2) || significant_imag(lambda);

  lp.G_cross = params.G_cross;
  lp.gamma_c1 = params.gamma_c1;
  lp.gamma_c2 = params.gamma_c2;
  lp.gamma_m = params.gamma_m;
  lp.T_dim = params.T_dim;
  lp.require_positive_frequencies();
  return lp;
}

double residual_mean_fields(const SystemParams& params, const MeanFields& mf) {
  return max_abs(defects(params, mf));
}

MeanFieldSolution solve_mean_fields(const SystemParams& params, const MeanFields& initial_guess,
                                    double tol, std::size_t max_iter) {
  params.validate();
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");

  const double damping = kMeanFieldDamping;
  MeanFieldSolution out;
  out.fields = initial_guess;
  out.residual = residual_mean_fields(params, out.fields);
  if (out.residual <= tol) {
    out.converged = true;
    return out;
  }

  for (std::size_t it = 1; it <= max_iter; ++it) {
    const MeanFields& cur = out.fields;
    const double s = 2.0 * cur.beta_mf.real();
    const cdouble den1 = kI * params.g1 * s - (kI * params.omega1 + params.gamma_c1 / 2.0);
    const cdouble den2 = kI * params.g2 * s - (kI * params.omega2 + params.gamma_c2 / 2.0);
    const double source = params.g1 * std::norm(cur.alpha1) + params.g2 * std::norm(cur.alpha2) -
                          2.0 * params.G_cross * (cur.alpha1 * std::conj(cur.alpha2)).real();

    MeanFields mapped;
    mapped.alpha1 = kI * params.G_cross * cur.alpha2 * s / den1;
    mapped.alpha2 = kI * params.G_cross * cur.alpha1 * s / den2;
    mapped.beta_mf = kI * source / (kI * params.omega_m + params.gamma_m);

    MeanFields next;
    next.alpha1 = (1.0 - damping) * cur.alpha1 + damping * mapped.alpha1;
    next.alpha2 = (1.0 - damping) * cur.alpha2 + damping * mapped.alpha2;
    next.beta_mf = (1.0 - damping) * cur.beta_mf + damping * mapped.beta_mf;

    out.fields = next;
    out.iterations = it;
    out.residual = residual_mean_fields(params, next);
    if (!finite(out.residual)) break;
    if (out.residual <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace optomech
