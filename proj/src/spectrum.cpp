#include "optomech/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/error.hpp"
#include "optomech/kernels.hpp"
#include "optomech/langevin.hpp"

namespace optomech {

namespace {

constexpr cdouble kI{0.0, 1.0};

kernels::SpectrumInputs kernel_inputs(const LinearizedParams& lp) {
  return {lp.Delta1(),
          lp.Delta2(),
          lp.gamma_c1,
          lp.gamma_c2,
          lp.gamma_m,
          lp.omega_m,
          lp.lambda,
          lp.G1,
          lp.G2,
          lp.G_cross,
          std::sqrt(lp.gamma_c1),
          std::sqrt(lp.gamma_c2),
          lp.gamma_m / lp.omega_m};
}

}  // namespace

TransferCoefficients coefficients(const LinearizedParams& lp, double w) {
  const double D1 = lp.Delta1();
  const double D2 = lp.Delta2();
  const double lam = lp.lambda;
  const double wm = lp.omega_m;
  const double G1 = lp.G1;
  const double G2 = lp.G2;

  const cdouble a1 = kI * w + lp.gamma_c1 / 2.0;
  const cdouble a2 = kI * w + lp.gamma_c2 / 2.0;
  const cdouble quad2 = D2 * D2 - w * w + lp.gamma_c2 * lp.gamma_c2 / 4.0 + kI * w * lp.gamma_c2;
  const cdouble quad1 = D1 * D1 - w * w + lp.gamma_c1 * lp.gamma_c1 / 4.0 + kI * w * lp.gamma_c1;

  TransferCoefficients c;
  c.C1 = a1 * quad2 + lam * lam * a2;
  c.C2 = quad2 * quad1 + std::pow(lam, 4) + 2.0 * lam * lam * (a1 * a2 - D1 * D2);
  c.C3 = wm * G1 * (a1 * quad2 + lam * lam * a2) + lam * wm * G2 * D1 * a2 +
         lam * wm * G2 * D2 * a1;
  c.C4 = quad2 * c.C2 *
         ((wm * wm - w * w + kI * w * lp.gamma_m) * c.C1 +
          wm * lp.G_cross * lp.G_cross * D2 * a1 - lam * wm * G1 * G2 * a2);
  c.C5 = c.C3 * (lam * G2 * c.C1 * a2 -
                 (lam * G2 * D2 + G1 * quad2) * (D1 * quad2 - lam * lam * D2));
  c.B = c.C4 - c.C5;

  const cdouble mix = D1 * a2 + D2 * a1;
  c.f_W = wm * quad2 * c.C1 * c.C2;
  c.f_X1 = std::sqrt(lp.gamma_c1) * quad2 * c.C1 * c.C3;
  c.f_Y1 = std::sqrt(lp.gamma_c1) * quad2 *
           (lam * wm * G2 * a2 * c.C2 + (lam * lam * D2 - D1 * quad2) * c.C3);
  c.f_X2 = std::sqrt(lp.gamma_c2) * quad2 *
           (lam * lam * wm * G2 * mix * mix + wm * G2 * c.C2 * a1 * a2 + lam * wm * G1 * c.C1 * mix);
  c.f_Y2 = std::sqrt(lp.gamma_c2) *
           (lam * c.C3 * (lam * lam * D2 * D2 - D1 * D2 * quad2 + c.C1 * a2) -
            wm * G2 * D2 * c.C2 * a1 * quad2);
  return c;
}

double thermal_kernel(double omega, double T_dim) {
  if (T_dim == 0.0) return std::abs(omega);
  const double u = omega / (2.0 * T_dim);
  if (std::abs(omega) / T_dim < 1e-6) return 2.0 * T_dim * (1.0 + u * u / 3.0);
  return omega / std::tanh(u);
}

SpectrumTerms spectrum_terms(const LinearizedParams& lp, double omega) {
  const TransferCoefficients c = coefficients(lp, omega);
  const double inv_b2 = 1.0 / std::norm(c.B);

  // Q(-w) carries conj(f): all coefficients are rational in i w with real
  // parameters.  The cross correlators are <X Y> = +i, <Y X> = -i per unit
  // 2 pi delta(w + w').
  auto cross = [](cdouble fx_w, cdouble fy_w, cdouble fx_mw, cdouble fy_mw) {
    const cdouble v = kI * fx_w * fy_mw - kI * fy_w * fx_mw;
    return v.real();
  };
  const cdouble fx1m = std::conj(c.f_X1), fy1m = std::conj(c.f_Y1);
  const cdouble fx2m = std::conj(c.f_X2), fy2m = std::conj(c.f_Y2);

  SpectrumTerms t;
  t.thermal = std::norm(c.f_W) * (lp.gamma_m / lp.omega_m) * thermal_kernel(omega, lp.T_dim) * inv_b2;
  t.optical = (std::norm(c.f_X1) + std::norm(c.f_Y1) + std::norm(c.f_X2) + std::norm(c.f_Y2)) * inv_b2;
  t.cross_ordered =
      (cross(c.f_X1, c.f_Y1, fx1m, fy1m) + cross(c.f_X2, c.f_Y2, fx2m, fy2m)) * inv_b2;
  t.cross_reversed =
      (cross(fx1m, fy1m, c.f_X1, c.f_Y1) + cross(fx2m, fy2m, c.f_X2, c.f_Y2)) * inv_b2;
  t.total = t.thermal + t.optical + 0.5 * (t.cross_ordered + t.cross_reversed);
  return t;
}

double displacement_spectrum_at(const LinearizedParams& lp, double omega) {
  return spectrum_terms(lp, omega).total;
}

std::vector<double> default_grid(double max, std::size_t points) {
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = max * static_cast<double>(k + 1) / static_cast<double>(points);
  }
  return grid;
}

SpectrumResult displacement_spectrum(const LinearizedParams& lp, std::span<const double> omega_grid,
                                     StabilityPolicy policy, simd::Isa isa) {
  lp.require_positive_frequencies();
  const DriftMatrix dm = drift_matrix(lp);

  SpectrumResult sr;
  sr.spectral_abscissa = dm.spectral_abscissa;
  sr.stable = dm.spectral_abscissa < 0.0;
  sr.isa = isa;
  if (!sr.stable && policy == StabilityPolicy::Enforce) {
    throw Error(ErrorCode::Unstable,
                "drift matrix eigenvalue with positive real part: " +
                    std::to_string(dm.leading_eigenvalue.real()) + (dm.leading_eigenvalue.imag() < 0 ? "" : "+") +
                    std::to_string(dm.leading_eigenvalue.imag()) + "i");
  }

  sr.omega_grid.assign(omega_grid.begin(), omega_grid.end());
  std::vector<double> thermal(omega_grid.size());
  std::transform(omega_grid.begin(), omega_grid.end(), thermal.begin(),
                 [&](double w) { return thermal_kernel(w, lp.T_dim); });
  sr.s_values.resize(omega_grid.size());
  kernels::displacement_spectrum(isa, kernel_inputs(lp), sr.omega_grid, thermal, sr.s_values);
  sr.peaks = find_peaks(sr.omega_grid, sr.s_values, kDefaultProminenceFraction);
  return sr;
}

std::vector<Peak> find_peaks(std::span<const double> omega, std::span<const double> values,
                             double prominence_frac) {
  if (omega.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "find_peaks: grid and values differ in length");
  }
  std::vector<Peak> peaks;
  const std::size_t n = values.size();
  if (n < 3) return peaks;
  const double global_max = *std::max_element(values.begin(), values.end());
  const double threshold = prominence_frac * global_max;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h = values[i];
    if (!(h > values[i - 1] && h > values[i + 1])) continue;

    // Walk outwards until a strictly higher sample or the edge; the
    // prominence is measured from the higher of the two valley floors.
    double left_min = h;
    for (std::size_t j = i; j > 0 && values[j - 1] <= h; --j) left_min = std::min(left_min, values[j - 1]);
    double right_min = h;
    for (std::size_t j = i; j + 1 < n && values[j + 1] <= h; ++j) right_min = std::min(right_min, values[j + 1]);

    const double prominence = h - std::max(left_min, right_min);
    if (prominence >= threshold) peaks.push_back({omega[i], h, prominence, i});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.omega_peak < b.omega_peak; });
  return peaks;
}

}  // namespace optomech
