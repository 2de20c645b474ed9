#include "optomech/squeezing.hpp"

#include <cmath>
#include <limits>

#include "optomech/error.hpp"
#include "optomech/parallel.hpp"

namespace optomech {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void mark_divergent(VarianceSet& v, std::string_view name, double value) {
  if (!v.divergent || value < v.divergent_value) {
    v.divergent_denominator = std::string(name);
    v.divergent_value = value;
  }
  v.divergent = true;
}

}  // namespace

std::string_view to_string(Quadrature q) noexcept {
  switch (q) {
    case Quadrature::X: return "x";
    case Quadrature::Y: return "y";
    case Quadrature::Z: return "z";
    case Quadrature::PX: return "p_x";
    case Quadrature::PY: return "p_y";
    case Quadrature::PZ: return "p_z";
  }
  return "?";
}

std::string_view to_string(CouplingAxis axis) noexcept {
  switch (axis) {
    case CouplingAxis::Lambda: return "lambda";
    case CouplingAxis::G1: return "G1";
    case CouplingAxis::G2: return "G2";
  }
  return "?";
}

CouplingAxis parse_axis(std::string_view name) {
  if (name == "lambda") return CouplingAxis::Lambda;
  if (name == "G1") return CouplingAxis::G1;
  if (name == "G2") return CouplingAxis::G2;
  throw Error(ErrorCode::InvalidArgument, "unknown coupling axis '" + std::string(name) + "'");
}

std::string_view to_string(PointStatus s) noexcept {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Divergent: return "DivergentVariance";
    case PointStatus::OutsideNormalPhase: return "OutsideNormalPhase";
  }
  return "?";
}

LinearizedParams with_coupling(LinearizedParams lp, CouplingAxis axis, double value) {
  switch (axis) {
    case CouplingAxis::Lambda: lp.lambda = value; break;
    case CouplingAxis::G1: lp.G1 = value; break;
    case CouplingAxis::G2: lp.G2 = value; break;
  }
  return lp;
}

VarianceSet variances(const LinearizedParams& lp) { return variances(lp, excitation_energies(lp)); }

VarianceSet variances(const LinearizedParams& lp, const NormalModeResult& nm) {
  if (nm.phase != Phase::Normal || !(nm.eps_x2 > 0.0) || !(nm.eps_y2 > 0.0) ||
      !(nm.eps_z2 > 0.0) || !(nm.eps_p1 > 0.0)) {
    throw Error(ErrorCode::OutsideNormalPhase,
                "closed-form variances need eps_x^2, eps_y^2, eps_z^2, eps_p1 > 0 (phase " +
                    std::string(to_string(nm.phase)) + ")");
  }

  const double o1 = lp.Omega1;
  const double o2 = lp.Omega2;
  const double wm = lp.omega_m;
  const double ex = std::sqrt(nm.eps_x2);
  const double ey = std::sqrt(nm.eps_y2);
  const double ez = std::sqrt(nm.eps_z2);
  const double s1 = std::sqrt(nm.eps_p1);
  const double s2 = std::sqrt(nm.eps_p2);

  const auto& a = nm.angles;
  const double c1 = std::cos(a.gamma1), c2 = std::cos(a.gamma2), c3 = std::cos(a.gamma3);
  const double sn1 = std::sin(a.gamma1), sn2 = std::sin(a.gamma2), sn3 = std::sin(a.gamma3);
  const double w12 = (c1 + c2) * (c1 + c2);
  const double w13 = (c1 + c3) * (c1 + c3);
  const double w23 = (c2 + c3) * (c2 + c3);
  const double q1 = sn1 * sn1, q2 = sn2 * sn2, q3 = sn3 * sn3;

  VarianceSet v;
  auto& out = v.values;
  // Position quadratures.
  out[0] = 1.0 / (2.0 * o1) *
           (1.0 + w12 / ex * (s1 * o1 - ex) + q1 / ey * (s2 * o1 - ey) + q2 / ez * (o1 - ez));
  out[1] = 1.0 / (2.0 * o2) *
           (1.0 + q1 / ex * (s1 * o2 - ex) + w13 / ey * (s2 * o2 - ey) + q3 / ez * (o2 - ez));
  out[2] = 1.0 / (2.0 * wm) *
           (1.0 + q2 / ex * (s1 * wm - ex) + q3 / ey * (s2 * wm - ey) + w23 / ez * (wm - ez));
  // Momentum quadratures.
  out[3] = o1 / 2.0 *
           (1.0 + w12 / (s1 * o1) * (ex - s1 * o1) + q1 / (s2 * o1) * (ey - s2 * o1) +
            q2 / o1 * (ez - o1));
  out[4] = o2 / 2.0 *
           (1.0 + q1 / (s1 * o2) * (ex - s1 * o2) + w13 / (s2 * o2) * (ey - s2 * o2) +
            q3 / o2 * (ez - o2));
  out[5] = wm / 2.0 *
           (1.0 + q2 / (s1 * wm) * (ex - s1 * wm) + q3 / (s2 * wm) * (ey - s2 * wm) +
            w23 / wm * (ez - wm));

  // eps_x, eps_y, eps_z divide the position formulas; sqrt(eps_p) the momentum ones.
  const struct {
    std::string_view name;
    double value;
    bool positions;
  } denominators[] = {{"eps_x", ex, true},         {"eps_y", ey, true},
                      {"eps_z", ez, true},         {"sqrt(eps_p1)", s1, false},
                      {"sqrt(eps_p2)", s2, false}};
  for (const auto& d : denominators) {
    if (d.value < kDivergenceFloor) {
      mark_divergent(v, d.name, d.value);
      const std::size_t first = d.positions ? 0 : 3;
      for (std::size_t i = first; i < first + 3; ++i) out[i] = kInf;
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i) v.squeezed[i] = out[i] < kCoherentVariance;
  return v;
}

std::vector<SweepPoint> variance_sweep(const LinearizedParams& lp_base, CouplingAxis which,
                                       std::span<const double> grid) {
  std::vector<SweepPoint> points(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    SweepPoint& pt = points[i];
    pt.coupling = grid[i];
    const LinearizedParams lp = with_coupling(lp_base, which, grid[i]);
    const NormalModeResult nm = excitation_energies(lp);
    pt.phase = nm.phase;
    try {
      pt.variances = variances(lp, nm);
      pt.status = pt.variances.divergent ? PointStatus::Divergent : PointStatus::Ok;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutsideNormalPhase) throw;
      pt.status = PointStatus::OutsideNormalPhase;
    }
  });
  return points;
}

}  // namespace optomech
