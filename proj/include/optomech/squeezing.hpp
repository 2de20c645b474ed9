#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/normal_modes.hpp"
#include "optomech/params.hpp"

namespace optomech {

enum class Quadrature { X, Y, Z, PX, PY, PZ };

inline constexpr std::array<Quadrature, 6> kQuadratures{Quadrature::X,  Quadrature::Y,
                                                        Quadrature::Z,  Quadrature::PX,
                                                        Quadrature::PY, Quadrature::PZ};

std::string_view to_string(Quadrature q) noexcept;

/// Threshold below which a variance counts as squeezed (coherent-state value).
inline constexpr double kCoherentVariance = 0.5;
/// Denominators smaller than this turn the affected variances into +infinity.
inline constexpr double kDivergenceFloor = 1e-12;

struct VarianceSet {
  std::array<double, 6> values{};
  std::array<bool, 6> squeezed{};
  bool divergent = false;
  /// Name and value of the smallest offending denominator when divergent.
  std::string divergent_denominator;
  double divergent_value = 0.0;

  double operator[](Quadrature q) const { return values[static_cast<std::size_t>(q)]; }
  bool is_squeezed(Quadrature q) const { return squeezed[static_cast<std::size_t>(q)]; }
};

/// Closed-form quadrature variances of the ground state in the normal
/// phase.  Throws OutsideNormalPhase otherwise.
VarianceSet variances(const LinearizedParams& lp);

/// Same, from precomputed closed-form energies (must match lp).
VarianceSet variances(const LinearizedParams& lp, const NormalModeResult& nm);

enum class CouplingAxis { Lambda, G1, G2 };

std::string_view to_string(CouplingAxis axis) noexcept;
/// Parses "lambda", "G1" or "G2"; throws InvalidArgument otherwise.
CouplingAxis parse_axis(std::string_view name);

/// Copy of lp with the selected coupling replaced.
LinearizedParams with_coupling(LinearizedParams lp, CouplingAxis axis, double value);

enum class PointStatus { Ok, Divergent, OutsideNormalPhase };

std::string_view to_string(PointStatus s) noexcept;

struct SweepPoint {
  double coupling = 0.0;
  PointStatus status = PointStatus::Ok;
  Phase phase = Phase::Normal;
  /// Populated unless status is OutsideNormalPhase.
  VarianceSet variances;
};

/// Evaluates variances along a grid of one coupling.  Points outside the
/// normal phase are flagged rather than thrown.  Output order matches grid.
std::vector<SweepPoint> variance_sweep(const LinearizedParams& lp_base, CouplingAxis which,
                                       std::span<const double> grid);

}  // namespace optomech
