#include "optomech/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "optomech/error.hpp"
#include "optomech/kernels.hpp"
#include "optomech/parallel.hpp"
#include "welch.hpp"

namespace optomech {

namespace {

constexpr std::size_t kChunkSteps = 4096;

kernels::EulerStep make_step(const DriftMatrix& dm, double dt, bool noise) {
  kernels::EulerStep step{};
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      step.propagator[r * 6 + c] = (r == c ? 1.0 : 0.0) + dt * dm.A(r, c);
    }
  }
  for (std::size_t ch = 0; ch < kNumInputs; ++ch) {
    step.noise_scale[ch] = noise ? dm.noise_map[ch] * std::sqrt(dt) : 0.0;
  }
  return step;
}

double resolve_dt(const DriftMatrix& dm, double dt) {
  if (dt == 0.0) dt = default_dt(dm);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidStep, "dt must be positive and finite");
  }
  const double amax = dm.A.cwiseAbs().maxCoeff();
  if (dt * amax > kMaxStepProduct) {
    throw Error(ErrorCode::InvalidStep, "dt * max|A| = " + std::to_string(dt * amax) +
                                            " exceeds " + std::to_string(kMaxStepProduct));
  }
  return dt;
}

void require_stable(const DriftMatrix& dm) {
  if (!(dm.spectral_abscissa < 0.0)) {
    throw Error(ErrorCode::Unstable,
                "drift matrix spectral abscissa " + std::to_string(dm.spectral_abscissa) +
                    " (eigenvalue " + std::to_string(dm.leading_eigenvalue.real()) + " + " +
                    std::to_string(dm.leading_eigenvalue.imag()) + "i)");
  }
}

void check_finite_chunk(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v) || std::abs(v) > kOverflowGuard) {
      throw Error(ErrorCode::Unstable, "trajectory diverged");
    }
  }
}

}  // namespace

double thermal_intensity(const LinearizedParams& lp) {
  return lp.gamma_m / lp.omega_m * 2.0 * lp.T_dim;
}

DriftMatrix drift_matrix(const LinearizedParams& lp) {
  DriftMatrix dm;
  Matrix6& a = dm.A;
  const double D1 = lp.Delta1();
  const double D2 = lp.Delta2();

  a(kX1, kX1) = -lp.gamma_c1 / 2.0;
  a(kX1, kY1) = -D1;
  a(kX1, kY2) = lp.lambda;

  a(kY1, kX1) = D1;
  a(kY1, kY1) = -lp.gamma_c1 / 2.0;
  a(kY1, kX2) = -lp.lambda;
  a(kY1, kQ) = lp.G1;

  a(kX2, kY1) = lp.lambda;
  a(kX2, kX2) = -lp.gamma_c2 / 2.0;
  a(kX2, kY2) = -D2;

  a(kY2, kX1) = -lp.lambda;
  a(kY2, kX2) = D2;
  a(kY2, kY2) = -lp.gamma_c2 / 2.0;
  a(kY2, kQ) = lp.G2;

  a(kQ, kP) = lp.omega_m;

  a(kP, kX1) = lp.G1;
  a(kP, kX2) = lp.G2;
  a(kP, kQ) = -lp.omega_m;
  a(kP, kP) = -lp.gamma_m;

  dm.noise_map = {std::sqrt(lp.gamma_c1), std::sqrt(lp.gamma_c1), std::sqrt(lp.gamma_c2),
                  std::sqrt(lp.gamma_c2), std::sqrt(thermal_intensity(lp))};

  Eigen::EigenSolver<Matrix6> es(a, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "drift-matrix eigensolver did not converge");
  }
  dm.spectral_abscissa = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 6; ++i) {
    const cdouble ev = es.eigenvalues()(static_cast<Eigen::Index>(i));
    dm.eigenvalues[i] = ev;
    dm.spectral_radius = std::max(dm.spectral_radius, std::abs(ev));
    if (ev.real() > dm.spectral_abscissa ||
        (ev.real() == dm.spectral_abscissa && ev.imag() > dm.leading_eigenvalue.imag())) {
      dm.spectral_abscissa = ev.real();
      dm.leading_eigenvalue = ev;
    }
  }
  return dm;
}

double default_dt(const DriftMatrix& dm) {
  return 2.0 * std::numbers::pi / (400.0 * dm.spectral_radius);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream & 0xffffffffu),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * kScale;  // (0, 1]
  const double u2 = static_cast<double>(engine_() >> 11) * kScale;          // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::vector<double> Trajectory::component(std::size_t c) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, c);
  return out;
}

Trajectory simulate(const LinearizedParams& lp, const SimulationOptions& opts) {
  lp.require_positive_frequencies();
  if (opts.n_steps == 0) throw Error(ErrorCode::InvalidStep, "n_steps must be >= 1");
  if (opts.decimation == 0) throw Error(ErrorCode::InvalidArgument, "decimation must be >= 1");
  const DriftMatrix dm = drift_matrix(lp);
  require_stable(dm);
  const double dt = resolve_dt(dm, opts.dt);
  const kernels::EulerStep step = make_step(dm, dt, opts.noise);

  Trajectory traj;
  traj.dt = dt;
  traj.decimation = opts.decimation;
  traj.seed = opts.seed;
  traj.stream = opts.stream;
  traj.params = lp;
  traj.samples.reserve((opts.n_steps / opts.decimation + 1) * 6);
  traj.samples.insert(traj.samples.end(), opts.initial_state.begin(), opts.initial_state.end());

  // The batch kernel runs kBatch lanes; this trajectory occupies lane 0
  // and the other lanes stay at rest.
  constexpr std::size_t B = kernels::kBatch;
  std::vector<double> state(6 * B, 0.0);
  for (std::size_t r = 0; r < 6; ++r) state[r * B] = opts.initial_state[r];
  std::vector<double> noise(kChunkSteps * kNumInputs * B, 0.0);
  std::vector<double> full(kChunkSteps * 6 * B);
  GaussianStream rng(opts.seed, opts.stream);

  std::size_t done = 0;
  while (done < opts.n_steps) {
    const std::size_t steps = std::min(kChunkSteps, opts.n_steps - done);
    if (opts.noise) {
      for (std::size_t n = 0; n < steps; ++n) {
        for (std::size_t ch = 0; ch < kNumInputs; ++ch) noise[(n * kNumInputs + ch) * B] = rng.next();
      }
    }
    kernels::euler_maruyama(opts.isa, step, state,
                            std::span<const double>(noise).first(steps * kNumInputs * B), steps, {},
                            std::span<double>(full).first(steps * 6 * B));
    for (std::size_t n = 0; n < steps; ++n) {
      if ((done + n + 1) % opts.decimation != 0) continue;
      for (std::size_t r = 0; r < 6; ++r) traj.samples.push_back(full[(n * 6 + r) * B]);
    }
    check_finite_chunk(std::span<const double>(state));
    done += steps;
  }
  check_finite_chunk(traj.samples);
  return traj;
}

Trajectory simulate(const LinearizedParams& lp, double dt, std::size_t n_steps, std::uint64_t seed) {
  SimulationOptions opts;
  opts.dt = dt;
  opts.n_steps = n_steps;
  opts.seed = seed;
  return simulate(lp, opts);
}

PsdEstimate welch_psd(std::span<const double> x, double dt, std::size_t segment_len,
                      double overlap_frac) {
  if (segment_len > x.size()) {
    throw Error(ErrorCode::TooShort, "segment length " + std::to_string(segment_len) +
                                         " exceeds " + std::to_string(x.size()) + " samples");
  }
  detail::WelchAccumulator acc(dt, segment_len, overlap_frac);
  acc.push(x);

  PsdEstimate est;
  est.segments = acc.segments();
  est.bin_width = acc.bin_width();
  est.omega.resize(acc.bins());
  est.psd.resize(acc.bins());
  for (std::size_t k = 0; k < acc.bins(); ++k) {
    est.omega[k] = est.bin_width * static_cast<double>(k);
    est.psd[k] = acc.sum()[k] / static_cast<double>(acc.segments());
  }
  return est;
}

PsdEstimate estimate_psd(const Trajectory& traj, std::size_t segment_len, double overlap_frac) {
  const std::vector<double> q = traj.component(kQ);
  return welch_psd(q, traj.sample_dt(), segment_len, overlap_frac);
}

PsdEstimate simulate_psd(const LinearizedParams& lp, const EnsembleOptions& opts) {
  lp.require_positive_frequencies();
  if (opts.trajectories == 0) throw Error(ErrorCode::InvalidArgument, "trajectories must be >= 1");
  if (opts.n_steps == 0) throw Error(ErrorCode::InvalidStep, "n_steps must be >= 1");
  if (opts.segment_len > opts.n_steps) {
    throw Error(ErrorCode::TooShort, "segment length exceeds the number of steps");
  }
  const DriftMatrix dm = drift_matrix(lp);
  require_stable(dm);
  const double dt = resolve_dt(dm, opts.dt);
  const kernels::EulerStep step = make_step(dm, dt, true);

  constexpr std::size_t B = kernels::kBatch;
  const std::size_t batches = (opts.trajectories + B - 1) / B;

  struct LaneResult {
    std::vector<double> sum;
    std::size_t segments = 0;
  };
  std::vector<LaneResult> lanes(batches * B);
  double bin_width = 0.0;

  parallel_for(batches, [&](std::size_t b) {
    std::vector<GaussianStream> rng;
    std::vector<std::unique_ptr<detail::WelchAccumulator>> welch;
    for (std::size_t l = 0; l < B; ++l) {
      rng.emplace_back(opts.seed, b * B + l);
      welch.push_back(std::make_unique<detail::WelchAccumulator>(dt, opts.segment_len, opts.overlap_frac));
    }
    std::vector<double> state(6 * B, 0.0);
    std::vector<double> noise(kChunkSteps * kNumInputs * B);
    std::vector<double> q(kChunkSteps * B);
    std::vector<double> lane_q(kChunkSteps);

    std::size_t done = 0;
    while (done < opts.n_steps) {
      const std::size_t steps = std::min(kChunkSteps, opts.n_steps - done);
      // Draw order: step, channel, lane.  Each lane reads only its own stream.
      for (std::size_t n = 0; n < steps; ++n) {
        for (std::size_t ch = 0; ch < kNumInputs; ++ch) {
          for (std::size_t l = 0; l < B; ++l) noise[(n * kNumInputs + ch) * B + l] = rng[l].next();
        }
      }
      kernels::euler_maruyama(opts.isa, step, state,
                              std::span<const double>(noise).first(steps * kNumInputs * B), steps,
                              std::span<double>(q).first(steps * B));
      check_finite_chunk(state);
      for (std::size_t l = 0; l < B; ++l) {
        for (std::size_t n = 0; n < steps; ++n) lane_q[n] = q[n * B + l];
        welch[l]->push(std::span<const double>(lane_q).first(steps));
      }
      done += steps;
    }
    for (std::size_t l = 0; l < B; ++l) {
      lanes[b * B + l] = {welch[l]->sum(), welch[l]->segments()};
    }
    if (b == 0) bin_width = welch[0]->bin_width();
  });

  PsdEstimate est;
  est.bin_width = bin_width;
  const std::size_t bins = lanes.front().sum.size();
  std::vector<double> total(bins, 0.0);
  for (std::size_t t = 0; t < opts.trajectories; ++t) {
    for (std::size_t k = 0; k < bins; ++k) total[k] += lanes[t].sum[k];
    est.segments += lanes[t].segments;
  }
  est.omega.resize(bins);
  est.psd.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    est.omega[k] = bin_width * static_cast<double>(k);
    est.psd[k] = total[k] / static_cast<double>(est.segments);
  }
  return est;
}

PsdComparison compare_with_analytic(const LinearizedParams& lp, const PsdEstimate& psd,
                                    double band_max, double prominence_frac) {
  PsdComparison cmp;
  cmp.band_max = band_max;
  cmp.bin_width = psd.bin_width;

  std::vector<double> omega;
  std::vector<double> simulated;
  for (std::size_t k = 0; k < psd.omega.size(); ++k) {
    if (psd.omega[k] > 0.0 && psd.omega[k] <= band_max) {
      omega.push_back(psd.omega[k]);
      simulated.push_back(psd.psd[k]);
    }
  }
  if (omega.size() < 3) throw Error(ErrorCode::TooShort, "fewer than 3 Welch bins in the band");

  const SpectrumResult analytic = displacement_spectrum(lp, omega, StabilityPolicy::ReportOnly);
  std::vector<double> exact = analytic.s_values;

  auto normalize = [](std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    for (double& x : v) x /= m;
  };
  normalize(exact);
  normalize(simulated);

  cmp.analytic_peaks = find_peaks(omega, exact, prominence_frac);
  cmp.simulated_peaks = find_peaks(omega, simulated, prominence_frac);

  for (const Peak& a : cmp.analytic_peaks) {
    PeakMatch m;
    m.omega_analytic = a.omega_peak;
    m.height_analytic = a.height;
    m.delta_bins = std::numeric_limits<double>::infinity();
    m.height_rel_error = std::numeric_limits<double>::infinity();
    for (const Peak& s : cmp.simulated_peaks) {
      const double d = std::abs(s.omega_peak - a.omega_peak) / psd.bin_width;
      if (d < m.delta_bins) {
        m.delta_bins = d;
        m.omega_simulated = s.omega_peak;
        m.height_simulated = s.height;
        m.height_rel_error = std::abs(s.height - a.height) / a.height;
      }
    }
    cmp.max_delta_bins = std::max(cmp.max_delta_bins, m.delta_bins);
    cmp.max_height_rel_error = std::max(cmp.max_height_rel_error, m.height_rel_error);
    cmp.matches.push_back(m);
  }
  return cmp;
}

}  // namespace optomech
