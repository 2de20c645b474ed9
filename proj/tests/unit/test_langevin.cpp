#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "optomech/error.hpp"
#include "optomech/langevin.hpp"
#include "optomech/parallel.hpp"

using namespace optomech;

namespace {

constexpr double kPi = std::numbers::pi;

LinearizedParams damped() {
  LinearizedParams lp;
  lp.Omega1 = 0.8;
  lp.Omega2 = 1.4;
  lp.G1 = 0.3;
  lp.G2 = 0.5;
  lp.lambda = 0.1;
  lp.G_cross = 0.5;
  lp.gamma_c1 = 0.3;
  lp.gamma_c2 = 0.4;
  lp.gamma_m = 0.05;
  lp.T_dim = 2.0;
  return lp;
}

LinearizedParams fig4() {
  LinearizedParams lp;
  lp.Omega1 = 1.3;
  lp.Omega2 = 1.5;
  lp.G1 = 2.0;
  lp.G2 = 6.0;
  lp.lambda = 0.18;
  lp.G_cross = 1.5;
  lp.gamma_c1 = 0.2;
  lp.gamma_c2 = 0.6;
  lp.gamma_m = 1e-4;
  lp.T_dim = 1e5;
  return lp;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("drift_matrix: entry audit") {
  // One line per equation of motion, transcribed as (row, column, value).
  const LinearizedParams lp = damped();
  const double D1 = -lp.Omega1, D2 = -lp.Omega2;
  struct Entry {
    std::size_t r, c;
    double v;
  };
  const Entry table[] = {
      // dX1 = -D1 Y1 + lambda Y2 - gc1/2 X1
      {kX1, kY1, -D1}, {kX1, kY2, lp.lambda}, {kX1, kX1, -lp.gamma_c1 / 2},
      // dY1 = D1 X1 - lambda X2 - gc1/2 Y1 + G1 Q
      {kY1, kX1, D1}, {kY1, kX2, -lp.lambda}, {kY1, kY1, -lp.gamma_c1 / 2}, {kY1, kQ, lp.G1},
      // dX2 = -D2 Y2 + lambda Y1 - gc2/2 X2
      {kX2, kY2, -D2}, {kX2, kY1, lp.lambda}, {kX2, kX2, -lp.gamma_c2 / 2},
      // dY2 = D2 X2 - lambda X1 - gc2/2 Y2 + G2 Q
      {kY2, kX2, D2}, {kY2, kX1, -lp.lambda}, {kY2, kY2, -lp.gamma_c2 / 2}, {kY2, kQ, lp.G2},
      // dQ = wm P
      {kQ, kP, lp.omega_m},
      // dP = -wm Q - gm P + G1 X1 + G2 X2
      {kP, kQ, -lp.omega_m}, {kP, kP, -lp.gamma_m}, {kP, kX1, lp.G1}, {kP, kX2, lp.G2},
  };
  Matrix6 expected = Matrix6::Zero();
  for (const Entry& e : table) expected(e.r, e.c) = e.v;
  const DriftMatrix dm = drift_matrix(lp);
  CHECK((dm.A - expected).cwiseAbs().maxCoeff() == 0.0);

  CHECK(dm.noise_map[0] == std::sqrt(lp.gamma_c1));
  CHECK(dm.noise_map[1] == std::sqrt(lp.gamma_c1));
  CHECK(dm.noise_map[2] == std::sqrt(lp.gamma_c2));
  CHECK(dm.noise_map[3] == std::sqrt(lp.gamma_c2));
  CHECK(dm.noise_map[4] == doctest::Approx(std::sqrt(lp.gamma_m * 2 * lp.T_dim)));
  CHECK(dm.noise_rows == std::array<std::size_t, 5>{kX1, kY1, kX2, kY2, kP});
}

TEST_CASE("drift_matrix: decoupled eigenvalues") {
  LinearizedParams lp = damped();
  lp.G1 = lp.G2 = lp.lambda = 0.0;
  const DriftMatrix dm = drift_matrix(lp);
  auto has = [&](cdouble z) {
    return std::any_of(dm.eigenvalues.begin(), dm.eigenvalues.end(),
                       [&](cdouble e) { return std::abs(e - z) <= 1e-12; });
  };
  CHECK(has({-lp.gamma_c1 / 2, lp.Omega1}));
  CHECK(has({-lp.gamma_c1 / 2, -lp.Omega1}));
  CHECK(has({-lp.gamma_c2 / 2, lp.Omega2}));
  CHECK(has({-lp.gamma_c2 / 2, -lp.Omega2}));
  // s^2 + gm s + wm^2 = 0.
  const double im = std::sqrt(1.0 - lp.gamma_m * lp.gamma_m / 4);
  CHECK(has({-lp.gamma_m / 2, im}));
  CHECK(has({-lp.gamma_m / 2, -im}));
  CHECK(dm.spectral_abscissa == doctest::Approx(-lp.gamma_m / 2));
  CHECK(dm.spectral_radius == doctest::Approx(std::hypot(lp.Omega2, lp.gamma_c2 / 2)));
}

TEST_CASE("drift_matrix: fig4 parameters have a growing mode") {
  const DriftMatrix dm = drift_matrix(fig4());
  CHECK(dm.spectral_abscissa == doctest::Approx(2.3739818404159942).epsilon(1e-10));
  CHECK(dm.leading_eigenvalue.real() == dm.spectral_abscissa);
}

TEST_CASE("default_dt and thermal_intensity") {
  const DriftMatrix dm = drift_matrix(damped());
  CHECK(default_dt(dm) == doctest::Approx(2 * kPi / (400 * dm.spectral_radius)));
  CHECK(thermal_intensity(damped()) == doctest::Approx(0.05 * 2 * 2.0));
}

TEST_CASE("GaussianStream: deterministic, stream-separated, standard normal") {
  GaussianStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differs_c = false, differs_d = false;
  double sum = 0, sum2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = a.next();
    CHECK(x == b.next());
    differs_c |= x != c.next();
    differs_d |= x != d.next();
    sum += x;
    sum2 += x * x;
  }
  CHECK(differs_c);
  CHECK(differs_d);
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("simulate: zero noise from rest stays at rest") {
  SimulationOptions o;
  o.n_steps = 5000;
  o.noise = false;
  const Trajectory t = simulate(damped(), o);
  CHECK(t.size() == 5001);
  for (double x : t.samples) CHECK(x == 0.0);
}

TEST_CASE("simulate: zero noise decays") {
  SimulationOptions o;
  o.noise = false;
  o.initial_state = {0.3, -0.2, 0.5, 0.1, 1.0, -0.4};
  const DriftMatrix dm = drift_matrix(damped());
  const double dt = default_dt(dm);
  const double period = 2 * kPi;
  o.n_steps = static_cast<std::size_t>(60 * period / dt);
  const Trajectory t = simulate(damped(), o);
  // Envelope: max norm over consecutive windows of one period decreases.
  const auto window = static_cast<std::size_t>(period / dt);
  double prev = INFINITY;
  for (std::size_t s = 0; s + window <= t.size(); s += window) {
    double m = 0;
    for (std::size_t i = s; i < s + window; ++i) {
      double n2 = 0;
      for (std::size_t c = 0; c < 6; ++c) n2 += t.at(i, c) * t.at(i, c);
      m = std::max(m, n2);
    }
    if (s >= 5 * window) CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("simulate: deterministic for a fixed seed") {
  SimulationOptions o;
  o.n_steps = 20000;
  o.seed = 99;
  const Trajectory a = simulate(damped(), o);
  const Trajectory b = simulate(damped(), o);
  CHECK(same_bits(a.samples, b.samples));
  o.seed = 100;
  CHECK_FALSE(same_bits(a.samples, simulate(damped(), o).samples));
  for (simd::Isa isa : simd::available_isas()) {
    o.seed = 99;
    o.isa = isa;
    CHECK(same_bits(a.samples, simulate(damped(), o).samples));
  }
}

TEST_CASE("simulate: decimation keeps every k-th sample") {
  SimulationOptions o;
  o.n_steps = 1000;
  o.seed = 5;
  const Trajectory full = simulate(damped(), o);
  o.decimation = 10;
  const Trajectory dec = simulate(damped(), o);
  CHECK(dec.size() == 101);
  CHECK(dec.sample_dt() == doctest::Approx(10 * full.dt));
  for (std::size_t i = 0; i < dec.size(); ++i) {
    for (std::size_t c = 0; c < 6; ++c) CHECK(dec.at(i, c) == full.at(10 * i, c));
  }
}

TEST_CASE("simulate: errors") {
  SimulationOptions o;
  o.n_steps = 0;
  CHECK(code_of([&] { simulate(damped(), o); }) == ErrorCode::InvalidStep);
  o.n_steps = 10;
  o.dt = 1.0;
  CHECK(code_of([&] { simulate(damped(), o); }) == ErrorCode::InvalidStep);
  o.dt = -1e-3;
  CHECK(code_of([&] { simulate(damped(), o); }) == ErrorCode::InvalidStep);
  o.dt = 0.0;
  CHECK(code_of([&] { simulate(fig4(), o); }) == ErrorCode::Unstable);
  o.decimation = 0;
  CHECK(code_of([&] { simulate(damped(), o); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("simulate: long-run variance settles") {
  // Cauchy test over doubling windows of the second half of each prefix.
  LinearizedParams lp = damped();
  lp.gamma_m = 0.5;
  const Trajectory t = simulate(lp, 0.0, 1u << 21, 7);
  std::vector<double> v;
  for (std::size_t len = 1u << 18; len <= t.size(); len *= 2) {
    double s = 0, s2 = 0;
    const std::size_t from = len / 2;
    for (std::size_t i = from; i < len; ++i) {
      s += t.at(i, kQ);
      s2 += t.at(i, kQ) * t.at(i, kQ);
    }
    const double n = static_cast<double>(len - from);
    v.push_back(s2 / n - (s / n) * (s / n));
  }
  REQUIRE(v.size() >= 3);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(std::abs(v[i] - v[i - 1]) < 0.15 * v[i]);
}

TEST_CASE("welch_psd: sinusoid gives a single line") {
  const double dt = 0.01;
  const std::size_t n = 1u << 16, seg = 4096;
  const double w0 = 2 * kPi * 300.5 / (seg * dt);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(w0 * static_cast<double>(i) * dt);
  const PsdEstimate p = welch_psd(x, dt, seg, 0.5);
  CHECK(p.segments == 31);
  CHECK(p.omega.size() == seg / 2 + 1);
  CHECK(p.bin_width == doctest::Approx(2 * kPi / (seg * dt)));
  const auto k = static_cast<std::size_t>(std::max_element(p.psd.begin(), p.psd.end()) - p.psd.begin());
  CHECK(std::abs(p.omega[k] - w0) <= p.bin_width);
}

TEST_CASE("welch_psd: white noise is flat with the right level") {
  const double dt = 0.05, sigma = 1.7;
  const std::size_t n = 1u << 20, seg = 1024;
  GaussianStream g(3, 0);
  std::vector<double> x(n);
  for (double& v : x) v = sigma * g.next();
  const PsdEstimate p = welch_psd(x, dt, seg, 0.0);
  REQUIRE(p.segments == n / seg);
  // Two-sided density of a white sequence: sigma^2 dt.  Each Welch bin is a
  // mean of K chi-squared(2)/2 variables: relative std 1/sqrt(K).
  const double level = sigma * sigma * dt;
  const double tol = 5.0 / std::sqrt(static_cast<double>(p.segments));
  double mean = 0;
  for (std::size_t k = 1; k + 1 < p.psd.size(); ++k) {
    CHECK(std::abs(p.psd[k] / level - 1.0) < tol);
    mean += p.psd[k];
  }
  mean /= static_cast<double>(p.psd.size() - 2);
  CHECK(mean / level == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("welch_psd: integral matches the variance") {
  const Trajectory t = simulate(damped(), 0.0, 1u << 20, 17);
  const std::vector<double> q = t.component(kQ);
  const PsdEstimate p = welch_psd(q, t.sample_dt(), 1u << 14, 0.5);
  double integral = 0;
  for (std::size_t k = 0; k < p.psd.size(); ++k) {
    const double weight = (k == 0 || k + 1 == p.psd.size()) ? 1.0 : 2.0;
    integral += weight * p.psd[k] * p.bin_width / (2 * kPi);
  }
  double s = 0, s2 = 0;
  for (double v : q) {
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(q.size());
  CHECK(integral == doctest::Approx(s2 / n - (s / n) * (s / n)).epsilon(0.1));
}

TEST_CASE("welch_psd: argument errors") {
  std::vector<double> x(100, 0.0);
  CHECK(code_of([&] { welch_psd(x, 0.1, 200, 0.5); }) == ErrorCode::TooShort);
  CHECK(code_of([&] { welch_psd(x, 0.1, 1, 0.5); }) == ErrorCode::TooShort);
  CHECK(code_of([&] { welch_psd(x, 0.1, 50, 1.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { welch_psd(x, 0.1, 50, -0.1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("estimate_psd uses Q at the sample spacing") {
  SimulationOptions o;
  o.n_steps = 1u << 15;
  o.decimation = 2;
  o.seed = 4;
  const Trajectory t = simulate(damped(), o);
  const PsdEstimate a = estimate_psd(t, 1024, 0.5);
  const std::vector<double> q = t.component(kQ);
  const PsdEstimate b = welch_psd(q, 2 * t.dt, 1024, 0.5);
  CHECK(same_bits(a.psd, b.psd));
}

TEST_CASE("simulate_psd: agrees with the analytic spectrum on a damped set") {
  EnsembleOptions o;
  o.n_steps = 1u << 19;
  o.trajectories = 8;
  o.segment_len = 1u << 14;
  o.seed = 1;
  const PsdEstimate p = simulate_psd(damped(), o);
  CHECK(p.segments == 8 * (2 * (o.n_steps / o.segment_len) - 1));
  // Per bin: 5 sigma of the Welch average plus 5% for the Euler-Maruyama
  // bias.  The band mean is held to the bias alone.
  const double tol = 5.0 / std::sqrt(static_cast<double>(p.segments)) + 0.05;
  std::size_t checked = 0;
  double ratio_sum = 0.0;
  for (std::size_t k = 1; k < p.omega.size(); ++k) {
    if (p.omega[k] < 0.3 || p.omega[k] > 2.0) continue;
    const double s = displacement_spectrum_at([] {
      LinearizedParams lp = damped();
      lp.G_cross = lp.G2;
      return lp;
    }(), p.omega[k]);
    CHECK(std::abs(p.psd[k] / s - 1.0) < tol);
    ratio_sum += p.psd[k] / s;
    ++checked;
  }
  CHECK(checked >= 40);
  CHECK(ratio_sum / static_cast<double>(checked) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("simulate_psd: independent of kernel variant and thread count") {
  EnsembleOptions o;
  o.n_steps = 1u << 14;
  o.trajectories = 6;
  o.segment_len = 1u << 11;
  o.seed = 8;
  o.isa = simd::Isa::Scalar;
  const PsdEstimate ref = simulate_psd(damped(), o);
  for (simd::Isa isa : simd::available_isas()) {
    o.isa = isa;
    CHECK(same_bits(ref.psd, simulate_psd(damped(), o).psd));
  }
  setenv("OPTOMECH_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  CHECK(same_bits(ref.psd, simulate_psd(damped(), o).psd));
  unsetenv("OPTOMECH_THREADS");
}

TEST_CASE("simulate_psd: errors") {
  EnsembleOptions o;
  o.trajectories = 0;
  CHECK(code_of([&] { simulate_psd(damped(), o); }) == ErrorCode::InvalidArgument);
  o.trajectories = 1;
  o.n_steps = 100;
  o.segment_len = 200;
  CHECK(code_of([&] { simulate_psd(damped(), o); }) == ErrorCode::TooShort);
  o.n_steps = 1u << 12;
  o.segment_len = 1u << 10;
  CHECK(code_of([&] { simulate_psd(fig4(), o); }) == ErrorCode::Unstable);
}
