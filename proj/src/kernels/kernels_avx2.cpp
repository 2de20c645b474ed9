// Compiled with -mavx2 only (no -mfma): every operation below is a single
// correctly-rounded IEEE op, so results match the scalar variant bit for bit.

#include <immintrin.h>

#include <cstddef>

#include "kernels_internal.hpp"
#include "optomech/kernels.hpp"

namespace optomech::kernels::avx2_impl {

namespace {

struct Lane {
  static constexpr std::size_t width = 4;
  __m256d v;

  static Lane broadcast(double x) { return {_mm256_set1_pd(x)}; }
  static Lane load(const double* p) { return {_mm256_loadu_pd(p)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }

  friend Lane operator+(Lane a, Lane b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend Lane operator-(Lane a, Lane b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend Lane operator*(Lane a, Lane b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend Lane operator/(Lane a, Lane b) { return {_mm256_div_pd(a.v, b.v)}; }
};

#include "complex_lane.ipp"
#include "em_kernel.ipp"
#include "spectrum_kernel.ipp"

}  // namespace

void displacement_spectrum(const SpectrumInputs& in, const double* omega, const double* thermal,
                           double* out, std::size_t n) {
  spectrum_run<Lane>(in, omega, thermal, out, n);
}

void euler_maruyama(const EulerStep& step, double* state, const double* noise, std::size_t steps,
                    double* q_out, double* state_out) {
  em_run<Lane>(step, state, noise, steps, q_out, state_out);
}

}  // namespace optomech::kernels::avx2_impl
