#include <cstddef>

#include "kernels_internal.hpp"
#include "optomech/kernels.hpp"

namespace optomech::kernels::scalar_impl {

namespace {

struct Lane {
  static constexpr std::size_t width = 1;
  double v;

  static Lane broadcast(double x) { return {x}; }
  static Lane load(const double* p) { return {*p}; }
  void store(double* p) const { *p = v; }

  friend Lane operator+(Lane a, Lane b) { return {a.v + b.v}; }
  friend Lane operator-(Lane a, Lane b) { return {a.v - b.v}; }
  friend Lane operator*(Lane a, Lane b) { return {a.v * b.v}; }
  friend Lane operator/(Lane a, Lane b) { return {a.v / b.v}; }
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

}  // namespace optomech::kernels::scalar_impl
