#pragma once

// Per-ISA entry points.  Each lives in its own translation unit so the AVX2
// one can be compiled with -mavx2 without leaking AVX2 code into shared
// inline functions.

#include <cstddef>

namespace optomech::kernels {
struct SpectrumInputs;
struct EulerStep;
}  // namespace optomech::kernels

namespace optomech::kernels::scalar_impl {
void displacement_spectrum(const SpectrumInputs& in, const double* omega, const double* thermal,
                           double* out, std::size_t n);
void euler_maruyama(const EulerStep& step, double* state, const double* noise, std::size_t steps,
                    double* q_out, double* state_out);
}  // namespace optomech::kernels::scalar_impl

namespace optomech::kernels::avx2_impl {
void displacement_spectrum(const SpectrumInputs& in, const double* omega, const double* thermal,
                           double* out, std::size_t n);
void euler_maruyama(const EulerStep& step, double* state, const double* noise, std::size_t steps,
                    double* q_out, double* state_out);
}  // namespace optomech::kernels::avx2_impl
