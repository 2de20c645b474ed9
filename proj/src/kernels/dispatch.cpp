#include <cstdlib>
#include <string>
#include <string_view>

#include "kernels_internal.hpp"
#include "optomech/error.hpp"
#include "optomech/kernels.hpp"
#include "optomech/simd/dispatch.hpp"

namespace optomech::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(OPTOMECH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (isa_available(Isa::Avx2)) out.push_back(Isa::Avx2);
  return out;
}

Isa active_isa() {
  if (const char* env = std::getenv("OPTOMECH_KERNEL")) {
    const std::string_view name(env);
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace optomech::simd

namespace optomech::kernels {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

void displacement_spectrum(simd::Isa isa, const SpectrumInputs& in, std::span<const double> omega,
                           std::span<const double> thermal, std::span<double> out) {
  require(thermal.size() == omega.size() && out.size() == omega.size(),
          "spectrum kernel: span length mismatch");
  switch (isa) {
#ifdef OPTOMECH_HAVE_AVX2
    case simd::Isa::Avx2:
      require(simd::isa_available(isa), "avx2 kernel not available on this CPU");
      avx2_impl::displacement_spectrum(in, omega.data(), thermal.data(), out.data(), omega.size());
      return;
#endif
    default:
      scalar_impl::displacement_spectrum(in, omega.data(), thermal.data(), out.data(),
                                         omega.size());
  }
}

void euler_maruyama(simd::Isa isa, const EulerStep& step, std::span<double> state,
                    std::span<const double> noise, std::size_t steps, std::span<double> q_out,
                    std::span<double> state_out) {
  require(state.size() == kStateDim * kBatch, "euler_maruyama: state must be 6 x kBatch");
  require(noise.size() == steps * kNoiseChannels * kBatch, "euler_maruyama: noise length mismatch");
  require(q_out.empty() || q_out.size() == steps * kBatch, "euler_maruyama: q_out length mismatch");
  require(state_out.empty() || state_out.size() == steps * kStateDim * kBatch,
          "euler_maruyama: state_out length mismatch");
  double* q = q_out.empty() ? nullptr : q_out.data();
  double* full = state_out.empty() ? nullptr : state_out.data();
  switch (isa) {
#ifdef OPTOMECH_HAVE_AVX2
    case simd::Isa::Avx2:
      require(simd::isa_available(isa), "avx2 kernel not available on this CPU");
      avx2_impl::euler_maruyama(step, state.data(), noise.data(), steps, q, full);
      return;
#endif
    default:
      scalar_impl::euler_maruyama(step, state.data(), noise.data(), steps, q, full);
  }
}

}  // namespace optomech::kernels
