#pragma once

#include <string_view>
#include <vector>

namespace optomech::simd {

/// Instruction-set variants the kernels are built for.
enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Every variant usable on this machine, Scalar first.
std::vector<Isa> available_isas();

/// Variant used by default: the widest available one, unless the
/// OPTOMECH_KERNEL environment variable names another ("scalar", "avx2").
Isa active_isa();

}  // namespace optomech::simd
