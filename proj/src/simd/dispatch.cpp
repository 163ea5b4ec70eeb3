#include <cstdlib>
#include <string>

#include "sgc/simd/kernels.hpp"

namespace sgc::simd {

namespace detail {
#ifndef SGC_BUILD_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef SGC_BUILD_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif
}  // namespace detail

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_kernels();
    case Isa::kAvx2:
#if defined(SGC_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
      if (__builtin_cpu_supports("avx2")) return detail::avx2_kernels();
#endif
      return nullptr;
    case Isa::kNeon:
      return detail::neon_kernels();
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* forced = std::getenv("SGC_SIMD");
    if (forced && std::string(forced) == "scalar") return scalar_kernels();
    for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
      if (const auto* t = kernels_for(isa)) return *t;
    }
    return scalar_kernels();
  }();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

void scale(double alpha, std::span<double> x) { active().scale(alpha, x.data(), x.size()); }

}  // namespace sgc::simd
