#pragma once

// Dense double-precision kernels behind the embedding and scoring code.
//
// Every variant reduces in the same order: four interleaved lane
// accumulators over the 4-aligned prefix, combined as (l0 + l1) + (l2 + l3),
// then the tail added sequentially. With FMA contraction disabled this makes
// the scalar and vector paths bit-identical, so results never depend on the
// host CPU.

#include <cstddef>
#include <span>
#include <string_view>

namespace sgc::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] = y[i] + alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] = x[i] * alpha
  void (*scale)(double alpha, double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* kernels_for(Isa isa);

/// Best available variant; SGC_SIMD=scalar in the environment forces scalar.
const KernelTable& active();

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

namespace detail {
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();
}  // namespace detail

}  // namespace sgc::simd
