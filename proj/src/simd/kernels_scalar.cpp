#include "sgc/simd/kernels.hpp"

namespace sgc::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    l0 = l0 + a[i] * b[i];
    l1 = l1 + a[i + 1] * b[i + 1];
    l2 = l2 + a[i + 2] * b[i + 2];
    l3 = l3 + a[i + 3] * b[i + 3];
  }
  double sum = (l0 + l1) + (l2 + l3);
  for (; i < n; ++i) sum = sum + a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * alpha;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static constexpr KernelTable table{Isa::kScalar, &dot_scalar, &axpy_scalar, &scale_scalar};
  return table;
}

}  // namespace sgc::simd
