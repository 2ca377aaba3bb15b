#include "kernels_impl.hpp"

namespace zparam::kernels::detail {

// Reference kernels: strict left-to-right accumulation, no fused multiply-add.

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    y[i] += alpha * x[i];
}

} // namespace zparam::kernels::detail
